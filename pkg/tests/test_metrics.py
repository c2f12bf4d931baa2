import itertools
import math
from decimal import Decimal
from fractions import Fraction

import pytest

from vortexmoduli.cones import WeightSystem
from vortexmoduli.errors import ConsistencyError, DomainError, UnsupportedKindError
from vortexmoduli.fourier_mukai import (
    AbelianVarietyData,
    dual_torus_presentation,
    fm_kahler_power,
    r_sections_abelian,
)
from vortexmoduli.geometry import (
    AbelianVariety,
    Bidegree,
    Degree,
    DeltaVector,
    GenericPicZ,
    Grassmannian,
    Hirzebruch,
    ProjectiveSpace,
)
from vortexmoduli.metrics import (
    abelian_tower_volume_times_sigma,
    constrained_volume,
    decoupled_sigma,
    kahler_class,
    scalar_curvature_fractional_form,
    strong_coupling_limit,
    total_scalar_curvature,
    volume_moduli,
    volume_projective_space,
    volume_projective_space_via_ring,
    vortex_energy,
)
from vortexmoduli.moduli import GlsmModel, build_moduli
from vortexmoduli.scalars import PI, PiPoly


def tower(manifold, n, tau, e2, principal):
    return GlsmModel.from_principal(
        manifold, WeightSystem.from_rows([[1] * n]), [tau], e2, [principal]
    )


# -- energy -----------------------------------------------------------------


def test_energy_on_curve():
    model = tower(ProjectiveSpace(1), 1, 3, 1, Degree(2))
    assert vortex_energy(model) == PiPoly.pi(1, 12)  # 2 pi tau d


def test_energy_zero_tau_keeps_only_curvature_term():
    model = tower(ProjectiveSpace(2), 1, 0, 1, Degree(2))
    energy = vortex_energy(model)
    # first term vanishes; second is -(2 pi^2 / e^2) d^2 t / 0!
    assert energy == PiPoly.pi(2, -8)


def test_energy_hirzebruch():
    man = Hirzebruch(1, 2, 1)
    model = tower(man, 1, 5, 2, Bidegree(2, 2))
    # first: 2 pi tau m slope = 2 pi 5 * 2 * 2 = 40 pi
    # second: (2 pi^2/e^2) (2ab - a^2 k) = pi^2 (8 - 4) = 4 pi^2
    assert vortex_energy(model) == PiPoly.pi(1, 40) - PiPoly.pi(2, 4)


def test_energy_abelian_surface():
    av = AbelianVarietyData.of([2, 3], [1, 1])
    model = tower(AbelianVariety(av), 1, 7, 1, DeltaVector((2, 3)))
    # slope = (2+3)/2; J = 2 * 2 * 3
    expected = PiPoly.pi(1, 2 * 7 * 2 * Fraction(5, 2)) - PiPoly.pi(2, 2 * 12)
    assert vortex_energy(model) == expected


def test_energy_requires_line_bundle_model():
    model = tower(ProjectiveSpace(1), 2, 5, 1, Degree(1))
    with pytest.raises(DomainError):
        vortex_energy(model)


# -- Kahler class -------------------------------------------------------------


def test_kahler_class_simply_connected_examples():
    # GenericPicZ is absent: without a section-count formula the moduli
    # verdict (the precondition here) cannot be established for it.
    for man, principal in [
        (ProjectiveSpace(2), Degree(3)),
        (ProjectiveSpace(3), Degree(1)),
        (Grassmannian(4, 2), Degree(1)),
        (Hirzebruch(1, 2, 1), Bidegree(2, 2)),
    ]:
        model = tower(man, 1, 200, 1, principal)
        report = kahler_class(model)  # two-route check runs internally
        assert report.eta_coefficients == (PI * model.sigma()[0],)
        assert report.correction_is_zero()


def test_kahler_class_elliptic_curve():
    av = AbelianVarietyData.of([3], [1])
    model = tower(AbelianVariety(av), 1, 100, 2, DeltaVector((3,)))
    report = kahler_class(model)
    pres = dual_torus_presentation(1)
    theta = pres.gen("dxs1") * pres.gen("dxs2")
    assert report.base_correction == theta * PiPoly.pi(2, 1)  # +(2 pi^2 / e^2) theta
    assert report.eta_coefficients == (PI * model.sigma()[0],)


def test_kahler_class_abelian_surface():
    av = AbelianVarietyData.of([2, 4], [1, 1])
    model = tower(AbelianVariety(av), 1, 100, 1, DeltaVector((2, 4)))
    report = kahler_class(model)
    expected = fm_kahler_power(AbelianVarietyData.of([1, 1], [1, 1])) * PiPoly.pi(2, -2)
    assert report.base_correction == expected


def test_kahler_class_glsm_k2():
    model = GlsmModel.from_principal(
        ProjectiveSpace(1),
        WeightSystem.from_rows([[1, 0, 1], [0, 1, 1]]),
        [50, 60],
        1,
        [Degree(1), Degree(1)],
    )
    report = kahler_class(model)
    sigma = model.sigma()
    assert report.eta_coefficients == (PI * sigma[0], PI * sigma[1])


def test_kahler_class_requires_stability():
    model = tower(ProjectiveSpace(1), 1, 2, 1, Degree(1))
    with pytest.raises(DomainError):
        kahler_class(model)


# -- volumes --------------------------------------------------------------------


def test_volume_projective_space_ring_route():
    model = tower(ProjectiveSpace(1), 1, 100, 1, Degree(2))
    sigma = model.sigma()[0]
    value = volume_moduli(model)
    assert value == (PI * sigma) ** 2 * Fraction(1, 2)
    assert value == volume_projective_space_via_ring(2, sigma)


def test_volume_point_is_one():
    model = tower(ProjectiveSpace(1), 1, 100, 1, Degree(0))
    assert volume_moduli(model) == PiPoly([1])


def test_volume_rejects_toric_kinds():
    model = GlsmModel.from_principal(
        ProjectiveSpace(1), WeightSystem.from_rows([[1, 2]]), [100], 1, [Degree(1)]
    )
    with pytest.raises(UnsupportedKindError):
        volume_moduli(model)


def test_abelian_surface_volume_closed_form_grid():
    for d1, d2 in itertools.product((1, 2), repeat=2):
        for lam in ((1, 1), (1, 2)):
            av = AbelianVarietyData.of([d1, d2], list(lam))
            model = tower(AbelianVariety(av), 1, 100, 1, DeltaVector((d1, d2)))
            sigma = model.sigma()[0]
            lhs = volume_moduli(model) * sigma
            rhs = abelian_tower_volume_times_sigma(
                model.vol_m(), Fraction(100), Fraction(1), d1 * d2, 1, sigma
            )
            assert lhs == rhs


def test_weight_one_tower_volume_on_abelian_surface():
    av = AbelianVarietyData.of([1, 2], [1, 1])
    for n in (1, 2, 3):
        model = tower(AbelianVariety(av), n, 100, 1, DeltaVector((1, 2)))
        sigma = model.sigma()[0]
        lhs = volume_moduli(model) * sigma
        rhs = abelian_tower_volume_times_sigma(
            Fraction(1), Fraction(100), Fraction(1), 2, n, sigma
        )
        assert lhs == rhs


def test_volume_monotone_in_tau():
    man = ProjectiveSpace(1)
    values = []
    for tau in (50, 60, 70):
        model = tower(man, 1, tau, 1, Degree(2))
        values.append(Decimal(volume_moduli(model).approx(20)))
    assert values[0] < values[1] < values[2]


def test_constrained_volume_examples():
    sigma = PiPoly([2])
    assert constrained_volume(2, 2, 1, 2, sigma) == PI * sigma  # dim 1, multiplier 1
    model = tower(ProjectiveSpace(1), 3, 100, 1, Degree(2))
    sig = model.sigma()[0]
    value = constrained_volume(3, 3, 2, 5, sig)
    assert value == (PI * sig) ** 3 * Fraction(2**5, math.factorial(3))
    with pytest.raises(DomainError):
        constrained_volume(1, 1, 2, 3, sigma)  # negative dimension


# -- scalar curvature ---------------------------------------------------------------


def test_scalar_curvature_small_ranks():
    model = tower(ProjectiveSpace(1), 1, 100, 1, Degree(1))  # r = 2, D = 1
    assert total_scalar_curvature(model) == PI * 4
    model = tower(ProjectiveSpace(1), 1, 100, 1, Degree(2))  # r = 3, D = 2
    sigma = model.sigma()[0]
    assert total_scalar_curvature(model) == PI * 6 * (PI * sigma)


def test_scalar_curvature_matches_fractional_form():
    for d in (1, 2, 3, 4, 5):
        model = tower(ProjectiveSpace(1), 1, 100, 1, Degree(d))
        exact = total_scalar_curvature(model)  # internal 1e-9 check already ran
        numeric = scalar_curvature_fractional_form(d, model.sigma()[0])
        exact_val = Decimal(exact.approx(30))
        assert abs(numeric - exact_val) / exact_val < Decimal("1e-9")


def test_scalar_curvature_rejects_points_and_bundles():
    model = tower(ProjectiveSpace(1), 1, 100, 1, Degree(0))
    with pytest.raises(UnsupportedKindError):
        total_scalar_curvature(model)
    av = AbelianVarietyData.of([2], [1])
    model = tower(AbelianVariety(av), 1, 100, 1, DeltaVector((2,)))
    with pytest.raises(UnsupportedKindError):
        total_scalar_curvature(model)


# -- limits ------------------------------------------------------------------------------


def test_strong_coupling_limit_volume_matches_independent_formula():
    for m, d, n in ((1, 2, 3), (2, 1, 2), (1, 1, 2)):
        model = tower(ProjectiveSpace(m), n, 7, 1, Degree(d))
        r = math.comb(m + d, m)
        vol_m = Fraction(1, math.factorial(m))
        dim = n * r - 1
        independent = (PI * PiPoly.constant(7 * vol_m)) ** dim * Fraction(
            1, math.factorial(dim)
        )
        assert strong_coupling_limit(model, "volume") == independent


def test_strong_coupling_limit_is_substitution():
    # The limit equals the closed volume formula evaluated at the
    # decoupled sigma.
    model = tower(ProjectiveSpace(1), 2, 9, 1, Degree(3))
    sigma_inf = decoupled_sigma(model)[0]
    desc = build_moduli(model, sigma_override=decoupled_sigma(model))
    assert strong_coupling_limit(model, "volume") == volume_projective_space(
        desc.kind.dim, sigma_inf
    )


def test_strong_coupling_limit_energy():
    model = tower(ProjectiveSpace(1), 1, 3, 1, Degree(2))
    assert strong_coupling_limit(model, "energy") == PiPoly.pi(1, 12)
    # the limit drops the curvature correction present at finite coupling
    model2 = tower(ProjectiveSpace(2), 1, 3, 1, Degree(2))
    full = vortex_energy(model2)
    limit = strong_coupling_limit(model2, "energy")
    assert full != limit
    assert full + PiPoly.pi(2, 8) == limit


def test_strong_coupling_limit_kahler():
    av = AbelianVarietyData.of([2, 4], [1, 1])
    model = tower(AbelianVariety(av), 1, 100, 1, DeltaVector((2, 4)))
    report = strong_coupling_limit(model, "kahler_class")
    assert report.correction_is_zero()
    assert report.eta_coefficients == (PI * PiPoly.constant(100),)


def test_limit_applies_to_models_unstable_at_given_coupling():
    # sigma < 0 at e^2 = 1, but the decoupled model is stable.
    model = tower(ProjectiveSpace(1), 3, 7, 1, Degree(2))
    assert model.sigma()[0].sign().value < 0
    value = strong_coupling_limit(model, "volume")
    assert value == (PI * PiPoly.constant(7)) ** 8 * Fraction(1, math.factorial(8))


def test_kahler_two_route_covers_higher_dimensions():
    # CP^m up to m = 3 and abelian varieties up to m = 2, per the
    # dual-route contract of the Kahler class computation.
    for m in (1, 2, 3):
        model = tower(ProjectiveSpace(m), 1, 500, 1, Degree(1))
        report = kahler_class(model)
        assert report.eta_coefficients == (PI * model.sigma()[0],)
    for deltas, lams in (((2,), (1,)), ((1, 3), (2, 1))):
        av = AbelianVarietyData.of(list(deltas), list(lams))
        model = tower(AbelianVariety(av), 1, 500, 1, DeltaVector(deltas))
        report = kahler_class(model)
        assert report.eta_coefficients == (PI * model.sigma()[0],)
        assert not report.correction_is_zero()


def test_abelian_limit_matches_limit_of_closed_form():
    # Independent route: taking 1/e^2 -> 0 in the closed surface formula
    # gives pi Vol(M) n tau (pi tau Vol)^(nr) / (nr)!, which must equal
    # the Segre-term limit the engine computes.
    for n in (1, 2):
        for deltas, lams in (((1, 2), (1, 1)), ((2, 2), (1, 2))):
            av = AbelianVarietyData.of(list(deltas), list(lams))
            model = tower(AbelianVariety(av), n, 100, 1, DeltaVector(deltas))
            r = r_sections_abelian(av)
            vol_m = model.vol_m()
            sigma_inf = PiPoly.constant(100 * vol_m)
            closed_limit = (
                PiPoly.pi(1, vol_m * n * 100)
                * (PI * sigma_inf) ** (n * r)
                * Fraction(1, math.factorial(n * r))
            )
            assert strong_coupling_limit(model, "volume") == closed_limit, (n, deltas)


def test_projective_bundle_volume_via_presentation_ring():
    # Third route: expand the top power of the Kahler class inside the
    # hyperplane-relation presentation of the projectivised transform and
    # read off the coefficient of eta^(R-1) wedge the oriented top form
    # of the dual torus.  The eta-rewrite engine must reproduce the
    # Segre-pipeline volume exactly.
    from vortexmoduli.cohomring import fibre_integrate, transport
    from vortexmoduli.fourier_mukai import darboux_top, dual_odd_names
    from vortexmoduli.moduli import projective_bundle_presentation

    for n, deltas, lams in ((1, (2, 3), (1, 1)), (1, (1, 2), (1, 2)), (2, (1, 2), (1, 1))):
        av = AbelianVarietyData.of(list(deltas), list(lams))
        m = av.m
        model = tower(AbelianVariety(av), n, 100, 1, DeltaVector(deltas))
        rank = n * r_sections_abelian(av)
        pres = projective_bundle_presentation(av, copies=n)
        correction = fm_kahler_power(av) * PiPoly.pi(2, Fraction(-2) / model.e2)
        omega = pres.gen("eta") * (PI * model.sigma()[0]) + transport(correction, pres)
        dim = rank - 1 + m
        top_power = omega**dim * Fraction(1, math.factorial(dim))
        pushed = fibre_integrate(top_power, dual_odd_names(m), darboux_top(dual_odd_names(m), m))
        ring_volume = pushed.coefficient(even_powers={"eta": rank - 1})
        assert ring_volume == volume_moduli(model), (n, deltas, lams)


def test_energy_second_term_against_ring_intersections():
    # The curvature-squared integral feeding the energy is recomputed in
    # explicit ring models of the base.
    from vortexmoduli.cohomring import RingPresentation, exterior_presentation, fibre_integrate
    from vortexmoduli.fourier_mukai import base_odd_names, darboux_top
    from vortexmoduli.metrics import _c1_squared_integral
    from vortexmoduli.geometry import Bidegree, DeltaVector
    from vortexmoduli.scalars import PiPoly

    for k, a, b in ((1, 2, 2), (2, 1, 3), (0, 2, 1)):
        man = Hirzebruch(k, 7, 1)
        pres = RingPresentation((), (("f", 2, 2), ("cg", 2, 2)))
        pres = pres.with_rewrite("cg", pres.gen("f") * pres.gen("cg") * Fraction(-k))
        c1 = pres.gen("cg") * a + pres.gen("f") * b
        ring_value = (c1 * c1).coefficient(even_powers={"f": 1, "cg": 1})
        assert ring_value == PiPoly.constant(_c1_squared_integral(man, Bidegree(a, b)))

    for deltas, lams in (((2, 3), (1, 1)), ((1, 2, 3), (1, 1, 2))):
        m = len(deltas)
        av = AbelianVarietyData.of(list(deltas), list(lams))
        man = AbelianVariety(av)
        pres = exterior_presentation(base_odd_names(m))
        c1 = pres.zero()
        omega = pres.zero()
        for j in range(1, m + 1):
            pair = pres.gen(f"dx{j}") * pres.gen(f"dx{m + j}")
            c1 = c1 + pair * deltas[j - 1]
            omega = omega + pair * Fraction(lams[j - 1])
        integrand = c1 * c1 * omega ** (m - 2)
        ring_value = fibre_integrate(
            integrand, base_odd_names(m), darboux_top(base_odd_names(m), m)
        ).scalar_part()
        assert ring_value == PiPoly.constant(_c1_squared_integral(man, DeltaVector(deltas)))
