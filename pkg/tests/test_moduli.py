import random
from fractions import Fraction

import pytest

from oracles import oracle_moduli_dimension
from vortexmoduli.cones import WeightSystem, check_C1, constant_sigma
from vortexmoduli.errors import DomainError, ModelError
from vortexmoduli.fourier_mukai import AbelianVarietyData
from vortexmoduli.geometry import (
    AbelianVariety,
    Bidegree,
    Degree,
    DeltaVector,
    GenericSimplyConnected,
    Hirzebruch,
    ProjectiveSpace,
    TableIndex,
)
from vortexmoduli.moduli import (
    GlsmModel,
    PointKind,
    ProjectiveBundleKind,
    ProjectiveSpaceKind,
    ToricFibrationKind,
    ToricOrbifoldKind,
    Verdict,
    build_moduli,
    moduli_dimension_glsm,
    projective_bundle_presentation,
)
from vortexmoduli.scalars import PiPoly


def tower(manifold, n, tau, e2, principal):
    return GlsmModel.from_principal(
        manifold, WeightSystem.from_rows([[1] * n]), [tau], e2, [principal]
    )


def test_model_validation():
    ws = WeightSystem.from_rows([[1, 1]])
    with pytest.raises(ModelError):
        GlsmModel.from_principal(ProjectiveSpace(1), ws, [1, 2], 1, [Degree(1)])
    with pytest.raises(ModelError):
        GlsmModel.from_principal(ProjectiveSpace(1), ws, [1], 0, [Degree(1)])
    with pytest.raises(ModelError):
        GlsmModel(
            ProjectiveSpace(1),
            ws,
            (Fraction(1),),
            Fraction(1),
            (Degree(1), Degree(2)),  # inconsistent with weights (both should be equal)
            (Fraction(1),),
        )


def test_from_bundles_solves_principal_slopes():
    ws = WeightSystem.from_rows([[1, 0, 1], [0, 1, 1]])
    model = GlsmModel.from_bundles(
        ProjectiveSpace(1), ws, [10, 10], 1, [Degree(1), Degree(2), Degree(3)]
    )
    assert model.principal_slopes == (Fraction(1), Fraction(2))
    with pytest.raises(ModelError):
        GlsmModel.from_bundles(
            ProjectiveSpace(1), ws, [10, 10], 1, [Degree(1), Degree(2), Degree(4)]
        )


def test_symmetric_product_layer():
    model = tower(ProjectiveSpace(1), 1, 100, 1, Degree(3))
    desc = build_moduli(model)
    assert desc.verdict == Verdict.STABLE
    assert desc.kind == ProjectiveSpaceKind(3)
    assert desc.complex_dimension == 3
    assert desc.smooth is True
    assert desc.cohomology is not None and desc.cohomology.degree_cap == 6


def test_abelian_projective_bundle():
    av = AbelianVarietyData.of([2, 4], [1, 1])
    model = tower(AbelianVariety(av), 1, 100, 1, DeltaVector((2, 4)))
    desc = build_moduli(model)
    assert desc.kind == ProjectiveBundleKind(fibre_rank=8, base_dim=2)
    assert desc.complex_dimension == 9
    assert desc.cohomology.degree_cap == 2 * 9


def test_weight_one_tower_is_projective_space():
    model = tower(ProjectiveSpace(1), 3, 100, 1, Degree(2))
    desc = build_moduli(model)
    assert desc.kind == ProjectiveSpaceKind(3 * 3 - 1)


def test_empty_when_sigma_outside_cone():
    model = tower(ProjectiveSpace(1), 1, 2, 1, Degree(1))  # sigma = 2 - 2 pi < 0
    desc = build_moduli(model)
    assert desc.verdict == Verdict.EMPTY
    assert desc.kind is None and desc.complex_dimension is None


def test_empty_when_no_sections():
    model = tower(ProjectiveSpace(1), 1, 100, 1, Degree(-2))
    desc = build_moduli(model)
    assert desc.verdict == Verdict.EMPTY


def test_boundary_unstable_at_zero_level():
    model = tower(ProjectiveSpace(1), 2, 0, 1, Degree(0))
    desc = build_moduli(model)
    assert desc.verdict == Verdict.BOUNDARY_UNSTABLE


def test_face_level_keeps_partial_support():
    ws = WeightSystem.from_rows([[1, 0], [0, 1]])
    model = GlsmModel.from_principal(
        ProjectiveSpace(1), ws, [2, 0], 1, [Degree(0), Degree(0)]
    )
    desc = build_moduli(model)
    assert desc.verdict == Verdict.STABLE
    assert desc.kind == PointKind()
    assert desc.decomposition is not None
    assert desc.decomposition.positive == {1}
    assert desc.decomposition.zero == {2}


def test_toric_orbifold_and_smoothness_flags():
    model = GlsmModel.from_principal(
        ProjectiveSpace(1), WeightSystem.from_rows([[1, 2]]), [100], 1, [Degree(1)]
    )
    desc = build_moduli(model)
    assert isinstance(desc.kind, ToricOrbifoldKind)
    assert desc.complex_dimension == (2 + 3) - 1
    assert desc.smooth is False  # the charge-2 column alone spans but is not unimodular
    smooth_model = GlsmModel.from_principal(
        ProjectiveSpace(1),
        WeightSystem.from_rows([[1, 0, 1], [0, 1, 1]]),
        [50, 60],
        1,
        [Degree(1), Degree(1)],
    )
    desc = build_moduli(smooth_model)
    assert desc.smooth is True
    assert isinstance(desc.kind, ToricOrbifoldKind)


def test_abelian_glsm_fibration_dimension():
    ws = WeightSystem.from_rows([[1, 0], [0, 1]])
    model = GlsmModel.from_principal(
        AbelianVariety(AbelianVarietyData.of([1, 1], [1, 1])),
        ws,
        [100, 100],
        1,
        [DeltaVector((1, 1)), DeltaVector((1, 2))],
    )
    desc = build_moduli(model)
    assert isinstance(desc.kind, ToricFibrationKind)
    # r = (1, 2): fibre max(D - d) = 3 - 2 = 1; base (Pic0)^2 has dim 4.
    assert desc.kind == ToricFibrationKind(fibre_dim=1, base_dim=4)
    assert desc.complex_dimension == 5
    # generic level: dimension equals sum r + k(m-1)
    assert desc.complex_dimension == (1 + 2) + 2 * (2 - 1)


def test_zero_section_zero_level_branch():
    model = tower(
        AbelianVariety(AbelianVarietyData.of([1, 1], [1, 1])), 1, 0, 1, DeltaVector((0, 0))
    )
    desc = build_moduli(model)
    assert desc.verdict == Verdict.STABLE
    assert desc.kind == ToricFibrationKind(fibre_dim=0, base_dim=2)


def test_dimension_formula_examples():
    ws = WeightSystem.from_rows([[1, 1]])
    assert moduli_dimension_glsm(ws, constant_sigma([5]), [2, 3]) == 4
    assert moduli_dimension_glsm(WeightSystem.from_rows([[1, 0], [0, 1]]),
                                 constant_sigma([-1, 0]), [1, 1]) is None
    with pytest.raises(DomainError):
        moduli_dimension_glsm(ws, constant_sigma([5]), [2])


def test_dimension_formula_single_field_matches_projectivisation():
    ws = WeightSystem.from_rows([[1]])
    for r in range(0, 5):
        for sigma_positive in (True, False):
            sigma = constant_sigma([3 if sigma_positive else -3])
            got = moduli_dimension_glsm(ws, sigma, [r])
            if sigma_positive:
                assert got == r - 1
            else:
                assert got is None


def random_weights(rng, k, n):
    while True:
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(k)]
        try:
            return WeightSystem.from_rows(rows)
        except DomainError:
            continue


def test_dimension_formula_against_oracle_random():
    rng = random.Random(99)
    for _ in range(40):
        k = rng.randint(1, 3)
        n = rng.randint(k, 5)
        ws = random_weights(rng, k, n)
        sigma = constant_sigma([rng.randint(-3, 3) for _ in range(k)])
        r = [rng.randint(0, 4) for _ in range(n)]
        assert moduli_dimension_glsm(ws, sigma, r) == oracle_moduli_dimension(ws.rows, sigma, r)


def test_dimension_formula_generic_is_total_minus_rank():
    rng = random.Random(123)
    checked = 0
    while checked < 30:
        k = rng.randint(1, 3)
        n = rng.randint(k, 5)
        ws = random_weights(rng, k, n)
        coeffs = [rng.randint(1, 3) for _ in range(n)]
        sigma = constant_sigma(
            [sum(c * ws.column(j + 1)[a] for j, c in enumerate(coeffs)) for a in range(k)]
        )
        if not check_C1(ws, sigma):
            continue
        r = [rng.randint(0, 4) for _ in range(n)]
        assert moduli_dimension_glsm(ws, sigma, r) == sum(r) - k
        checked += 1


def test_projective_bundle_presentation_relation():
    pres = projective_bundle_presentation(AbelianVarietyData.of([3], [1]))
    eta = pres.gen("eta")
    theta = pres.gen("dxs1") * pres.gen("dxs2")
    assert eta**3 == theta * eta**2
    degenerate = projective_bundle_presentation(AbelianVarietyData.of([1], [1]))
    assert degenerate.gen("eta") == degenerate.gen("dxs1") * degenerate.gen("dxs2")


def test_hirzebruch_moduli():
    model = tower(Hirzebruch(1, 2, 1), 1, 100, 1, Bidegree(2, 2))
    desc = build_moduli(model)
    assert desc.kind == ProjectiveSpaceKind(5)  # r = 6 sections


def test_generic_simply_connected_model():
    man = GenericSimplyConnected(
        2, Fraction(2), ((3, Fraction(1)), (2, Fraction(1)))
    )
    ws = WeightSystem.from_rows([[1, 1]])
    model = GlsmModel.from_bundles(man, ws, [50], 1, [TableIndex(1), TableIndex(2)])
    desc = build_moduli(model)
    assert desc.verdict == Verdict.STABLE
    # A charge-1 tower projectivises the whole section space.
    assert desc.kind == ProjectiveSpaceKind(3 + 2 - 1)
    assert desc.complex_dimension == 3 + 2 - 1


def test_verdict_consistency_random():
    # Non-stable verdicts coincide with: the level outside the closed
    # cone, no qualifying support, or qualifying supports without
    # sections.
    from vortexmoduli.cones import in_cone_closed

    rng = random.Random(5150)
    for _ in range(25):
        n = rng.randint(1, 4)
        ws = WeightSystem.from_rows([[1] * n]) if rng.random() < 0.4 else random_weights(rng, min(2, n), max(n, 2))
        man = ProjectiveSpace(1)
        principal = [Degree(rng.randint(-2, 3)) for _ in range(ws.k)]
        tau = [rng.randint(-5, 120) for _ in range(ws.k)]
        try:
            model = GlsmModel.from_principal(man, ws, tau, 1, principal)
        except ModelError:
            continue
        desc = build_moduli(model)
        sigma = model.sigma()
        closed = in_cone_closed(ws, ws.full_set(), sigma)
        strata = moduli_dimension_glsm(ws, sigma, list(model.section_counts()))
        expect_stable = closed and strata is not None and strata >= 0
        is_zero_branch = all(s.is_zero() for s in sigma)
        if not is_zero_branch:
            assert (desc.verdict == Verdict.STABLE) == expect_stable, (
                ws.rows, tau, principal, desc.verdict,
            )


def test_smooth_flag_implies_lattice_generation():
    from vortexmoduli.cones import generates_lattice, is_simple
    import itertools as it

    rng = random.Random(777)
    for _ in range(20):
        k = rng.randint(1, 2)
        n = rng.randint(k, 4)
        ws = random_weights(rng, k, n)
        man = ProjectiveSpace(1)
        try:
            model = GlsmModel.from_principal(
                man, ws, [rng.randint(50, 150) for _ in range(k)], 1,
                [Degree(rng.randint(0, 2)) for _ in range(k)],
            )
        except ModelError:
            continue
        desc = build_moduli(model)
        if desc.smooth:
            for size in range(1, n + 1):
                for subset in it.combinations(range(1, n + 1), size):
                    if is_simple(ws, subset):
                        assert generates_lattice(ws, subset), (ws.rows, subset)


def test_projective_bundle_dimension_identity():
    for deltas in ((1,), (3,), (1, 2), (2, 4)):
        av = AbelianVarietyData.of(list(deltas), [1] * len(deltas))
        model = tower(AbelianVariety(av), 1, 500, 1, DeltaVector(deltas))
        desc = build_moduli(model)
        assert isinstance(desc.kind, ProjectiveBundleKind)
        assert desc.complex_dimension == (desc.kind.fibre_rank - 1) + len(deltas)
