"""The L2-metric layer: vortex energy, Kahler classes of moduli spaces,
volumes, total scalar curvatures, constrained-model volumes, and symbolic
strong-coupling limits.

The Kahler class of the moduli space is the fibre integral over M of

    sum_a  pi tau_a / m! * c1(U^a) ^ omega^m
         - pi^2 / (e^2 (m-1)!) * c1(U^a)^2 ^ omega^(m-1),

with U^a the universal circle bundles.  For supported manifolds this
integral is evaluated twice: through the closed formulas (coefficient
pi sigma_a on each hyperplane generator, plus the transform correction
over an abelian base) and through an explicit cohomology model of
M x moduli; a mismatch raises ConsistencyError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, getcontext
from fractions import Fraction

from . import cones, geometry
from .cohomring import RingElement, RingPresentation, exterior_presentation, formal_series, fibre_integrate, transport
from .errors import (
    ConsistencyError,
    DomainError,
    UnsupportedKindError,
    UnsupportedManifoldError,
)
from .fourier_mukai import (
    AbelianVarietyData,
    base_odd_names,
    chern_closed_form,
    darboux_top,
    dual_odd_names,
    dual_torus_presentation,
    fm_kahler_power,
    integrate_dual,
    kahler_form,
    poincare_chern_class,
    r_sections_abelian,
    segre_pushforward,
    segre,
)
from .moduli import (
    GlsmModel,
    ModuliDescription,
    ProjectiveBundleKind,
    ProjectiveSpaceKind,
    Verdict,
    build_moduli,
)
from .scalars import PI, PiPoly, Sign


@dataclass(frozen=True)
class KahlerClassReport:
    """Kahler class of the L2-metric on the moduli space.

    eta_coefficients[a] multiplies the a-th hyperplane generator and
    always equals pi * sigma_a.  Over an abelian base, base_correction is
    the degree-2 class -(2 pi^2 / e^2) * (transform of omega^(m-1)/(m-1)!)
    on the dual torus, pulled back along each factor projection; it is
    the zero element of the empty presentation for simply connected
    bases.
    """

    eta_coefficients: tuple[PiPoly, ...]
    base_correction: RingElement

    def correction_is_zero(self) -> bool:
        return self.base_correction.is_zero()


_TRIVIAL_PRESENTATION = exterior_presentation(())


def _require_stable(model: GlsmModel, description: ModuliDescription | None) -> ModuliDescription:
    desc = description if description is not None else build_moduli(model)
    if desc.verdict != Verdict.STABLE:
        raise DomainError(f"moduli space is not stable (verdict {desc.verdict.value})")
    return desc


def _neg_two_pi_sq_over_e2(e2: Fraction) -> PiPoly:
    return PiPoly.pi(2, Fraction(-2) / e2)


# -- vortex energy --------------------------------------------------------------


def vortex_energy(model: GlsmModel) -> PiPoly:
    """Energy of a vortex solution in the single line-bundle model.

    E = 2 pi tau / (m-1)! * int c1(L) ^ omega^(m-1)
        - (2 pi^2 / e^2) / (m-2)! * int c1(L)^2 ^ omega^(m-2),

    with the second term absent on curves (m = 1).  The integrals are the
    exact intersection numbers of the base.
    """
    if model.weights.k != 1 or model.weights.n != 1 or model.weights.column(1) != (1,):
        raise DomainError("vortex energy is defined for the single charge-1 field model")
    m = model.m
    tau = model.tau[0]
    _, slope = geometry.volume_and_slope(model.manifold, model.bundles[0])
    first = PiPoly.pi(1, 2 * tau * m * slope)
    if m == 1:
        return first
    j2 = _c1_squared_integral(model.manifold, model.bundles[0])
    second = PiPoly.pi(2, Fraction(2) * j2 / (model.e2 * math.factorial(m - 2)))
    return first - second


def _c1_squared_integral(man, bun) -> Fraction:
    """int c1(L)^2 ^ omega^(m-2), exact."""
    if isinstance(man, geometry.PIC_Z_KINDS):
        lam = man.kahler_scale
        return Fraction(bun.d) ** 2 * lam ** (man.m - 2) * geometry.t_number(man)
    if isinstance(man, geometry.Hirzebruch):
        return Fraction(2 * bun.a * bun.b - bun.a**2 * man.k)
    if isinstance(man, geometry.AbelianVariety):
        m = man.m
        lambdas = man.data.lambdas
        total = Fraction(0)
        for i in range(m):
            for j in range(i + 1, m):
                term = Fraction(2 * bun.deltas[i] * bun.deltas[j])
                for l in range(m):
                    if l != i and l != j:
                        term *= lambdas[l]
                total += term
        return total
    raise UnsupportedManifoldError(
        f"self-intersection data unavailable for {type(man).__name__}"
    )


# -- Kahler class -----------------------------------------------------------------


def kahler_class(model: GlsmModel, description: ModuliDescription | None = None) -> KahlerClassReport:
    """Kahler class of the L2-metric, with internal dual-route checking.

    The direct formula gives pi sigma_a on each hyperplane generator plus
    the transform correction over abelian bases.  Whenever a cohomology
    model of the base is available, the full universal-class fibre
    integral is evaluated as well and must agree exactly.
    """
    _require_stable(model, description)
    sigma = model.sigma()
    coefficients = tuple(PI * s for s in sigma)
    if isinstance(model.manifold, geometry.AbelianVariety):
        av = AbelianVarietyData.of(
            [1] * model.m, model.manifold.data.lambdas
        )
        correction = fm_kahler_power(av) * _neg_two_pi_sq_over_e2(model.e2)
    else:
        correction = _TRIVIAL_PRESENTATION.zero()
    report = KahlerClassReport(coefficients, correction)

    pipeline = _kahler_class_via_universal(model)
    if pipeline is not None:
        pipe_coeffs, pipe_correction = pipeline
        if pipe_coeffs != coefficients:
            raise ConsistencyError(
                f"Kahler coefficients disagree: direct {coefficients}, pipeline {pipe_coeffs}"
            )
        if isinstance(model.manifold, geometry.AbelianVariety):
            if pipe_correction != correction:
                raise ConsistencyError("base corrections disagree between routes")
        elif not pipe_correction.is_zero():
            raise ConsistencyError("unexpected base correction on a simply connected base")
    return report


def _eta_names(k: int) -> list[str]:
    return [f"eta{a}" for a in range(1, k + 1)]


def _kahler_class_via_universal(model: GlsmModel):
    """Fibre-integrate the universal first Chern classes through the
    metric formula in an explicit cohomology model of the base.

    Returns (eta coefficients, correction element in the dual-torus
    presentation) or None when no ring model of the base is available.
    """
    man = model.manifold
    k = model.weights.k
    m = model.m
    e2 = model.e2
    if isinstance(man, geometry.PIC_Z_KINDS):
        chern_data = _picz_principal_degrees(model)
        if chern_data is None:
            return None
        eta_names = _eta_names(k)
        pres = RingPresentation(
            (), tuple([("h", 2, m + 1)] + [(name, 2, 3) for name in eta_names])
        )
        h = pres.gen("h")
        omega = h * man.kahler_scale
        universal = [
            h * chern_data[a] + pres.gen(eta_names[a]) for a in range(k)
        ]
        integrand = _metric_integrand(model, universal, omega, m, pres)
        pushed = _extract_even_top(integrand, pres, "h", m) * geometry.t_number(man)
        coeffs = tuple(
            pushed.coefficient(even_powers={eta_names[a]: 1}) for a in range(k)
        )
        _ensure_only_eta_terms(pushed, pres, eta_names, coeffs)
        return coeffs, _TRIVIAL_PRESENTATION.zero()
    if isinstance(man, geometry.Hirzebruch):
        if model.principal is None:
            return None
        eta_names = _eta_names(k)
        pres = RingPresentation(
            (), tuple([("f", 2, 2), ("cg", 2, 2)] + [(name, 2, 3) for name in eta_names])
        )
        pres = pres.with_rewrite("cg", pres.gen("f") * pres.gen("cg") * Fraction(-man.k))
        f, cg = pres.gen("f"), pres.gen("cg")
        omega = f * man.lam + cg * man.delta
        universal = [
            cg * model.principal[a].a + f * model.principal[a].b + pres.gen(eta_names[a])
            for a in range(k)
        ]
        integrand = _metric_integrand(model, universal, omega, m, pres)
        pushed = _extract_mixed_top(integrand, pres, {"f": 1, "cg": 1})
        coeffs = tuple(
            pushed.coefficient(even_powers={eta_names[a]: 1}) for a in range(k)
        )
        _ensure_only_eta_terms(pushed, pres, eta_names, coeffs)
        return coeffs, _TRIVIAL_PRESENTATION.zero()
    if isinstance(man, geometry.AbelianVariety) and k == 1:
        principal = model.principal[0] if model.principal else model.bundles[0]
        if not isinstance(principal, geometry.DeltaVector):
            return None
        pres = RingPresentation(
            tuple(base_odd_names(m) + dual_odd_names(m)), (("eta1", 2, 3),)
        )
        c1p = pres.zero()
        for j in range(1, m + 1):
            c1p = c1p + pres.gen(f"dx{j}") * pres.gen(f"dx{m + j}") * principal.deltas[j - 1]
        omega = kahler_form(pres, m, man.data.lambdas)
        universal = [c1p + pres.gen("eta1") + poincare_chern_class(pres, m)]
        integrand = _metric_integrand(model, universal, omega, m, pres)
        pushed = fibre_integrate(integrand, base_odd_names(m), darboux_top(base_odd_names(m), m))
        eta_coeff = pushed.coefficient(even_powers={"eta1": 1})
        correction_big = pushed - pres.gen("eta1") * eta_coeff
        correction = transport(correction_big, dual_torus_presentation(m))
        return (eta_coeff,), correction
    return None


def _picz_principal_degrees(model: GlsmModel) -> list[Fraction] | None:
    """Per-factor degrees of the principal circle bundles, derived from
    the stored slopes (slope = d lambda^(m-1) t / m!)."""
    man = model.manifold
    lam = man.kahler_scale
    t = geometry.t_number(man)
    scale = lam ** (man.m - 1) * t / math.factorial(man.m)
    return [s / scale for s in model.principal_slopes]


def _metric_integrand(model, universal, omega, m, pres):
    omega_m = omega**m
    omega_m1 = omega ** (m - 1)
    total = pres.zero()
    for a, c1u in enumerate(universal):
        first = c1u * omega_m * PiPoly.pi(1, model.tau[a] / math.factorial(m))
        second = c1u * c1u * omega_m1 * PiPoly.pi(
            2, Fraction(-1) / (model.e2 * math.factorial(m - 1))
        )
        total = total + first + second
    return total


def _extract_even_top(element: RingElement, pres: RingPresentation, name: str, power: int) -> RingElement:
    """Coefficient of name**power, as an element of the same presentation."""
    idx = pres.even_names.index(name)
    out = pres.zero()
    for (mask, exps), coeff in element.terms.items():
        if exps[idx] != power:
            continue
        new_exps = list(exps)
        new_exps[idx] = 0
        out = out + RingElement(pres, {(mask, tuple(new_exps)): coeff})
    return out


def _extract_mixed_top(element: RingElement, pres: RingPresentation, powers: dict[str, int]) -> RingElement:
    out = pres.zero()
    wanted = {pres.even_names.index(name): p for name, p in powers.items()}
    for (mask, exps), coeff in element.terms.items():
        if any(exps[i] != p for i, p in wanted.items()):
            continue
        new_exps = list(exps)
        for i in wanted:
            new_exps[i] = 0
        out = out + RingElement(pres, {(mask, tuple(new_exps)): coeff})
    return out


def _ensure_only_eta_terms(pushed, pres, eta_names, coeffs) -> None:
    reconstructed = pres.zero()
    for name, c in zip(eta_names, coeffs):
        reconstructed = reconstructed + pres.gen(name) * c
    if reconstructed != pushed:
        raise ConsistencyError("metric fibre integral has unexpected terms")


# -- volumes ------------------------------------------------------------------------


def volume_projective_space(dim: int, sigma: PiPoly) -> PiPoly:
    """(pi sigma)^dim / dim! -- the closed volume formula."""
    if dim < 0:
        raise DomainError("dimension must be >= 0")
    return (PI * sigma) ** dim * Fraction(1, math.factorial(dim))


def volume_projective_space_via_ring(dim: int, sigma: PiPoly) -> PiPoly:
    """Volume computed by ring arithmetic: expand the top power of the
    Kahler class in the truncated model and read off the top coefficient."""
    pres = RingPresentation((), (("eta", 2, dim + 1),), degree_cap=2 * dim)
    omega = pres.gen("eta") * (PI * sigma)
    top = omega**dim * Fraction(1, math.factorial(dim))
    return top.coefficient(even_powers={"eta": dim})


def volume_moduli(model: GlsmModel, description: ModuliDescription | None = None) -> PiPoly:
    """Total volume of the moduli space for the projective kinds.

    Projective space of dimension D: (pi sigma)^D / D!.
    Projective bundle over the dual torus: the Segre-class expansion

        sum_{l=0}^{m} (pi sigma)^(l+R-1) (-2 pi^2/e^2)^(m-l)
                      / ((l+R-1)! (m-l)!) *
                      int s_l(V) ^ F^(m-l)

    with V the direct sum of the transforms, R its rank and F the
    transform of omega^(m-1)/(m-1)!.  Other kinds are rejected.
    """
    desc = _require_stable(model, description)
    sigma = model.sigma()
    if isinstance(desc.kind, ProjectiveSpaceKind):
        return volume_projective_space(desc.kind.dim, sigma[0])
    if isinstance(desc.kind, ProjectiveBundleKind):
        return _projective_bundle_volume(model, desc, sigma[0])
    raise UnsupportedKindError(
        f"volume is computed only for the projective kinds, not {type(desc.kind).__name__}"
    )


def _projective_bundle_volume(model: GlsmModel, desc: ModuliDescription, sigma: PiPoly) -> PiPoly:
    av = model.abelian_data_for(model.bundles[0])
    copies = model.weights.n
    m = av.m
    rank = desc.kind.fibre_rank
    total_chern = chern_closed_form(av) ** copies
    segre_class = segre(total_chern)
    transform = fm_kahler_power(av)
    correction_factor = _neg_two_pi_sq_over_e2(model.e2)
    total = PiPoly()
    for l in range(0, m + 1):
        s_l = segre_pushforward(l + rank - 1, segre_class, rank)
        weight = integrate_dual(s_l * transform ** (m - l), m)
        if weight.is_zero():
            continue
        coeff = (
            (PI * sigma) ** (l + rank - 1)
            * correction_factor ** (m - l)
            * Fraction(1, math.factorial(l + rank - 1) * math.factorial(m - l))
        )
        total = total + coeff * weight
    return total


def abelian_tower_volume_times_sigma(
    vol_m: Fraction, tau: Fraction, e2: Fraction, r: int, copies: int, sigma: PiPoly
) -> PiPoly:
    """Closed form (times sigma) for the volume of the projectivised tower
    of transforms over an abelian surface:

        sigma * Vol = pi VolM [copies tau sigma + 4 pi^2 copies r / e^4]
                      (pi sigma)^(copies r) / (copies r)!

    For a single copy this is the closed surface formula; multiplying
    through by sigma keeps everything polynomial in pi.
    """
    big_r = copies * r
    bracket = sigma * (copies * tau) + PiPoly.pi(2, Fraction(4 * copies * r) / (e2 * e2))
    return (
        PiPoly.pi(1, vol_m)
        * bracket
        * (PI * sigma) ** big_r
        * Fraction(1, math.factorial(big_r))
    )


def constrained_volume(n: int, r: int, l: int, r_l: int, sigma: PiPoly) -> PiPoly:
    """Volume of the polynomial-constrained submanifold of the projective
    moduli space: (pi sigma)^D l^(r_l) / D! with D = n r - 1 - r_l."""
    if n < 1 or r < 1 or l < 1 or r_l < 0:
        raise DomainError("constrained model needs positive n, r, l and r_l >= 0")
    dim = n * r - 1 - r_l
    if dim < 0:
        raise DomainError("constraint cuts the moduli space below dimension zero")
    return (PI * sigma) ** dim * Fraction(l**r_l, math.factorial(dim))


# -- scalar curvature ------------------------------------------------------------------


def total_scalar_curvature(model: GlsmModel, description: ModuliDescription | None = None) -> PiPoly:
    """Total scalar curvature of a projective-space moduli space.

    Exact value 2 pi (D+1) (pi sigma)^(D-1) / (D-1)! from the Chern-class
    integral (the anticanonical class of projective D-space is D+1 times
    the hyperplane class).  The equivalent fractional-power expression

        2 pi r (r-1) / ((r-1)!)^(1/(r-1)) * Vol^((r-2)/(r-1)),  r = D+1,

    is evaluated numerically as a cross-check to relative 1e-9.
    """
    desc = _require_stable(model, description)
    if not isinstance(desc.kind, ProjectiveSpaceKind) or desc.kind.dim < 1:
        raise UnsupportedKindError("total scalar curvature needs a positive-dimensional projective space")
    dim = desc.kind.dim
    sigma = model.sigma()[0]
    exact = PI * (2 * (dim + 1)) * (PI * sigma) ** (dim - 1) * Fraction(1, math.factorial(dim - 1))
    _curvature_fractional_check(dim, sigma, exact)
    return exact


def _curvature_fractional_check(dim: int, sigma: PiPoly, exact: PiPoly) -> None:
    if sigma.sign() != Sign.POSITIVE:
        raise DomainError("scalar curvature cross-check needs positive sigma")
    getcontext().prec = 60
    digits = 40
    r = dim + 1
    sig = Decimal(sigma.approx(digits))
    pi_val = Decimal(PI.approx(digits))
    vol = (pi_val * sig) ** dim / Decimal(math.factorial(dim))
    alt = (
        2
        * pi_val
        * r
        * (r - 1)
        / Decimal(math.factorial(r - 1)) ** (Decimal(1) / (r - 1))
        * vol ** (Decimal(r - 2) / (r - 1))
    )
    exact_val = Decimal(exact.approx(digits))
    if exact_val == 0:
        raise ConsistencyError("curvature must be positive")
    rel = abs(alt - exact_val) / abs(exact_val)
    if rel > Decimal("1e-9"):
        raise ConsistencyError(
            f"fractional-power curvature form deviates by {rel} from the exact value"
        )


def scalar_curvature_fractional_form(dim: int, sigma: PiPoly, digits: int = 40) -> Decimal:
    """Numeric value of the fractional-power curvature expression."""
    getcontext().prec = digits + 20
    r = dim + 1
    sig = Decimal(sigma.approx(digits))
    pi_val = Decimal(PI.approx(digits))
    vol = (pi_val * sig) ** dim / Decimal(math.factorial(dim))
    return (
        2 * pi_val * r * (r - 1)
        / Decimal(math.factorial(r - 1)) ** (Decimal(1) / (r - 1))
        * vol ** (Decimal(r - 2) / (r - 1))
    )


# -- strong-coupling limits ----------------------------------------------------------------


def decoupled_sigma(model: GlsmModel) -> tuple[PiPoly, ...]:
    """sigma at 1/e^2 = 0: the components become tau_a Vol(M)."""
    vol = model.vol_m()
    return tuple(PiPoly.constant(t * vol) for t in model.tau)


def strong_coupling_limit(model: GlsmModel, quantity: str, description: ModuliDescription | None = None):
    """Symbolic limit 1/e^2 -> 0 of a computed quantity.

    sigma degenerates to tau Vol(M) componentwise and every explicit
    1/e^2 correction drops.  Supported quantities: "volume",
    "kahler_class", "energy".
    """
    if quantity == "energy":
        if model.weights.k != 1 or model.weights.n != 1:
            raise DomainError("energy limit is defined for the single-field model")
        _, slope = geometry.volume_and_slope(model.manifold, model.bundles[0])
        return PiPoly.pi(1, 2 * model.tau[0] * model.m * slope)
    sigma_inf = decoupled_sigma(model)
    # The limit is taken where the coupling is large, so classify at the
    # decoupled stability vector rather than at the given e^2.
    desc = description if description is not None else build_moduli(model, sigma_override=sigma_inf)
    if desc.verdict != Verdict.STABLE:
        raise DomainError("model is unstable even at decoupled level")
    if quantity == "kahler_class":
        return KahlerClassReport(
            tuple(PI * s for s in sigma_inf), _TRIVIAL_PRESENTATION.zero()
        )
    if quantity == "volume":
        if isinstance(desc.kind, ProjectiveSpaceKind):
            return volume_projective_space(desc.kind.dim, sigma_inf[0])
        if isinstance(desc.kind, ProjectiveBundleKind):
            av = model.abelian_data_for(model.bundles[0])
            copies = model.weights.n
            rank = desc.kind.fibre_rank
            m = av.m
            segre_class = segre(chern_closed_form(av) ** copies)
            weight = integrate_dual(segre_pushforward(m + rank - 1, segre_class, rank), m)
            return (
                (PI * sigma_inf[0]) ** (m + rank - 1)
                * Fraction(1, math.factorial(m + rank - 1))
                * weight
            )
        raise UnsupportedKindError("volume limit needs a projective kind")
    raise DomainError(f"unknown limit quantity {quantity!r}")
