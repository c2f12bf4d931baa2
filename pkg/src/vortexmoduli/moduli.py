"""Classification of the vortex moduli space of an abelian gauged model.

The description combines a stability verdict with a structural kind,
the complex dimension, smoothness, and (for the projective kinds) the
cohomology presentation with its hyperplane generator.

Structural dictionary:
  * simply connected base, one U(1) charge-1 field per section of one
    bundle L: projectivisation of the section space;
  * one positive line bundle on an abelian variety: projectivisation of
    its transform over the dual torus;
  * general simply connected base: toric quotient of the section space,
    smooth exactly under the genericity conditions (C1) and (C2);
  * general abelian-variety base: toric fibration over a product of
    copies of the dual torus, with the fibre dimension given by the
    stratum maximum.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import cones, geometry, linalg
from .cohomring import RingPresentation, transport
from .cones import SigmaVector, SquareDecomposition, WeightSystem
from .errors import DomainError, ModelError
from .fourier_mukai import (
    AbelianVarietyData,
    ch_transform,
    chern_from_character,
    dual_odd_names,
    r_sections_abelian,
)
from .geometry import BundleDescriptor, ManifoldDescriptor
from .linalg import solve
from .scalars import PiPoly


class Verdict(enum.Enum):
    EMPTY = "empty"
    STABLE = "stable"
    BOUNDARY_UNSTABLE = "boundary_unstable"


@dataclass(frozen=True)
class PointKind:
    pass


@dataclass(frozen=True)
class ProjectiveSpaceKind:
    dim: int


@dataclass(frozen=True)
class ProjectiveBundleKind:
    fibre_rank: int
    base_dim: int

    @property
    def dim(self) -> int:
        return self.fibre_rank - 1 + self.base_dim


@dataclass(frozen=True)
class ToricOrbifoldKind:
    dim: int


@dataclass(frozen=True)
class ToricFibrationKind:
    fibre_dim: int
    base_dim: int

    @property
    def dim(self) -> int:
        return self.fibre_dim + self.base_dim


ModuliKind = Union[
    PointKind, ProjectiveSpaceKind, ProjectiveBundleKind, ToricOrbifoldKind, ToricFibrationKind
]


@dataclass(frozen=True)
class GlsmModel:
    """One full problem instance.

    ``bundles`` holds the degree data of the n field bundles L_j;
    ``principal_slopes`` the slope_vol of each circle factor P^a; the two
    are linked by c1(L_j) = sum_a Q_j^a c1(P^a), which is validated
    whenever the per-factor degree data ``principal`` is known.
    """

    manifold: ManifoldDescriptor
    weights: WeightSystem
    tau: tuple[Fraction, ...]
    e2: Fraction
    bundles: tuple[BundleDescriptor, ...]
    principal_slopes: tuple[Fraction, ...]
    principal: tuple[BundleDescriptor, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "tau", tuple(Fraction(t) for t in self.tau))
        object.__setattr__(self, "e2", Fraction(self.e2))
        object.__setattr__(
            self, "principal_slopes", tuple(Fraction(s) for s in self.principal_slopes)
        )
        if len(self.tau) != self.weights.k:
            raise ModelError("tau must have one component per circle factor")
        if self.e2 <= 0:
            raise ModelError("e^2 must be positive")
        if len(self.bundles) != self.weights.n:
            raise ModelError("one bundle descriptor per weight column required")
        if len(self.principal_slopes) != self.weights.k:
            raise ModelError("one principal slope per circle factor required")
        if self.principal is not None:
            if len(self.principal) != self.weights.k:
                raise ModelError("one principal bundle per circle factor required")
            for j in range(1, self.weights.n + 1):
                expected = geometry.combine_bundles(list(self.weights.column(j)), list(self.principal))
                if expected != self.bundles[j - 1]:
                    raise ModelError(
                        f"bundle {j} is inconsistent with the principal data: "
                        f"{self.bundles[j - 1]} != {expected}"
                    )
        # Slopes are linear in the first Chern class, so each column slope
        # must be the weight combination of the principal slopes.
        vol = self.vol_m()
        for j in range(1, self.weights.n + 1):
            _, slope_j = geometry.volume_and_slope(self.manifold, self.bundles[j - 1])
            combined = sum(
                Fraction(q) * s for q, s in zip(self.weights.column(j), self.principal_slopes)
            )
            if slope_j != combined:
                raise ModelError(
                    f"slope of bundle {j} ({slope_j}) does not match the weight "
                    f"combination of the principal slopes ({combined})"
                )
        if vol <= 0:
            raise ModelError("base volume must be positive")

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_principal(
        cls,
        manifold: ManifoldDescriptor,
        weights: WeightSystem,
        tau: Sequence[Fraction | int],
        e2: Fraction | int,
        principal: Sequence[BundleDescriptor],
    ) -> "GlsmModel":
        """Build the model from per-circle-factor bundle data, deriving the
        field bundles and slopes."""
        principal = tuple(principal)
        if len(principal) != weights.k:
            raise ModelError("one principal bundle per circle factor required")
        bundles = tuple(
            geometry.combine_bundles(list(weights.column(j)), list(principal))
            for j in range(1, weights.n + 1)
        )
        slopes = tuple(
            geometry.volume_and_slope(manifold, p)[1] for p in principal
        )
        return cls(manifold, weights, tuple(Fraction(t) for t in tau), Fraction(e2),
                   bundles, slopes, principal)

    @classmethod
    def from_bundles(
        cls,
        manifold: ManifoldDescriptor,
        weights: WeightSystem,
        tau: Sequence[Fraction | int],
        e2: Fraction | int,
        bundles: Sequence[BundleDescriptor],
    ) -> "GlsmModel":
        """Build the model from per-field bundle data, solving the (unique)
        principal slopes from the weight relations."""
        bundles = tuple(bundles)
        if len(bundles) != weights.n:
            raise ModelError("one bundle descriptor per weight column required")
        column_slopes = [
            geometry.volume_and_slope(manifold, b)[1] for b in bundles
        ]
        rows = [[Fraction(q) for q in weights.column(j)] for j in range(1, weights.n + 1)]
        solution = solve(rows, column_slopes)
        if solution is None:
            raise ModelError("field slopes are not a consistent weight combination")
        return cls(manifold, weights, tuple(Fraction(t) for t in tau), Fraction(e2),
                   bundles, tuple(solution))

    # -- derived data ------------------------------------------------------

    @property
    def m(self) -> int:
        return geometry.manifold_dimension(self.manifold)

    def vol_m(self) -> Fraction:
        return geometry.volume_and_slope(self.manifold, self.bundles[0])[0]

    def sigma(self) -> SigmaVector:
        return cones.sigma_vector(
            self.tau, self.e2, self.vol_m(), self.m, self.principal_slopes
        )

    def section_counts(self) -> tuple[int, ...]:
        return tuple(
            geometry.r_sections(self.manifold, b) for b in self.bundles
        )

    def is_weight_one_tower(self) -> bool:
        """k = 1 with every field of charge 1 (all bundles equal)."""
        return self.weights.k == 1 and all(
            self.weights.column(j) == (1,) for j in range(1, self.weights.n + 1)
        )

    def abelian_data_for(self, bundle: BundleDescriptor) -> AbelianVarietyData:
        man = self.manifold
        if not isinstance(man, geometry.AbelianVariety) or not isinstance(bundle, geometry.DeltaVector):
            raise DomainError("abelian data requested for a non-abelian model")
        return AbelianVarietyData.of(bundle.deltas, man.data.lambdas)


@dataclass(frozen=True)
class ModuliDescription:
    verdict: Verdict
    kind: ModuliKind | None
    complex_dimension: int | None
    smooth: bool | None
    cohomology: RingPresentation | None
    notes: tuple[str, ...]
    sigma: SigmaVector
    decomposition: SquareDecomposition | None = None


def moduli_dimension_glsm(
    ws: WeightSystem, sigma: Sequence[PiPoly], r: Sequence[int]
) -> int | None:
    """Dimension of the section-space quotient as a stratum maximum.

    Enumerates the nonempty index sets whose cone interior contains
    sigma; each contributes (sum of its section counts) minus (rank of
    its weights); returns the maximum, or None when no set qualifies.
    """
    if len(r) != ws.n:
        raise DomainError("one section count per field required")
    cones._check_subset_scale(ws)
    best: int | None = None
    indices = list(range(1, ws.n + 1))
    for size in range(1, ws.n + 1):
        for subset in itertools.combinations(indices, size):
            if not cones.in_cone_interior(ws, subset, sigma):
                continue
            d_s = linalg.rank(ws.submatrix(subset))
            total = sum(r[j - 1] for j in subset)
            value = total - d_s
            if best is None or value > best:
                best = value
    return best


def projective_bundle_presentation(
    av: AbelianVarietyData, copies: int = 1
) -> RingPresentation:
    """Cohomology model of the projectivisation of ``copies`` summands of
    the transform of L: dual-torus odd generators plus a degree-2
    hyperplane generator eta with the standard relation

        eta^R = - sum_{k>=1} c_k * eta^(R-k),

    where R = copies * rank and the c_k are the Chern classes of the
    direct sum (the copies-th power of the single-bundle class).
    """
    if copies < 1:
        raise DomainError("need at least one copy")
    m = av.m
    rank = copies * r_sections_abelian(av)
    total_chern = chern_from_character(ch_transform(av)) ** copies
    cap = 2 * (rank - 1 + m)
    base = RingPresentation(
        tuple(dual_odd_names(m)),
        (("eta", 2, rank),),
        degree_cap=cap,
    )
    replacement = base.zero()
    eta = base.gen("eta")
    for k in range(1, rank + 1):
        piece = total_chern.graded_piece(2 * k)
        if piece.is_zero():
            continue
        moved = transport(piece, base)
        replacement = replacement - moved * eta ** (rank - k)
    return base.with_rewrite("eta", replacement)


def projective_space_presentation(dim: int) -> RingPresentation:
    return RingPresentation((), (("eta", 2, dim + 1),), degree_cap=2 * dim)


def build_moduli(model: GlsmModel, sigma_override: SigmaVector | None = None) -> ModuliDescription:
    """Stability verdict, structural kind, dimension, smoothness, and
    cohomology presentation of the vortex moduli space.

    ``sigma_override`` classifies the model at a different stability
    vector (used for decoupling limits, where sigma degenerates to
    tau Vol(M)).
    """
    ws = model.weights
    sigma = sigma_override if sigma_override is not None else model.sigma()
    notes: list[str] = []
    r = model.section_counts()
    abelian = isinstance(model.manifold, geometry.AbelianVariety)
    base_extra = ws.k * model.m if abelian else 0

    decomposition = None
    if ws.n == ws.k:
        decomposition = cones.sigma_decomposition_square(ws, sigma)

    if not cones.in_cone_closed(ws, ws.full_set(), sigma):
        notes.append("cone-membership-necessary-condition-fails")
        return ModuliDescription(
            Verdict.EMPTY, None, None, None, None, tuple(notes), sigma, decomposition
        )

    sigma_zero = all(component.is_zero() for component in sigma)
    if abelian and sigma_zero and all(x == 0 for x in r):
        # Zero-level quotient of a zero-dimensional fibre: the moduli space
        # is the full product of dual tori.
        notes.append("zero-section-fibre-at-zero-level: product of dual tori")
        kind = ToricFibrationKind(fibre_dim=0, base_dim=ws.k * model.m)
        return ModuliDescription(
            Verdict.STABLE, kind, kind.dim, None, None, tuple(notes), sigma, decomposition
        )

    strata_dim = moduli_dimension_glsm(ws, sigma, r)
    if strata_dim is None:
        notes.append("sigma-on-cone-boundary: no support admits strictly positive coefficients")
        return ModuliDescription(
            Verdict.BOUNDARY_UNSTABLE, None, None, None, None, tuple(notes), sigma, decomposition
        )
    if strata_dim < 0:
        notes.append("no-sections: qualifying supports carry no holomorphic sections")
        return ModuliDescription(
            Verdict.EMPTY, None, None, None, None, tuple(notes), sigma, decomposition
        )

    dimension = strata_dim + base_extra
    c1_holds = cones.check_C1(ws, sigma)
    smooth = c1_holds and cones.check_C2(ws)

    kind: ModuliKind
    cohomology: RingPresentation | None = None
    if model.is_weight_one_tower():
        if not abelian:
            notes.append("projectivisation-of-section-space")
            kind = ProjectiveSpaceKind(dim=dimension)
            cohomology = projective_space_presentation(dimension)
        else:
            av = model.abelian_data_for(model.bundles[0])
            rank = ws.n * r_sections_abelian(av)
            notes.append("projectivisation-of-transform-over-dual-torus")
            kind = ProjectiveBundleKind(fibre_rank=rank, base_dim=model.m)
            if kind.dim != dimension:
                raise AssertionError("projective bundle dimension mismatch")
            cohomology = projective_bundle_presentation(av, copies=ws.n)
    elif not abelian:
        notes.append("toric-quotient-of-section-space")
        if dimension == 0:
            kind = PointKind()
        else:
            kind = ToricOrbifoldKind(dim=dimension)
    else:
        notes.append("toric-fibration-over-dual-tori")
        kind = ToricFibrationKind(fibre_dim=strata_dim, base_dim=base_extra)
    if c1_holds:
        notes.append("generic-level: dimension equals total sections minus rank")
    if smooth:
        notes.append("smooth: genericity and lattice conditions hold")

    return ModuliDescription(
        Verdict.STABLE, kind, dimension, smooth, cohomology, tuple(notes), sigma, decomposition
    )
