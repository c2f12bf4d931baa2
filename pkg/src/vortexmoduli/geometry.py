"""Base-manifold catalog: section counts, volumes, slopes, and the
topological numbers every downstream formula consumes.

Kahler classes are parametrised by rational multiples of integral
generators (lambda * c1(E) on manifolds with Picard group Z, lambda [F]
+ delta [C] on the ruled surfaces, sum lambda_j dx^j dx^{m+j} on tori),
which keeps every volume and slope rational.  ``slope_vol`` always means
the rational number

    (c1(L) parallel part / [omega]) * Vol(M)
        = (1/m) * integral of c1(L) ^ omega^(m-1) / (m-1)!,

the quantity entering the stability vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import DomainError, UnsupportedManifoldError
from .fourier_mukai import AbelianVarietyData

Rational = Union[int, Fraction]


# -- manifold descriptors ----------------------------------------------------


@dataclass(frozen=True)
class ProjectiveSpace:
    """Complex projective m-space with [omega] = kahler_scale * c1(O(1))."""

    m: int
    kahler_scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "kahler_scale", Fraction(self.kahler_scale))
        if self.m < 1:
            raise DomainError("projective space needs m >= 1")
        if self.kahler_scale <= 0:
            raise DomainError("Kahler scale must be positive")


@dataclass(frozen=True)
class Grassmannian:
    """Grassmannian of k-planes in C^n, polarised by the Pluecker bundle."""

    n: int
    k: int
    kahler_scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "kahler_scale", Fraction(self.kahler_scale))
        if not 1 <= self.k < self.n:
            raise DomainError("Grassmannian needs 1 <= k < n")
        if self.kahler_scale <= 0:
            raise DomainError("Kahler scale must be positive")

    @property
    def m(self) -> int:
        return self.k * (self.n - self.k)


@dataclass(frozen=True)
class Hirzebruch:
    """The ruled surface P(O(-k) + O) over the projective line.

    [C] is the section class with self-intersection -k, [F] the fibre
    class; the Kahler class is lam [F] + delta [C] and must have positive
    volume delta (2 lam - k delta) / 2.
    """

    k: int
    lam: Fraction
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.k < 0:
            raise DomainError("Hirzebruch index must be >= 0")
        if self.delta <= 0 or self.delta * (2 * self.lam - self.k * self.delta) <= 0:
            raise DomainError("Kahler class has non-positive volume")

    @property
    def m(self) -> int:
        return 2


@dataclass(frozen=True)
class AbelianVariety:
    """An abelian variety together with its reference positive bundle data."""

    data: AbelianVarietyData

    @property
    def m(self) -> int:
        return self.data.m


@dataclass(frozen=True)
class GenericPicZ:
    """A simply connected manifold with Picard group Z, known only through
    its dimension, the self-intersection number t = c1(E)^m of the
    positive generator, and the Kahler scale."""

    m: int
    t: int
    kahler_scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "kahler_scale", Fraction(self.kahler_scale))
        if self.m < 1 or self.t < 1:
            raise DomainError("need m >= 1 and t >= 1")
        if self.kahler_scale <= 0:
            raise DomainError("Kahler scale must be positive")


@dataclass(frozen=True)
class GenericSimplyConnected:
    """A simply connected manifold for which section counts and slopes are
    supplied directly, one (r_j, slope_vol_j) pair per field.

    The engine cannot compute sheaf cohomology for arbitrary manifolds;
    this descriptor surfaces that gap as explicit input.
    """

    m: int
    vol: Fraction
    bundle_table: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(self, "vol", Fraction(self.vol))
        object.__setattr__(
            self,
            "bundle_table",
            tuple((int(r), Fraction(s)) for r, s in self.bundle_table),
        )
        if self.m < 1:
            raise DomainError("need m >= 1")
        if self.vol <= 0:
            raise DomainError("volume must be positive")
        if any(r < 0 for r, _ in self.bundle_table):
            raise DomainError("section counts must be >= 0")


ManifoldDescriptor = Union[
    ProjectiveSpace, Grassmannian, Hirzebruch, AbelianVariety, GenericPicZ, GenericSimplyConnected
]

PIC_Z_KINDS = (ProjectiveSpace, Grassmannian, GenericPicZ)


# -- bundle descriptors --------------------------------------------------------


@dataclass(frozen=True)
class Degree:
    """Line bundle of degree d on a manifold with Picard group Z."""

    d: int


@dataclass(frozen=True)
class Bidegree:
    """Line bundle with class a [C] + b [F] on a Hirzebruch surface."""

    a: int
    b: int


@dataclass(frozen=True)
class DeltaVector:
    """Line bundle on an abelian variety with c1 = sum delta_j dx^j dx^{m+j}."""

    deltas: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(int(d) for d in self.deltas))


@dataclass(frozen=True)
class TableIndex:
    """Reference into the bundle table of a GenericSimplyConnected manifold
    (1-based, matching the field index)."""

    j: int


BundleDescriptor = Union[Degree, Bidegree, DeltaVector, TableIndex]


def combine_bundles(
    coefficients: Sequence[int], bundles: Sequence[BundleDescriptor]
) -> BundleDescriptor:
    """The integral linear combination sum_a coefficients[a] * bundles[a]
    of compatible degree data (used to derive each field's bundle from the
    principal circle factors)."""
    if len(coefficients) != len(bundles) or not bundles:
        raise DomainError("coefficient/bundle length mismatch")
    first = bundles[0]
    if isinstance(first, Degree):
        return Degree(sum(c * b.d for c, b in zip(coefficients, bundles)))
    if isinstance(first, Bidegree):
        return Bidegree(
            sum(c * b.a for c, b in zip(coefficients, bundles)),
            sum(c * b.b for c, b in zip(coefficients, bundles)),
        )
    if isinstance(first, DeltaVector):
        length = len(first.deltas)
        if any(len(b.deltas) != length for b in bundles):
            raise DomainError("delta vectors of unequal length")
        return DeltaVector(
            tuple(
                sum(c * b.deltas[i] for c, b in zip(coefficients, bundles))
                for i in range(length)
            )
        )
    raise DomainError(f"cannot combine bundle descriptors of type {type(first).__name__}")


# -- section counts --------------------------------------------------------------


def _binomial(n: int, k: int) -> int:
    return math.comb(n, k)


def r_sections(man: ManifoldDescriptor, bun: BundleDescriptor) -> int:
    """Exact dimension of the space of holomorphic sections.

    Conventions on Picard-group-Z manifolds: degree d < 0 gives 0, d = 0
    gives 1 (the constants).
    """
    if isinstance(man, ProjectiveSpace):
        _expect(man, bun, Degree)
        if bun.d < 0:
            return 0
        return _binomial(man.m + bun.d, man.m)
    if isinstance(man, Grassmannian):
        _expect(man, bun, Degree)
        if bun.d < 0:
            return 0
        if bun.d == 0:
            return 1
        value = Fraction(1)
        nk = man.n - man.k
        for i in range(1, nk + 1):
            for j in range(nk + 1, man.n + 1):
                value *= Fraction(bun.d + j - i, j - i)
        if value.denominator != 1:
            raise AssertionError("Grassmannian section count is not an integer")
        return int(value)
    if isinstance(man, Hirzebruch):
        _expect(man, bun, Bidegree)
        if bun.a < 0:
            return 0
        return sum(max(0, bun.b - man.k * level + 1) for level in range(bun.a + 1))
    if isinstance(man, AbelianVariety):
        _expect(man, bun, DeltaVector)
        if len(bun.deltas) != man.m:
            raise DomainError("delta vector length must equal the dimension")
        if any(d <= 0 for d in bun.deltas):
            # Non-positive polarisation: the section space of the generic
            # holomorphic structure (which is what the fibre of the moduli
            # fibration sees) vanishes, including for the topologically
            # trivial class whose generic flat twist has no sections.
            return 0
        out = 1
        for d in bun.deltas:
            out *= d
        return out
    if isinstance(man, GenericSimplyConnected):
        _expect(man, bun, TableIndex)
        if not 1 <= bun.j <= len(man.bundle_table):
            raise DomainError("bundle table index out of range")
        return man.bundle_table[bun.j - 1][0]
    raise UnsupportedManifoldError(
        f"section counts are not computable for {type(man).__name__}; "
        "supply them through GenericSimplyConnected"
    )


def _expect(man, bun, kind) -> None:
    if not isinstance(bun, kind):
        raise UnsupportedManifoldError(
            f"{type(man).__name__} takes {kind.__name__} bundle data, got {type(bun).__name__}"
        )


def t_number(man: ManifoldDescriptor) -> int:
    """Self-intersection number of the positive Picard generator,
    integral of c1(E)^m."""
    if isinstance(man, ProjectiveSpace):
        return 1
    if isinstance(man, GenericPicZ):
        return man.t
    if isinstance(man, Grassmannian):
        value = Fraction(math.factorial(man.k * (man.n - man.k)))
        for j in range(1, man.k + 1):
            value *= Fraction(
                math.factorial(j - 1), math.factorial(man.n - man.k + j - 1)
            )
        if value.denominator != 1 or value <= 0:
            raise AssertionError("Grassmannian degree must be a positive integer")
        return int(value)
    raise UnsupportedManifoldError(
        f"t number is defined only for Picard-group-Z manifolds, not {type(man).__name__}"
    )


def volume_and_slope(
    man: ManifoldDescriptor, bun: BundleDescriptor
) -> tuple[Fraction, Fraction]:
    """Vol(M) and slope_vol of one line bundle, both exact rationals.

    Picard-group-Z manifolds with [omega] = lambda c1(E):
        Vol = lambda^m t / m!,   slope_vol = d lambda^(m-1) t / m!.
    Hirzebruch with [omega] = lam [F] + delta [C] (intersection table
    [C]^2 = -k, [C][F] = 1, [F]^2 = 0):
        Vol = delta (2 lam - k delta) / 2,
        slope_vol = (a lam + b delta - a k delta) / 2.
    Abelian varieties: Vol = prod lambda_j,
        slope_vol = (1/m) sum_j delta_j prod_{i != j} lambda_i.
    """
    if isinstance(man, PIC_Z_KINDS):
        _expect(man, bun, Degree)
        lam = man.kahler_scale
        t = t_number(man)
        fact = math.factorial(man.m)
        vol = lam**man.m * t / fact
        slope = Fraction(bun.d) * lam ** (man.m - 1) * t / fact
        return vol, slope
    if isinstance(man, Hirzebruch):
        _expect(man, bun, Bidegree)
        vol = man.delta * (2 * man.lam - man.k * man.delta) / 2
        if vol <= 0:
            raise DomainError("Hirzebruch Kahler class has non-positive volume")
        slope = (
            Fraction(bun.a) * man.lam
            + Fraction(bun.b) * man.delta
            - Fraction(bun.a) * man.k * man.delta
        ) / 2
        return vol, slope
    if isinstance(man, AbelianVariety):
        _expect(man, bun, DeltaVector)
        m = man.m
        if len(bun.deltas) != m:
            raise DomainError("delta vector length must equal the dimension")
        lambdas = man.data.lambdas
        vol = Fraction(1)
        for x in lambdas:
            vol *= x
        slope = Fraction(0)
        for j in range(m):
            term = Fraction(bun.deltas[j])
            for i in range(m):
                if i != j:
                    term *= lambdas[i]
            slope += term
        return vol, slope / m
    if isinstance(man, GenericSimplyConnected):
        _expect(man, bun, TableIndex)
        if not 1 <= bun.j <= len(man.bundle_table):
            raise DomainError("bundle table index out of range")
        return man.vol, man.bundle_table[bun.j - 1][1]
    raise UnsupportedManifoldError(f"no volume data for {type(man).__name__}")


def manifold_dimension(man: ManifoldDescriptor) -> int:
    return man.m


def is_simply_connected(man: ManifoldDescriptor) -> bool:
    """Whether the descriptor models a b1 = 0 base (everything except tori)."""
    return not isinstance(man, AbelianVariety)


def is_trivial_bundle(man: ManifoldDescriptor, bun: BundleDescriptor) -> bool:
    """Topological triviality of the degree data (degree zero on Pic = Z)."""
    if isinstance(bun, Degree):
        return bun.d == 0
    if isinstance(bun, Bidegree):
        return bun.a == 0 and bun.b == 0
    if isinstance(bun, DeltaVector):
        return all(d == 0 for d in bun.deltas)
    raise UnsupportedManifoldError(
        "triviality is not decidable for table-indexed bundles"
    )
