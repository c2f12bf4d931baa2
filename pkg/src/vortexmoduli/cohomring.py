"""Graded-commutative cohomology models over Q[pi].

The rings needed here are all of the shape

    exterior algebra on odd (degree-1) generators
      tensor
    truncated polynomial algebra on even generators,

where each even generator g carries one head relation: either a plain
truncation g^N = 0 or a rewrite g^r -> (element with g-exponent < r).
Normalisation strictly reduces head exponents, so it terminates, and a
single relation per generator keeps rewriting confluent without any
Groebner machinery.

Monomials are stored in normal form: odd generators as a bitmask over
the declaration order (the Koszul sign of a product is the parity of the
merge), even generators as an exponent vector below the relation heads.
Terms above the presentation's degree cap are dropped eagerly; the cap
is set to twice the complex dimension of the modelled manifold, above
which cohomology vanishes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import DomainError, NonNilpotentError, PresentationMismatchError
from .scalars import PiPoly

Scalar = Union[PiPoly, Fraction, int]
MonKey = tuple[int, tuple[int, ...]]  # (odd bitmask, even exponent vector)
TermMap = dict[MonKey, PiPoly]


def _as_poly(value: Scalar) -> PiPoly:
    if isinstance(value, PiPoly):
        return value
    return PiPoly.constant(value)


def koszul_sign(mask_a: int, mask_b: int) -> int:
    """Sign of merging two sorted odd-generator lists: parity of the
    number of pairs (i in a, j in b) with i > j."""
    inversions = 0
    b = mask_b
    while b:
        j = (b & -b).bit_length() - 1
        inversions += bin(mask_a >> (j + 1)).count("1")
        b &= b - 1
    return -1 if inversions & 1 else 1


def permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return -1 if inversions & 1 else 1


class RingPresentation:
    """Generators and relations of one graded-commutative model.

    odd_names: degree-1 anticommuting generators, in declaration order.
    even_gens: (name, degree, head) triples; g**head is rewritten to the
        attached replacement, or to zero when no replacement is given.
    degree_cap: optional total-degree cutoff (twice the complex dimension
        of the modelled space).
    """

    __slots__ = ("odd_names", "even_names", "even_degrees", "heads", "rewrites", "degree_cap",
                 "_odd_index", "_even_index")

    def __init__(
        self,
        odd_names: Sequence[str] = (),
        even_gens: Sequence[tuple[str, int, int]] = (),
        degree_cap: int | None = None,
        rewrites: Sequence[tuple[tuple[MonKey, PiPoly], ...] | None] | None = None,
    ):
        names = tuple(odd_names)
        self.odd_names = names
        self.even_names = tuple(g[0] for g in even_gens)
        self.even_degrees = tuple(g[1] for g in even_gens)
        self.heads = tuple(g[2] for g in even_gens)
        all_names = names + self.even_names
        if len(set(all_names)) != len(all_names):
            raise DomainError("generator names must be distinct")
        if any(d <= 0 or d % 2 for d in self.even_degrees):
            raise DomainError("even generators need positive even degree")
        if any(h < 1 for h in self.heads):
            raise DomainError("relation heads must be >= 1")
        self.degree_cap = degree_cap
        self.rewrites = tuple(rewrites) if rewrites is not None else (None,) * len(self.even_names)
        if len(self.rewrites) != len(self.even_names):
            raise DomainError("one rewrite slot per even generator")
        self._odd_index = {name: i for i, name in enumerate(names)}
        self._even_index = {name: i for i, name in enumerate(self.even_names)}

    # -- identity ----------------------------------------------------------

    def _signature(self):
        return (self.odd_names, self.even_names, self.even_degrees, self.heads,
                self.degree_cap, self.rewrites)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingPresentation):
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self) -> int:
        return hash((self.odd_names, self.even_names, self.heads, self.degree_cap))

    def __repr__(self) -> str:
        return (f"RingPresentation(odd={list(self.odd_names)}, "
                f"even={list(zip(self.even_names, self.heads))}, cap={self.degree_cap})")

    # -- building elements ---------------------------------------------------

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def one(self) -> "RingElement":
        return self.scalar(1)

    def scalar(self, value: Scalar) -> "RingElement":
        poly = _as_poly(value)
        if poly.is_zero():
            return self.zero()
        return RingElement(self, {self._unit_key(): poly})

    def gen(self, name: str) -> "RingElement":
        if name in self._odd_index:
            key = (1 << self._odd_index[name], (0,) * len(self.even_names))
            return RingElement(self, {key: PiPoly.constant(1)})
        if name in self._even_index:
            exps = [0] * len(self.even_names)
            exps[self._even_index[name]] = 1
            # Normalise: a head-1 relation rewrites the generator itself.
            return RingElement(self, {(0, tuple(exps)): PiPoly.constant(1)}, _normalized=False)
        raise DomainError(f"unknown generator {name!r}")

    def _unit_key(self) -> MonKey:
        return (0, (0,) * len(self.even_names))

    def monomial_degree(self, key: MonKey) -> int:
        mask, exps = key
        return bin(mask).count("1") + sum(e * d for e, d in zip(exps, self.even_degrees))

    def with_rewrite(self, name: str, replacement: "RingElement") -> "RingPresentation":
        """Install g**head := replacement for the named even generator.

        The replacement is given in this presentation (or one with the
        same generators) and its exponent in the named generator must
        stay below the head, so normalisation terminates.
        """
        if name not in self._even_index:
            raise DomainError(f"unknown even generator {name!r}")
        idx = self._even_index[name]
        head = self.heads[idx]
        for (mask, exps) in replacement.terms:
            if exps[idx] >= head:
                raise DomainError("replacement must lower the head exponent")
        stored = tuple(sorted(replacement.terms.items()))
        rewrites = list(self.rewrites)
        rewrites[idx] = stored
        return RingPresentation(
            self.odd_names,
            tuple(zip(self.even_names, self.even_degrees, self.heads)),
            degree_cap=self.degree_cap,
            rewrites=tuple(rewrites),
        )

    def with_degree_cap(self, cap: int | None) -> "RingPresentation":
        return RingPresentation(
            self.odd_names,
            tuple(zip(self.even_names, self.even_degrees, self.heads)),
            degree_cap=cap,
            rewrites=self.rewrites,
        )


def exterior_presentation(names: Sequence[str], degree_cap: int | None = None) -> RingPresentation:
    return RingPresentation(tuple(names), (), degree_cap=degree_cap)


def truncated_polynomial_presentation(name: str, head: int, degree: int = 2,
                                      degree_cap: int | None = None) -> RingPresentation:
    return RingPresentation((), ((name, degree, head),), degree_cap=degree_cap)


def tensor_presentation(p: RingPresentation, q: RingPresentation) -> RingPresentation:
    """The tensor product model, generators of p first.

    Generator names must be disjoint; the inclusions of the factors are
    name-preserving (see ``transport``).
    """
    if set(p.odd_names + p.even_names) & set(q.odd_names + q.even_names):
        raise DomainError("tensor factors share generator names")
    cap = None
    if p.degree_cap is not None and q.degree_cap is not None:
        cap = p.degree_cap + q.degree_cap
    even = tuple(zip(p.even_names, p.even_degrees, p.heads)) + tuple(
        zip(q.even_names, q.even_degrees, q.heads)
    )
    out = RingPresentation(p.odd_names + q.odd_names, even, degree_cap=cap)
    rewrites: list = []
    for stored in p.rewrites:
        rewrites.append(_remap_stored(stored, p, out))
    for stored in q.rewrites:
        rewrites.append(_remap_stored(stored, q, out))
    return RingPresentation(out.odd_names,
                            tuple(zip(out.even_names, out.even_degrees, out.heads)),
                            degree_cap=cap, rewrites=tuple(rewrites))


def _remap_stored(stored, source: RingPresentation, target: RingPresentation):
    if stored is None:
        return None
    remapped = []
    for key, coeff in stored:
        elem = RingElement(source, {key: coeff})
        moved = transport(elem, target)
        remapped.extend(moved.terms.items())
    return tuple(sorted(remapped))


def transport(element: "RingElement", target: RingPresentation) -> "RingElement":
    """Rewrite an element in another presentation, matching generators by name.

    Every generator appearing in the element must exist in the target;
    this realises both inclusions into a tensor model and extraction of
    a factor-only class back out of one.
    """
    src = element.presentation
    terms: TermMap = {}
    for (mask, exps), coeff in element.terms.items():
        new_mask = 0
        sign = 1
        positions = []
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            name = src.odd_names[i]
            if name not in target._odd_index:
                raise DomainError(f"generator {name!r} missing from target presentation")
            positions.append(target._odd_index[name])
            m &= m - 1
        # positions are visited in increasing source order; the sign is the
        # parity of sorting them into target order.
        sign = permutation_sign(positions)
        for pos in positions:
            new_mask |= 1 << pos
        new_exps = [0] * len(target.even_names)
        for i, e in enumerate(exps):
            if e == 0:
                continue
            name = src.even_names[i]
            if name not in target._even_index:
                raise DomainError(f"generator {name!r} missing from target presentation")
            new_exps[target._even_index[name]] += e
        _accumulate(terms, (new_mask, tuple(new_exps)), coeff.scale(sign))
    return RingElement(target, _normalize(target, terms))


def _accumulate(terms: TermMap, key: MonKey, coeff: PiPoly) -> None:
    if coeff.is_zero():
        return
    existing = terms.get(key)
    total = coeff if existing is None else existing + coeff
    if total.is_zero():
        terms.pop(key, None)
    else:
        terms[key] = total


def _normalize(pres: RingPresentation, raw: TermMap) -> TermMap:
    """Apply degree cap and head rewrites until all terms are in normal form."""
    out: TermMap = {}
    work = list(raw.items())
    while work:
        (mask, exps), coeff = work.pop()
        if coeff.is_zero():
            continue
        if pres.degree_cap is not None and pres.monomial_degree((mask, exps)) > pres.degree_cap:
            continue
        over = next((i for i, e in enumerate(exps) if e >= pres.heads[i]), None)
        if over is None:
            _accumulate(out, (mask, exps), coeff)
            continue
        stored = pres.rewrites[over]
        if stored is None:
            continue  # plain truncation: the term dies
        base_exps = list(exps)
        base_exps[over] -= pres.heads[over]
        for (r_mask, r_exps), r_coeff in stored:
            if mask & r_mask:
                continue
            sign = koszul_sign(mask, r_mask)
            new_exps = tuple(b + r for b, r in zip(base_exps, r_exps))
            work.append(((mask | r_mask, new_exps), coeff * r_coeff * sign))
    return out


class RingElement:
    """An element of a graded-commutative model, in normal form."""

    __slots__ = ("presentation", "terms")

    def __init__(self, presentation: RingPresentation, terms: TermMap, *, _normalized: bool = True):
        self.presentation = presentation
        self.terms = terms if _normalized else _normalize(presentation, terms)

    # -- helpers -------------------------------------------------------------

    def _check(self, other: "RingElement") -> None:
        if self.presentation != other.presentation:
            raise PresentationMismatchError("elements live in different presentations")

    def is_zero(self) -> bool:
        return not self.terms

    def scalar_part(self) -> PiPoly:
        return self.terms.get(self.presentation._unit_key(), PiPoly())

    def graded_piece(self, degree: int) -> "RingElement":
        pres = self.presentation
        return RingElement(
            pres,
            {k: c for k, c in self.terms.items() if pres.monomial_degree(k) == degree},
        )

    def max_degree(self) -> int:
        pres = self.presentation
        return max((pres.monomial_degree(k) for k in self.terms), default=0)

    def is_homogeneous(self, degree: int) -> bool:
        pres = self.presentation
        return all(pres.monomial_degree(k) == degree for k in self.terms)

    def coefficient(self, odd_names: Iterable[str] = (), even_powers: Mapping[str, int] | None = None) -> PiPoly:
        """Coefficient of the monomial with the given generators."""
        pres = self.presentation
        mask = 0
        for name in odd_names:
            mask |= 1 << pres._odd_index[name]
        exps = [0] * len(pres.even_names)
        for name, power in (even_powers or {}).items():
            exps[pres._even_index[name]] = power
        return self.terms.get((mask, tuple(exps)), PiPoly())

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "RingElement | Scalar") -> "RingElement":
        other = self._coerce(other)
        self._check(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            _accumulate(terms, key, coeff)
        return RingElement(self.presentation, terms)

    def __sub__(self, other: "RingElement | Scalar") -> "RingElement":
        return self + (-self._coerce(other))

    def __neg__(self) -> "RingElement":
        return RingElement(self.presentation, {k: -c for k, c in self.terms.items()})

    def __mul__(self, other: "RingElement | Scalar") -> "RingElement":
        if isinstance(other, (PiPoly, Fraction, int)):
            poly = _as_poly(other)
            if poly.is_zero():
                return self.presentation.zero()
            return RingElement(
                self.presentation, _normalize(self.presentation, {k: c * poly for k, c in self.terms.items()})
            )
        self._check(other)
        pres = self.presentation
        raw: TermMap = {}
        for (mask_a, exps_a), ca in self.terms.items():
            for (mask_b, exps_b), cb in other.terms.items():
                if mask_a & mask_b:
                    continue
                sign = koszul_sign(mask_a, mask_b)
                key = (mask_a | mask_b, tuple(x + y for x, y in zip(exps_a, exps_b)))
                _accumulate(raw, key, ca * cb * sign)
        return RingElement(pres, _normalize(pres, raw))

    def __rmul__(self, other: Scalar) -> "RingElement":
        return self.__mul__(other)

    def __pow__(self, exponent: int) -> "RingElement":
        if exponent < 0:
            raise DomainError("negative powers are not supported in the ring")
        result = self.presentation.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def _coerce(self, value: "RingElement | Scalar") -> "RingElement":
        if isinstance(value, RingElement):
            return value
        return self.presentation.scalar(value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (PiPoly, Fraction, int)):
            other = self.presentation.scalar(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.presentation == other.presentation and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.presentation, tuple(sorted(self.terms.items()))))

    # -- rendering ---------------------------------------------------------------

    def _sorted_keys(self) -> list[MonKey]:
        pres = self.presentation
        def order(key: MonKey):
            mask, exps = key
            bits = tuple(i for i in range(len(pres.odd_names)) if mask >> i & 1)
            return (pres.monomial_degree(key), exps, bits)
        return sorted(self.terms, key=order)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pres = self.presentation
        chunks = []
        for key in self._sorted_keys():
            mask, exps = key
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(pres.even_names[i])
                elif e > 1:
                    factors.append(f"{pres.even_names[i]}^{e}")
            for i in range(len(pres.odd_names)):
                if mask >> i & 1:
                    factors.append(pres.odd_names[i])
            coeff = str(self.terms[key])
            body = "·".join(factors)
            chunks.append(f"({coeff})" + (f"·{body}" if body else ""))
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"RingElement({self})"


def _series_coefficient(name: str, j: int) -> Fraction:
    if name == "exp":
        f = Fraction(1)
        for i in range(2, j + 1):
            f /= i
        return f
    if name == "log1p":
        return Fraction((-1) ** (j - 1), j)
    if name == "arctan":
        if j % 2 == 0:
            return Fraction(0)
        return Fraction((-1) ** ((j - 1) // 2), j)
    if name == "geometric_inverse":
        return Fraction((-1) ** j)
    raise DomainError(f"unknown series {name!r}")


def formal_series(name: str, x: RingElement) -> RingElement:
    """Exact Maclaurin series of exp/log1p/arctan, or the geometric inverse.

    exp, log1p and arctan require a nilpotent argument (zero scalar
    part); geometric_inverse inverts 1 + nilpotent and requires scalar
    part exactly 1.  Nilpotency in these finite models guarantees the
    loop terminates.
    """
    scalar = x.scalar_part()
    if name == "geometric_inverse":
        if scalar != PiPoly.constant(1):
            raise NonNilpotentError("geometric_inverse needs scalar part 1")
        nil = x - x.presentation.one()
    else:
        if not scalar.is_zero():
            raise NonNilpotentError(f"{name} needs a nilpotent argument")
        nil = x
    total = x.presentation.one() if name in ("exp", "geometric_inverse") else x.presentation.zero()
    power = nil
    j = 1
    while not power.is_zero():
        c = _series_coefficient(name, j)
        if c:
            total = total + power * c
        j += 1
        power = power * nil
        if j > 10_000:  # pragma: no cover
            raise AssertionError("series failed to terminate; presentation not finite?")
    return total


def fibre_integrate(
    element: RingElement,
    fibre_gens: Iterable[str],
    top_monomial: Sequence[str],
) -> RingElement:
    """Integration over a fibre with odd top form.

    ``top_monomial`` is the full list of the fibre's odd generators in
    the order whose wedge is the positively-oriented top form; the given
    order matters because it fixes the sign convention.  A monomial
    containing every fibre generator contributes its residual base
    monomial with the sign of the permutation that rewrites it as
    (residual, top_monomial); every other monomial integrates to zero.
    """
    pres = element.presentation
    fibre = set(fibre_gens)
    top = list(top_monomial)
    if set(top) != fibre or len(top) != len(fibre):
        raise DomainError("top_monomial must order exactly the fibre generators")
    try:
        top_idx = [pres._odd_index[name] for name in top]
    except KeyError as exc:
        raise DomainError(f"unknown fibre generator {exc.args[0]!r}") from exc
    fibre_mask = 0
    for i in top_idx:
        fibre_mask |= 1 << i
    out: TermMap = {}
    for (mask, exps), coeff in element.terms.items():
        if mask & fibre_mask != fibre_mask:
            continue
        residual = mask & ~fibre_mask
        residual_idx = [i for i in range(len(pres.odd_names)) if residual >> i & 1]
        # Stored order is increasing; target order is (residual..., top...).
        target = residual_idx + top_idx
        ranks = {pos: r for r, pos in enumerate(sorted(target))}
        sign = permutation_sign([ranks[p] for p in target])
        _accumulate(out, (residual, exps), coeff.scale(sign))
    return RingElement(pres, _normalize(pres, out))
