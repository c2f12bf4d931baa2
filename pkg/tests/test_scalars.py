import random
from fractions import Fraction

import pytest

from vortexmoduli.errors import DomainError
from vortexmoduli.scalars import (
    PI,
    PiPoly,
    Sign,
    pi_enclosure,
    poly_divmod,
    poly_gcd,
    pp_add,
    pp_approx,
    pp_mul,
    pp_sign,
)


def rnd_poly(rng, max_deg=4):
    return PiPoly(
        [Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(rng.randint(0, max_deg))]
    )


def test_canonical_form_strips_trailing_zeros():
    assert PiPoly([1, 2, 0, 0]).coeffs == (Fraction(1), Fraction(2))
    assert PiPoly([0, 0]).is_zero()
    assert PiPoly([]).degree == -1


def test_add_examples():
    assert pp_add(PiPoly([1, 2]), PiPoly([3, -2])) == PiPoly([4])
    x = PiPoly([5, -1, 3])
    assert pp_add(PiPoly(), x) == x
    assert pp_add(PI, PI) == PiPoly([0, 2])


def test_mul_examples():
    assert pp_mul(PI, PI) == PiPoly([0, 0, 1])
    assert pp_mul(PiPoly([1, 1]), PiPoly([1, -1])) == PiPoly([1, 0, -1])
    assert pp_mul(PiPoly(), PiPoly([7, 8])).is_zero()


def test_sign_examples():
    assert pp_sign(PI - 3) == Sign.POSITIVE
    assert pp_sign(PiPoly()) == Sign.ZERO
    assert pp_sign(PiPoly([22, -7])) == Sign.POSITIVE
    assert pp_sign(PiPoly([22, -8])) == Sign.NEGATIVE
    assert pp_sign(-(PI**3)) == Sign.NEGATIVE


def test_sign_needs_refinement_beyond_seed():
    # 355/113 agrees with pi to 6 decimals; the difference still gets a sign.
    tight = PiPoly([Fraction(355, 113), -1])
    assert pp_sign(tight) == Sign.POSITIVE
    # An even tighter rational approximation from the continued fraction.
    c = Fraction(5419351, 1725033)
    assert pp_sign(PiPoly([c, -1])) == Sign.POSITIVE


def test_approx_examples():
    assert pp_approx(PI, 5) == "3.14159"
    assert pp_approx(PiPoly([2]), 3) == "2.000"
    assert pp_approx(PI * PI, 4) == "9.8696"
    assert pp_approx(PiPoly([Fraction(1, 2)]), 1) == "0.5"
    assert pp_approx(-PI, 3) == "-3.142"
    with pytest.raises(DomainError):
        pp_approx(PI, 0)


def test_approx_matches_sign():
    rng = random.Random(7)
    for _ in range(40):
        a = rnd_poly(rng)
        rendered = pp_approx(a, 12)
        sign = pp_sign(a)
        value_negative = rendered.startswith("-") and any(c != "0" for c in rendered if c.isdigit())
        if sign == Sign.NEGATIVE:
            assert rendered.startswith("-")
        if sign == Sign.ZERO:
            assert set(rendered) <= {"0", ".", "-"}
        if value_negative:
            assert sign == Sign.NEGATIVE


def test_ring_axioms_random():
    rng = random.Random(42)
    for _ in range(80):
        a, b, c = rnd_poly(rng), rnd_poly(rng), rnd_poly(rng)
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert a * (b * c) == (a * b) * c
        assert pp_sign(a * a) in (Sign.ZERO, Sign.POSITIVE)


def test_zero_iff_all_coeffs_zero():
    rng = random.Random(3)
    for _ in range(40):
        a = rnd_poly(rng)
        assert (pp_sign(a) == Sign.ZERO) == a.is_zero()


def test_enclosure_agrees_with_seed():
    lo, hi = pi_enclosure(80)
    assert hi - lo <= Fraction(1, 10**80)
    assert Fraction(314159265358979, 10**14) < lo
    assert hi < Fraction(314159265358980, 10**14)


def test_division_by_monomial():
    x = PiPoly([0, 0, 6, 2])
    assert x.div_monomial(2, 1) == PiPoly([0, 3, 1])
    with pytest.raises(DomainError):
        PiPoly([1, 2]).div_monomial(1, 1)
    with pytest.raises(DomainError):
        x.div_monomial(0)


def test_power_and_scale():
    assert (PI + 1) ** 2 == PiPoly([1, 2, 1])
    assert PiPoly([1, 1]).scale(Fraction(1, 2)) == PiPoly([Fraction(1, 2), Fraction(1, 2)])
    with pytest.raises(DomainError):
        PI ** (-1)


def test_poly_divmod_and_gcd():
    a = PiPoly([0, 0, 1])  # pi^2
    b = PiPoly([0, 1])  # pi
    q, r = poly_divmod(a, b)
    assert q == b and r.is_zero()
    g = poly_gcd(PiPoly([-1, 0, 1]), PiPoly([1, 1]))  # (pi^2-1, pi+1) -> pi+1
    assert g == PiPoly([1, 1])
    rng = random.Random(11)
    for _ in range(25):
        a, b = rnd_poly(rng), rnd_poly(rng)
        if b.is_zero():
            continue
        q, r = poly_divmod(a, b)
        assert q * b + r == a
        assert r.is_zero() or r.degree < b.degree


def test_json_rendering():
    doc = PiPoly([2, -12]).to_json(6)
    assert doc["coeffs"] == ["2/1", "-12/1"]
    assert doc["approx"].startswith("-35.6")


def test_str_rendering():
    assert str(PiPoly([2, -12])) == "2 - 12*pi"
    assert str(PiPoly()) == "0"
    assert str(PI) == "pi"
    assert str(PiPoly([0, 0, Fraction(1, 2)])) == "1/2*pi^2"
