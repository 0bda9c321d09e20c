import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffbias.ffpoly import (
    DEG_ZERO,
    DomainError,
    FieldSpec,
    Poly,
    PolyParseError,
    enumerate_monic,
    format_poly,
    gcd,
    parse_poly,
    xgcd,
)

F3, F5 = FieldSpec(3), FieldSpec(5)
F9 = FieldSpec(3, 2, (1, 0, 1))  # F_3[x]/(x^2+1)


def polys(spec, max_deg=6):
    return st.lists(st.integers(0, spec.q - 1), max_size=max_deg + 1).map(lambda c: Poly(spec, c))


def nonzero_polys(spec, max_deg=6):
    return polys(spec, max_deg).filter(lambda f: not f.is_zero())


# -- field elements ---------------------------------------------------------


def test_prime_field_examples():
    assert F5.mul(3, 2) == 1
    assert F5.inv(2) == 3


def test_extension_field_x_squared():
    x = F9.element([0, 1])
    assert F9.mul(x, x) == F9.element([2])  # x^2 = -1


def test_inverse_of_zero():
    with pytest.raises(DomainError):
        F5.inv(0)
    with pytest.raises(DomainError):
        F9.inv(0)


def test_bad_fields():
    with pytest.raises(DomainError):
        FieldSpec(4)
    with pytest.raises(DomainError):
        FieldSpec(2)
    with pytest.raises(DomainError):
        FieldSpec(3, 2, (2, 0, 1))  # x^2 + 2 = (x+1)(x+2)
    with pytest.raises(DomainError):
        FieldSpec(3, 2)


@pytest.mark.parametrize("spec", [F3, F5, F9, FieldSpec(7)], ids=str)
def test_field_axioms_exhaustive(spec):
    els = list(spec.elements())
    for a in els:
        assert spec.add(a, spec.neg(a)) == 0
        if a:
            assert spec.mul(a, spec.inv(a)) == 1
            assert spec.pow(a, spec.q - 1) == 1
        for b in els:
            assert spec.add(a, b) == spec.add(b, a)
            assert spec.mul(a, b) == spec.mul(b, a)
    rng = random.Random(1)
    for _ in range(200):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert spec.mul(a, spec.add(b, c)) == spec.add(spec.mul(a, b), spec.mul(a, c))


def test_quadratic_character_counts():
    for spec in (F3, F5, F9):
        vals = [spec.quadratic_character(a) for a in spec.elements()]
        assert vals.count(1) == vals.count(-1) == (spec.q - 1) // 2


# -- polynomials ------------------------------------------------------------


def test_poly_examples():
    T = Poly.monomial(F3, 1)
    assert (T + 1) * (T + 2) == Poly(F3, [2, 0, 1])
    assert gcd(Poly(F3, [2, 0, 1]), T + 1) == T + 1


def test_mod_pow_matches_repeated_multiplication():
    m = parse_poly("T^3+T+4", F5)
    T = Poly.monomial(F5, 1)
    slow = Poly.constant(F5, 1)
    for e in range(1, 40):
        slow = (slow * T) % m
        assert T.mod_pow(e, m) == slow


def test_zero_polynomial_conventions():
    z = Poly(F5, [])
    assert z.degree == DEG_ZERO and z.degree < 0
    assert z.is_zero() and not z
    with pytest.raises(DomainError):
        z.norm()
    with pytest.raises(DomainError):
        divmod(Poly(F5, [1, 1]), z)


def test_norm_is_exact_integer():
    f = Poly.monomial(F5, 40)
    assert f.norm() == 5**40


def test_trailing_zeros_trimmed():
    assert Poly(F5, [1, 2, 0, 0]).coeffs == (1, 2)
    assert Poly(F5, [5, 10]).coeffs == ()


@given(polys(F5), polys(F5))
def test_multiplication_matches_convolution(f, g):
    expected = np.convolve(list(f.coeffs) or [0], list(g.coeffs) or [0]) % 5
    assert (f * g) == Poly(F5, [int(c) for c in expected])


@given(polys(F5), polys(F5), polys(F5))
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f - f == Poly(F5, [])


@given(polys(F9, 5), nonzero_polys(F9, 4))
def test_divmod_reconstruction_f9(f, g):
    quo, rem = divmod(f, g)
    assert quo * g + rem == f
    assert rem.degree < g.degree


@given(polys(F3), nonzero_polys(F3, 4))
def test_divmod_reconstruction(f, g):
    quo, rem = divmod(f, g)
    assert quo * g + rem == f
    assert rem.degree < g.degree


@given(nonzero_polys(F5), nonzero_polys(F5))
def test_gcd_and_bezout(f, g):
    d, s, t = xgcd(f, g)
    assert d == gcd(f, g)
    assert d.is_monic()
    assert d.divides(f) and d.divides(g)
    assert s * f + t * g == d


@given(polys(F5, 5), st.integers(0, 4))
def test_evaluation_is_a_homomorphism(f, x):
    g = f * f + f
    assert g(x) == F5.add(F5.mul(f(x), f(x)), f(x))


def test_derivative():
    f = parse_poly("T^5+2T^3+T", F3)
    assert f.derivative() == parse_poly("2T^4+1", F3)  # 5T^4 + 6T^2 + 1
    # derivative of T^3 vanishes in characteristic 3
    assert Poly.monomial(F3, 3).derivative().is_zero()


# -- enumeration ------------------------------------------------------------


def test_enumerate_examples():
    assert [format_poly(f) for f in enumerate_monic(F3, 1)] == ["T", "T+1", "T+2"]
    assert [format_poly(f) for f in enumerate_monic(F5, 0)] == ["1"]
    assert sum(1 for _ in enumerate_monic(F3, 6)) == 729


@pytest.mark.parametrize("spec,n", [(F3, 8), (F5, 5), (F9, 3)], ids=str)
def test_enumerate_counts_and_distinct(spec, n):
    items = list(enumerate_monic(spec, n))
    assert len(items) == spec.q**n
    assert len(set(items)) == spec.q**n
    assert all(f.is_monic() and f.degree == n for f in items)


# -- text format ------------------------------------------------------------


def test_parse_examples():
    assert parse_poly("T^3+T+4", F5).coeffs == (4, 1, 0, 1)
    assert parse_poly("T^3-T+1", F3).coeffs == (1, 2, 0, 1)
    f = parse_poly("(T^2+1)*(T^3+2*T+1)", F3)
    assert f.degree == 5
    assert f == parse_poly("T^2+1", F3) * parse_poly("T^3+2T+1", F3)
    assert parse_poly(" 2 * T ^ 2 ", F3) == Poly(F3, [0, 0, 2])


@pytest.mark.parametrize(
    "text,pos",
    [("T^3+x", 4), ("T^^2", 2), ("T+", 2), ("(T+1", 4), ("T^3+T+7", 6), ("", 0), ("T)", 1)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(PolyParseError) as info:
        parse_poly(text, F5)
    assert info.value.pos == pos


def test_reduce_flag():
    assert parse_poly("T+7", F5, reduce=True) == parse_poly("T+2", F5)


def test_canonical_format():
    assert format_poly(parse_poly("4+T+T^3", F5)) == "T^3+T+4"
    assert format_poly(parse_poly("T^3-T+1", F3)) == "T^3+2T+1"
    assert format_poly(Poly(F5, [])) == "0"


def test_format_parse_round_trip_random():
    rng = random.Random(20240917)
    for _ in range(1000):
        spec = rng.choice((F3, F5, F9))
        f = Poly(spec, [rng.randrange(spec.q) for _ in range(rng.randrange(0, 9))])
        text = format_poly(f)
        assert parse_poly(text, spec) == f
        assert format_poly(parse_poly(text, spec)) == text


@settings(max_examples=100)
@given(polys(F5, 8))
def test_format_parse_round_trip(f):
    assert parse_poly(format_poly(f), F5) == f
