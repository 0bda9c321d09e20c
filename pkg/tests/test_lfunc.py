import math
import random
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import Q3_CUBIC, Q3_DEG5, Q5_CUBIC, modulus
from ffbias.ffpoly import DomainError, FieldSpec, Poly, enumerate_monic, parse_poly
from ffbias.lfunc import (
    IntegrityError,
    LPolynomial,
    central_l_value,
    format_upoly,
    gsh_diagnostic,
    inverse_zeros,
    l_polynomial,
)
from ffbias.multfunc import is_squarefree

F3, F5 = FieldSpec(3), FieldSpec(5)
F9 = FieldSpec(3, 2, (1, 0, 1))


def L_of(q, text):
    spec, m = modulus(q, text)
    return l_polynomial(spec, m)


def squarefree_moduli(spec, max_deg):
    return [m for d in range(1, max_deg + 1) for m in enumerate_monic(spec, d) if is_squarefree(m)]


def reconstruct(z):
    # expand prod (1 - 2 sqrt(q) cos t u + q u^2) from the angles, real zeros counted once
    q = z.q
    poly = np.array([1.0])
    real = [t for t in z.angles if t in (0.0, math.pi)] if z.has_real_zeros else []
    for t in z.angles:
        if t in real:
            continue
        poly = np.convolve(poly, [1.0, -2 * math.sqrt(q) * math.cos(t), q])
    for t in real:
        poly = np.convolve(poly, [1.0, -math.sqrt(q) * math.cos(t)])
    if z.has_unit_zero:
        poly = np.convolve(poly, [1.0, -1.0])
    return poly


# -- the L-polynomial -------------------------------------------------------


@pytest.mark.parametrize(
    "q,text,coeffs",
    [
        (5, "T^3+T+4", (1, 3, 5)),
        (3, "T^3-T+1", (1, -3, 3)),
        (3, "(T^2+1)(T^3+2T+1)", (1, 1, 4, 3, 9)),
        (3, "T+1", (1,)),
        (5, "T", (1,)),
        (3, "T^2+1", (1, -1)),
        (5, "T^2+2", (1, -1)),
    ],
)
def test_l_polynomial_examples(q, text, coeffs):
    assert L_of(q, text).coeffs == coeffs


def test_l_polynomial_rejects_bad_moduli():
    with pytest.raises(DomainError):
        l_polynomial(F3, parse_poly("T^2", F3))
    with pytest.raises(DomainError):
        l_polynomial(F3, parse_poly("1", F3))
    with pytest.raises(DomainError):
        l_polynomial(F5, parse_poly("T+1", F3))


@pytest.mark.parametrize("spec,max_deg", [(F3, 5), (F5, 3), (F9, 2)], ids=str)
def test_batch_euler_path_equals_reciprocity_path(spec, max_deg):
    # the vectorized Euler criterion and the reciprocity walk share no code
    for m in squarefree_moduli(spec, max_deg):
        assert l_polynomial(spec, m, "batch") == l_polynomial(spec, m, "scalar")


@pytest.mark.parametrize("spec,max_deg", [(F3, 5), (F5, 5)], ids=str)
def test_coefficient_invariants_scan(spec, max_deg):
    for m in squarefree_moduli(spec, max_deg):
        L = l_polynomial(spec, m)
        M = m.degree
        assert L.coeffs[0] == 1
        assert L.degree <= M - 1
        if M % 2 == 0:
            assert sum(L.coeffs) == 0
        assert abs(L.coeffs[-1]) <= spec.q ** ((M - 1) / 2)


def test_format_and_json_round_trip():
    L = L_of(*Q5_CUBIC)
    assert str(L) == "1 + 3u + 5u^2"
    assert format_upoly((1, -3, 3)) == "1 - 3u + 3u^2"
    assert format_upoly((1, 0, -1)) == "1 - u^2"
    assert LPolynomial.from_json(L.to_json()) == L
    L9 = l_polynomial(F9, Poly(F9, [F9.element([0, 1]), 1, 1]))
    assert LPolynomial.from_json(L9.to_json()) == L9


def test_m_prime_formula():
    for M in range(1, 9):
        expected = (M - 1) // 2 if M % 2 else (M - 2) // 2
        L = LPolynomial(F3, Poly.monomial(F3, M), (1,))
        assert L.m_prime == expected


# -- inverse zeros ----------------------------------------------------------


def test_angle_q5_cubic():
    z = inverse_zeros(L_of(*Q5_CUBIC))
    assert z.m_prime == 1 and not z.has_unit_zero
    assert z.angles[0] == pytest.approx(math.acos(-3 / math.sqrt(20)), abs=1e-12)


def test_angle_gsh_violating_cubic():
    z = inverse_zeros(L_of(*Q3_CUBIC))
    assert z.angles[0] == pytest.approx(math.pi / 6, abs=1e-12)


def test_angles_deg5_example():
    z = inverse_zeros(L_of(*Q3_DEG5))
    assert not z.has_unit_zero and z.m_prime == 2
    cosines = sorted(math.cos(t) for t in z.angles)
    assert cosines == pytest.approx([-1 / math.sqrt(3), 1 / (2 * math.sqrt(3))], abs=1e-12)


def test_degree_one_and_two_have_no_angles():
    assert inverse_zeros(L_of(3, "T+2")).angles == ()
    z = inverse_zeros(L_of(3, "T^2+1"))
    assert z.angles == () and z.has_unit_zero


def test_real_inverse_zeros():
    # L = (1 - 5u^2)^2 has the real inverse zeros +-sqrt(5)
    L = L_of(5, "T^5+4T")
    assert L.coeffs == (1, 0, -10, 0, 25)
    z = inverse_zeros(L)
    assert z.has_real_zeros and z.real_zeros == 4
    assert sorted(set(z.angles)) == [0.0, math.pi]
    assert np.allclose(reconstruct(z), L.coeffs, atol=1e-6)
    assert gsh_diagnostic(z).verdict == "violated"


def test_rh_violation_is_an_integrity_error():
    bogus = LPolynomial(F3, parse_poly("T^3+2T+1", F3), (1, 1, 1))
    with pytest.raises(IntegrityError):
        inverse_zeros(bogus)
    with pytest.raises(IntegrityError):
        inverse_zeros(LPolynomial(F3, parse_poly("T^2+1", F3), (1, 1)))  # no zero at u = 1


@pytest.mark.parametrize("spec,max_deg", [(F3, 6), (F5, 4)], ids=str)
def test_rh_and_reconstruction_scan(spec, max_deg):
    for m in squarefree_moduli(spec, max_deg):
        L = l_polynomial(spec, m)
        z = inverse_zeros(L)
        assert z.rh_residual < 1e-9
        assert all(0 <= t <= math.pi for t in z.angles)
        assert list(z.angles) == sorted(z.angles)
        assert np.max(np.abs(reconstruct(z) - np.array(L.coeffs, dtype=float))) < 1e-6


@given(st.lists(st.integers(0, 2), min_size=5, max_size=7))
def test_reconstruction_property(cs):
    m = Poly(F3, cs + [1])
    if not is_squarefree(m):
        return
    L = l_polynomial(F3, m)
    z = inverse_zeros(L)
    assert np.allclose(reconstruct(z), L.coeffs, atol=1e-6)
    # every zero accounted for: conjugate pairs twice, real zeros once
    assert 2 * z.m_prime - z.real_zeros + z.has_unit_zero == L.degree


# -- GSH diagnostic ---------------------------------------------------------


def test_gsh_rational_multiple():
    diag = gsh_diagnostic(inverse_zeros(L_of(*Q3_CUBIC)))
    assert diag.verdict == "violated"
    assert diag.angles[0].verdict == "rational-multiple"
    assert diag.angles[0].fraction == (1, 6)
    assert "heuristic" in diag.describe()


def test_gsh_plausible_examples():
    for example in (Q5_CUBIC, Q3_DEG5):
        diag = gsh_diagnostic(inverse_zeros(L_of(*example)))
        assert diag.verdict == "plausible", diag.describe()
        assert diag.relations == ()
        assert all(a.verdict == "plausibly-irrational" for a in diag.angles)


def test_gsh_pairwise_relation_detected():
    # angles theta and pi - theta satisfy pi - t1 - t2 = 0
    z = inverse_zeros(L_of(*Q5_CUBIC))
    t = z.angles[0]
    pair = replace(z, angles=(math.pi - t, t), multiplicities=(1, 1))
    diag = gsh_diagnostic(pair)
    assert diag.verdict == "violated"
    c0, ci, cj, i, j = diag.relations[0]
    assert abs(c0 * math.pi + ci * pair.angles[i] + cj * pair.angles[j]) < 1e-9


# -- central value ----------------------------------------------------------


def test_central_value_examples():
    cv = central_l_value(L_of(*Q5_CUBIC))
    assert cv.horner == pytest.approx(2 + 3 / math.sqrt(5), rel=1e-14)
    assert cv.product == pytest.approx(cv.horner, rel=1e-12)
    assert central_l_value(L_of(3, "T")).horner == 1.0
    cv = central_l_value(L_of(*Q3_DEG5))
    assert abs(cv.horner - cv.product) < 1e-9


def test_central_value_vanishes_at_real_zero():
    cv = central_l_value(L_of(5, "T^5+4T"))
    assert abs(cv.horner) < 1e-12 and abs(cv.product) < 1e-12


def test_central_value_product_form_random():
    rng = random.Random(5)
    for _ in range(40):
        spec = rng.choice((F3, F5))
        m = Poly(spec, [rng.randrange(spec.q) for _ in range(rng.randint(1, 5))] + [1])
        if not is_squarefree(m):
            continue
        cv = central_l_value(l_polynomial(spec, m))
        assert abs(cv.horner - cv.product) < 1e-9
