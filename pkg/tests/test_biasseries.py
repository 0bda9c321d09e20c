import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import Q3_CUBIC, Q3_DEG5, Q5_CUBIC, modulus
from ffbias.biasseries import (
    BiasSeries,
    RationalGF,
    Recurrence,
    ResourceGuardError,
    brute_force,
    cumulative_gf,
    empirical_densities,
    expand,
    expand_coefficients,
    gf_lambda,
    gf_mu,
    normalized,
    nth_term_fast,
    recurrence_from,
    sin_even_sum,
    sin_odd_sum,
    sin_power_sum,
    sin_power_sum_direct,
    upoly_mul,
)
from ffbias.ffpoly import DomainError, FieldSpec, Poly
from ffbias.lfunc import l_polynomial
from ffbias.multfunc import factor, is_squarefree

F3 = FieldSpec(3)


def L_of(q, text):
    spec, m = modulus(q, text)
    return l_polynomial(spec, m)


def series(q, text, kind, N):
    L = L_of(q, text)
    gf = gf_mu(L) if kind == "mu" else gf_lambda(L)
    return expand(gf, N)


# -- generating functions ---------------------------------------------------


@pytest.mark.parametrize("q", [3, 5])
def test_degree_one(q):
    assert series(q, "T", "mu", 20).values == (0,) * 20
    b = series(q, "T", "lambda", 20).b
    for n in range(1, 21):
        assert b[n] == (0 if n % 2 else (q - 1) * q ** (n // 2 - 1))


@pytest.mark.parametrize("q,text", [(3, "T^2+1"), (5, "T^2+2"), (5, "T(T+1)")])
def test_degree_two_mu(q, text):
    assert series(q, text, "mu", 20).values == (1,) * 20


@pytest.mark.parametrize("q,text", [(3, "T^2+1"), (5, "T^2+2")])
def test_degree_two_lambda_irreducible(q, text):
    # the numerator is 1 - u^4 only when m is irreducible
    b = series(q, text, "lambda", 20).b
    assert b[1] == 1
    for n in range(2, 21):
        assert b[n] == (q + 1) * q ** (n // 2 - 1)


def test_degree_two_lambda_split():
    # m = T(T+1) has numerator (1 - u^2)^2; no closed form here, brute force is the oracle
    spec, m = modulus(5, "T(T+1)")
    assert brute_force(spec, m, "lambda", 8).series.b == series(5, "T(T+1)", "lambda", 8).b


def test_q5_cubic_first_terms():
    assert series(*Q5_CUBIC, "lambda", 6).b[1:] == (-3, 9, -12, 16, 12, 8)


def test_deg5_first_terms():
    assert series(*Q3_DEG5, "lambda", 6).b == (1, -1, 0, 1, 1, 4, 12)


def test_gsh_violating_mu_closed_form():
    b = series(*Q3_CUBIC, "mu", 60).b
    for n in range(61):
        expected = 2 * 3 ** (n / 2) * math.sin((n + 1) * math.pi / 6)
        assert abs(b[n] - expected) <= 1e-12 * 3 ** (n / 2)


# b(12a + k) / 3^(6a) for the q=3 cubic, k = 0..11
MU_CYCLE = (1, 3, 6, 9, 9, 0, -27, -81, -162, -243, -243, 0)
# c(12a + k) / 3^(6a) where the lambda series is c(n) - c(n-6)
C_CYCLE = (1, 3, 9, 18, 36, 54, 81, 81, 81, 0, 0, 0)


def test_gsh_violating_mu_cycle():
    b = series(*Q3_CUBIC, "mu", 12 * 6).b
    for n in range(len(b)):
        a, k = divmod(n, 12)
        assert b[n] == MU_CYCLE[k] * 3 ** (6 * a)
        if k == 6:
            assert b[n] == -(3 ** (6 * a + 3))


def test_gsh_violating_lambda_from_c_cycle():
    def c(n):
        if n < 0:
            return 0
        a, k = divmod(n, 12)
        return C_CYCLE[k] * 3 ** (6 * a)

    b = series(*Q3_CUBIC, "lambda", 12 * 6).b
    assert all(b[n] == c(n) - c(n - 6) for n in range(len(b)))
    signs = [(b[n] > 0) - (b[n] < 0) for n in range(12, 24)]
    assert signs == [1] * 9 + [-1] * 3


def test_rational_gf_normalization():
    gf = RationalGF((1, -1), (1, -2, 1))  # (1-u)/(1-u)^2
    assert gf.numerator == (1,) and gf.denominator == (1, -1)
    neg = RationalGF((2,), (-1, 3))
    assert neg.numerator == (-2,) and neg.denominator == (1, -3)
    with pytest.raises(DomainError):
        RationalGF((1,), (0,))
    with pytest.raises(DomainError):
        RationalGF((1,), (2, 1))


def test_lambda_gcd_cancellation():
    # for the q=5 cubic (1-u^6) and (1-5u^2)(1+3u+5u^2) share no factor
    gf = gf_lambda(L_of(*Q5_CUBIC))
    assert gf.numerator == (1, 0, 0, 0, 0, 0, -1)
    assert gf.denominator == (1, 3, 0, -15, -25)


def test_gf_lambda_rejects_wrong_factorization():
    spec, m = modulus(*Q5_CUBIC)
    _, other = modulus(5, "T^3+2")
    with pytest.raises(DomainError):
        gf_lambda(l_polynomial(spec, m), factor(other))


def _truncated_product(a, b, N):
    return tuple(upoly_mul(a, b)[: N + 1])


@pytest.mark.parametrize("example", [Q5_CUBIC, Q3_CUBIC, Q3_DEG5, (3, "T(T+1)(T+2)(T^2+1)")])
def test_series_times_denominator_is_numerator(example):
    # checks against the unreduced products, independent of gcd reduction
    N = 60
    L = L_of(*example)
    mu = expand_coefficients(gf_mu(L), N)
    assert _truncated_product(mu, L.coeffs, N) == (1,) + (0,) * N
    lam = expand_coefficients(gf_lambda(L), N)
    num = (1,)
    for g, _ in factor(L.modulus).factors:
        num = upoly_mul(num, (1,) + (0,) * (2 * g.degree - 1) + (-1,))
    lhs = _truncated_product(lam, upoly_mul((1, 0, -L.q), L.coeffs), N)
    assert lhs == tuple(num) + (0,) * (N + 1 - len(num))


def test_cumulative_is_running_sum():
    for example in (Q5_CUBIC, Q3_CUBIC, Q3_DEG5):
        for gf in (gf_mu(L_of(*example)), gf_lambda(L_of(*example))):
            s = expand(gf, 80)
            c = expand(cumulative_gf(gf), 80)
            assert c.B == s.B
            assert c.b[1:] == s.b[1:]
            with pytest.raises(DomainError):
                cumulative_gf(cumulative_gf(gf))


def test_cumulative_positivity_examples():
    B = expand(cumulative_gf(gf_lambda(L_of(3, "T"))), 200).B
    assert all(x > 0 for x in B[2:])
    B = expand(cumulative_gf(gf_lambda(L_of(*Q3_CUBIC))), 200).B
    assert all(x > 0 for x in B[1:])


@given(st.lists(st.integers(0, 2), min_size=1, max_size=6))
def test_growth_bound_and_running_sums(cs):
    m = Poly(F3, cs + [1])
    if not is_squarefree(m):
        return
    L = l_polynomial(F3, m)
    for gf in (gf_mu(L), gf_lambda(L)):
        s = expand(gf, 40)
        assert all(abs(s.b[n]) <= 3**n for n in range(41))
        assert s == BiasSeries.from_values(s.b, kind=s.kind, modulus=s.modulus, q=s.q)


def test_expand_rejects_short_horizon():
    with pytest.raises(DomainError):
        expand(gf_mu(L_of(*Q5_CUBIC)), 0)


# -- recurrences ------------------------------------------------------------


def test_recurrence_q5():
    rec = recurrence_from(gf_lambda(L_of(*Q5_CUBIC)))
    assert rec.coefficients == (-3, 0, 15, 25)
    assert rec.valid_from == 7


def test_recurrence_deg5_over_100_terms():
    gf = gf_lambda(L_of(*Q3_DEG5))
    rec = recurrence_from(gf, window=100)
    assert rec.coefficients == (-1, -1, 0, 3, 9, 27)
    b = expand(gf, 200).b
    for n in range(rec.valid_from, rec.valid_from + 100):
        assert b[n] == -b[n - 1] - b[n - 2] + 3 * b[n - 4] + 9 * b[n - 5] + 27 * b[n - 6]


def test_recurrence_degree_one():
    rec = recurrence_from(gf_lambda(L_of(5, "T+1")))
    assert rec.coefficients == (0, 5)
    assert nth_term_fast(rec, 2 * 30) == 4 * 5**29


def test_nth_term_fast_fibonacci():
    rec = Recurrence((1, 1), 2, (0, 1))
    assert [nth_term_fast(rec, n) for n in range(10)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]
    with pytest.raises(DomainError):
        nth_term_fast(rec, -1)


@pytest.mark.parametrize("example", [Q5_CUBIC, Q3_DEG5])
def test_nth_term_fast_matches_expansion(example):
    gf = gf_lambda(L_of(*example))
    rec = recurrence_from(gf)
    rng = random.Random(99)
    idx = sorted(rng.randint(1, 10**5) for _ in range(20))
    coeffs = expand_coefficients(gf, idx[-1])
    for n in idx:
        assert nth_term_fast(rec, n) == coeffs[n]
    for n in range(rec.valid_from):
        assert nth_term_fast(rec, n) == coeffs[n]


# -- brute-force oracle -----------------------------------------------------


ORACLE_MODULI = [
    (3, "T", 12),
    (3, "T^2+1", 12),
    (3, "T^3-T+1", 12),
    (3, "(T^2+1)(T^3+2T+1)", 12),
    (3, "T(T+1)(T^2+1)", 12),
    (5, "T^3+T+4", 8),
    (5, "T^2+2", 8),
    (5, "T(T+1)(T+2)(T+3)", 8),
]


@pytest.mark.parametrize("q,text,N", ORACLE_MODULI)
@pytest.mark.parametrize("kind", ["mu", "lambda"])
def test_expand_equals_brute_force(q, text, N, kind):
    spec, m = modulus(q, text)
    counts = brute_force(spec, m, kind, N)
    for n in range(N + 1):
        assert counts.a_plus[n] + counts.a_minus[n] + counts.zero_count[n] == q**n
    assert counts.series.b == series(q, text, kind, N).b


def test_brute_force_guard():
    spec, m = modulus(*Q5_CUBIC)
    with pytest.raises(ResourceGuardError):
        brute_force(spec, m, "lambda", 12, limit=10**6)
    with pytest.raises(ValueError):
        brute_force(spec, m, "liouville", 3)


# -- empirical densities ----------------------------------------------------


def test_empirical_densities_table_rows():
    s = series(*Q5_CUBIC, "lambda", 10)
    nc, cum = empirical_densities(s, 10)
    assert (nc.delta_plus, cum.delta_plus) == (0.6, 0.6)
    assert nc.total == pytest.approx(1)
    with pytest.raises(DomainError):
        empirical_densities(s, 11)


def test_empirical_densities_exact_counts():
    s = BiasSeries.from_values((1, 2, -1, 0, 3))
    nc, cum = empirical_densities(s, 4)
    assert (nc.delta_plus, nc.delta_zero, nc.delta_minus) == (0.5, 0.25, 0.25)
    assert cum.delta_plus == 1.0  # B = 2, 1, 1, 4


def test_normalized_handles_huge_values():
    assert normalized(3**1001, 3, 2000) == pytest.approx(3.0)
    assert normalized(-(5**10), 5, 21) == pytest.approx(-1 / math.sqrt(5))


# -- sine sums --------------------------------------------------------------


def test_sin_power_sum_closed_form_random():
    rng = random.Random(17)
    for _ in range(100):
        a = rng.uniform(0.05, 0.95)
        theta, omega = rng.uniform(0.01, math.pi - 0.01), rng.uniform(-math.pi, math.pi)
        n = rng.randint(1, 200)
        assert abs(sin_power_sum(a, theta, omega, n) - sin_power_sum_direct(a, theta, omega, n)) < 1e-10


def test_sin_parity_sums():
    rng = random.Random(18)
    for _ in range(100):
        t, k = rng.uniform(0.01, math.pi - 0.01), rng.randint(1, 50)
        even = math.fsum(math.sin(2 * j * t) for j in range(1, k + 1))
        odd = math.fsum(math.sin((2 * j + 1) * t) for j in range(k + 1))
        assert abs(sin_even_sum(t, k) - even) < 1e-10
        assert abs(sin_odd_sum(t, k) - odd) < 1e-10


@pytest.mark.parametrize("example", [Q5_CUBIC, Q3_CUBIC, Q3_DEG5, (3, "T^7+2T+1"), (5, "T(T+1)(T+2)(T+3)")])
def test_lambda_growth_bound(example):
    L = L_of(*example)
    m_prime = L.m_prime
    b = expand(gf_lambda(L), 400).b
    for n in range(2 * L.M, 401):
        assert abs(b[n]) <= 10 * (m_prime + 2) * L.q ** (n / 2)
