"""Exact bias sequences b(n), B(n) for mu*chi_m and lambda*chi_m.

Generating functions (u = q**-s):

    sum b_mu(n) u^n     = 1 / L(u)
    sum b_lambda(n) u^n = prod_i (1 - u^(2 M_i)) / ((1 - q u^2) L(u))
    sum_{n>=1} B(n) u^n = (G(u) - 1) / (1 - u)

Everything here is exact integer arithmetic; floats only appear in the
Lemma-style trigonometric sum utility at the bottom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _batch
from .ffpoly import DomainError, FieldSpec, Poly, format_poly
from .lfunc import LPolynomial, _rat_divmod, _rat_gcd
from .multfunc import Factorization, check_modulus, factor
from .report import DensityReport

BRUTE_FORCE_LIMIT = 10**8


class ResourceGuardError(RuntimeError):
    """A requested computation exceeds the configured enumeration budget."""


# ---------------------------------------------------------------------------
# integer polynomials in u (ascending int tuples)


def _trim(c) -> tuple[int, ...]:
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def upoly_mul(a, b) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def upoly_sub(a, b) -> tuple[int, ...]:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _primitive_gcd(a, b) -> tuple[int, ...]:
    """gcd over Q of two integer polynomials, scaled to a primitive int poly with g(0) > 0."""
    g = _rat_gcd([Fraction(x) for x in a], [Fraction(x) for x in b])
    den = math.lcm(*(x.denominator for x in g))
    ints = [int(x * den) for x in g]
    content = math.gcd(*ints)
    ints = [x // content for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _exact_div(a, g) -> tuple[int, ...]:
    quot, rem = _rat_divmod([Fraction(x) for x in a], [Fraction(x) for x in g])
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    if any(x.denominator != 1 for x in quot):
        raise ArithmeticError("non-integral quotient")
    return _trim(int(x) for x in quot)


@dataclass(frozen=True)
class RationalGF:
    """numerator(u) / denominator(u) in lowest terms with denominator(0) = 1."""

    numerator: tuple[int, ...]
    denominator: tuple[int, ...]
    kind: str = field(default="", compare=False)
    cumulative: bool = field(default=False, compare=False)
    modulus: str = field(default="", compare=False)
    q: int = field(default=0, compare=False)

    def __post_init__(self):
        num, den = _trim(self.numerator), _trim(self.denominator)
        if not any(den):
            raise DomainError("zero denominator")
        if any(num) and len(den) > 1:
            g = _primitive_gcd(num, den)
            if len(g) > 1:
                num, den = _exact_div(num, g), _exact_div(den, g)
        if den[0] != 1:
            if den[0] == -1:
                num, den = tuple(-x for x in num), tuple(-x for x in den)
            else:
                raise DomainError(f"denominator constant term {den[0]} is not a unit")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    def _meta(self, **kw) -> dict:
        meta = dict(kind=self.kind, cumulative=self.cumulative, modulus=self.modulus, q=self.q)
        meta.update(kw)
        return meta


def gf_mu(L: LPolynomial) -> RationalGF:
    return RationalGF((1,), L.coeffs, kind="mu", modulus=format_poly(L.modulus), q=L.q)


def gf_lambda(L: LPolynomial, factorization: Factorization | None = None) -> RationalGF:
    fac = factorization or factor(L.modulus)
    if fac.expand(L.spec) != L.modulus:
        raise DomainError("factorization does not match the modulus")
    num: tuple[int, ...] = (1,)
    for g, _ in fac.factors:
        d = 2 * g.degree
        num = upoly_mul(num, (1,) + (0,) * (d - 1) + (-1,))
    den = upoly_mul((1, 0, -L.q), L.coeffs)
    return RationalGF(num, den, kind="lambda", modulus=format_poly(L.modulus), q=L.q)


def cumulative_gf(gf: RationalGF) -> RationalGF:
    """(G(u) - 1) / (1 - u): generating function of B(n) = sum_{1<=k<=n} b(k)."""
    if gf.cumulative:
        raise DomainError("generating function is already cumulative")
    num = upoly_sub(gf.numerator, gf.denominator)
    den = upoly_mul(gf.denominator, (1, -1))
    return RationalGF(num, den, **gf._meta(cumulative=True))


# ---------------------------------------------------------------------------
# series


@dataclass(frozen=True)
class BiasSeries:
    """b(0..N) and B(0..N) (B(0) = 0; b(0) is never part of a density count)."""

    b: tuple[int, ...]
    B: tuple[int, ...]
    kind: str = ""
    modulus: str = ""
    q: int = 0

    @property
    def N(self) -> int:
        return len(self.b) - 1

    @property
    def values(self) -> tuple[int, ...]:
        """b(1), ..., b(N)."""
        return self.b[1:]

    @property
    def cumulative(self) -> tuple[int, ...]:
        """B(1), ..., B(N)."""
        return self.B[1:]

    @classmethod
    def from_values(cls, b, **meta) -> BiasSeries:
        B = [0]
        for x in b[1:]:
            B.append(B[-1] + x)
        return cls(tuple(b), tuple(B), **meta)


def expand_coefficients(gf: RationalGF, N: int) -> list[int]:
    """Power-series coefficients c_0..c_N of gf by exact division."""
    if N < 0:
        raise DomainError("N must be >= 0")
    num, den = gf.numerator, gf.denominator
    L = len(den) - 1
    out: list[int] = []
    for n in range(N + 1):
        acc = num[n] if n < len(num) else 0
        for i in range(1, min(n, L) + 1):
            acc -= den[i] * out[n - i]
        out.append(acc)
    return out


def expand(gf: RationalGF, N: int) -> BiasSeries:
    """Series b(0..N) with running sums B from n = 1 (gf non-cumulative)."""
    if N < 1:
        raise DomainError("N must be >= 1")
    coeffs = expand_coefficients(gf, N)
    if gf.cumulative:
        # coefficients are already B(n); recover b by differencing
        B = [0] + coeffs[1:]
        b = [coeffs[0]] + [B[n] - B[n - 1] for n in range(1, N + 1)]
        return BiasSeries(tuple(b), tuple(B), kind=gf.kind, modulus=gf.modulus, q=gf.q)
    return BiasSeries.from_values(coeffs, kind=gf.kind, modulus=gf.modulus, q=gf.q)


# ---------------------------------------------------------------------------
# recurrences


@dataclass(frozen=True)
class Recurrence:
    """b(n) = sum_i coefficients[i-1] * b(n-i) for n >= valid_from."""

    coefficients: tuple[int, ...]
    valid_from: int
    initial: tuple[int, ...]  # b(0), ..., b(len-1), len >= max(valid_from, order)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coefficients, 1):
            if c:
                terms.append(f"{c:+d}*b[n-{i}]")
        return "b[n] = " + " ".join(terms) + f"  (n >= {self.valid_from})"


def recurrence_from(gf: RationalGF, window: int = 50) -> Recurrence:
    """Recurrence read off the denominator, checked against expand() on a window."""
    den = gf.denominator
    coeffs = tuple(-c for c in den[1:])
    n0 = len(gf.numerator)  # deg numerator + 1
    start = max(n0, len(coeffs))
    values = expand_coefficients(gf, start + window)
    rec = Recurrence(coeffs, n0, tuple(values[:start]))
    for n in range(n0, start + window + 1):
        pred = sum(c * (values[n - i] if n - i >= 0 else 0) for i, c in enumerate(coeffs, 1))
        if pred != values[n]:
            raise ArithmeticError(f"recurrence fails at n = {n}")
    return rec


def _mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def _mat_pow(A, e):
    n = len(A)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    while e:
        if e & 1:
            result = _mat_mul(result, A)
        A = _mat_mul(A, A)
        e >>= 1
    return result


def nth_term_fast(rec: Recurrence, n: int) -> int:
    """b(n) via companion-matrix exponentiation (O(log n) matrix products)."""
    if n < 0:
        raise DomainError("index must be >= 0")
    s = len(rec.initial)
    if n < s:
        return rec.initial[n]
    L = rec.order
    if L == 0:
        return 0
    # state (b(k), b(k-1), ..., b(k-L+1)) at k = s-1
    state = [[rec.initial[s - 1 - i] if s - 1 - i >= 0 else 0] for i in range(L)]
    comp = [list(rec.coefficients)] + [[int(j == i) for j in range(L)] for i in range(L - 1)]
    return _mat_mul(_mat_pow(comp, n - (s - 1)), state)[0][0]


# ---------------------------------------------------------------------------
# brute-force oracle


@dataclass(frozen=True)
class BruteForceCounts:
    """Per-degree counts a_+(n), a_-(n) and #{kind(f) chi_m(f) = 0} for n = 0..N.

    The zero count includes non-squarefree f for mu, so the three always sum to q^n.
    """

    a_plus: tuple[int, ...]
    a_minus: tuple[int, ...]
    zero_count: tuple[int, ...]
    kind: str
    modulus: str
    q: int

    @property
    def series(self) -> BiasSeries:
        b = [p - m for p, m in zip(self.a_plus, self.a_minus)]
        return BiasSeries.from_values(b, kind=self.kind, modulus=self.modulus, q=self.q)


@lru_cache(maxsize=4)
def _multiplicative_tables(spec: FieldSpec, N: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """lambda and mu on every monic polynomial of degree <= N, by sieving.

    Each table is indexed by :func:`_batch.encode` of the low coefficients.
    Every product P*G with P irreducible of degree <= n/2 flips lambda(G);
    anything not hit is irreducible.  P^2*H marks non-squarefree entries.
    """
    q = spec.q
    lam = [np.ones(1, dtype=np.int8)]
    mu = [np.ones(1, dtype=np.int8)]
    irreducible_rows: list[np.ndarray] = [np.zeros((0, 1), dtype=np.int64)]
    for n in range(1, N + 1):
        lam_n = np.full(q**n, -1, dtype=np.int8)
        composite = np.zeros(q**n, dtype=bool)
        squarefree = np.ones(q**n, dtype=bool)
        for d in range(1, n // 2 + 1):
            G = _batch.all_monic(spec, n - d)
            H = _batch.all_monic(spec, n - 2 * d)
            for P in irreducible_rows[d]:
                idx = _batch.encode(_batch.mul_rows(G, P, spec)[:, :n], q)
                lam_n[idx] = -lam[n - d]
                composite[idx] = True
                P2 = _batch.mul_rows(P[None, :], P, spec)
                idx2 = _batch.encode(_batch.mul_rows(H, P2, spec)[:, :n], q)
                squarefree[idx2] = False
        lam.append(lam_n)
        mu.append(np.where(squarefree, lam_n, 0).astype(np.int8))
        irreducible_rows.append(_batch.all_monic(spec, n)[~composite])
    return lam, mu


def brute_force(spec: FieldSpec, m: Poly, kind: str, N: int, limit: int = BRUTE_FORCE_LIMIT) -> BruteForceCounts:
    """Count a_+, a_-, and zeros of kind(f)*chi_m(f) over all monic f with deg f <= N."""
    if kind not in ("mu", "lambda"):
        raise ValueError(f"kind must be 'mu' or 'lambda', got {kind!r}")
    check_modulus(m)
    total = sum(spec.q**n for n in range(N + 1))
    if total > limit:
        raise ResourceGuardError(f"brute force over {total} polynomials exceeds the limit {limit}")
    lam, mu = _multiplicative_tables(spec, N)
    table = mu if kind == "mu" else lam
    primes = [P for P, _ in factor(m).factors]
    chi_table = _batch.residue_character_table(m, primes)
    a_plus, a_minus, zeros = [], [], []
    for n in range(N + 1):
        rows = _batch.all_monic(spec, n)
        residues = _batch.reduce_mod(rows, m)
        chi = chi_table[_batch.encode(residues, spec.q)]
        val = table[n].astype(np.int64) * chi
        a_plus.append(int((val == 1).sum()))
        a_minus.append(int((val == -1).sum()))
        zeros.append(int((val == 0).sum()))
    return BruteForceCounts(tuple(a_plus), tuple(a_minus), tuple(zeros), kind, format_poly(m), spec.q)


# ---------------------------------------------------------------------------
# empirical densities


def _sign_counts(xs) -> tuple[int, int, int]:
    pos = sum(1 for x in xs if x > 0)
    zero = sum(1 for x in xs if x == 0)
    return pos, zero, len(xs) - pos - zero


def empirical_densities(series: BiasSeries, n: int) -> tuple[DensityReport, DensityReport]:
    """Sign frequencies of b(k) and B(k) over 1 <= k <= n: (non-cumulative, cumulative)."""
    if n < 1 or series.N < n:
        raise DomainError(f"series of length {series.N} too short for horizon {n}")
    reports = []
    for cumulative, xs in ((False, series.b[1 : n + 1]), (True, series.B[1 : n + 1])):
        pos, zero, neg = _sign_counts(xs)
        reports.append(
            DensityReport.from_fractions(
                Fraction(pos, n),
                Fraction(zero, n),
                Fraction(neg, n),
                "empirical",
                kind=series.kind,
                cumulative=cumulative,
                modulus=series.modulus,
                q=series.q,
                notes=(f"horizon {n}",),
            )
        )
    return reports[0], reports[1]


def normalized(x: int, q: int, n: int) -> float:
    """x / q**(n/2) as a float without overflowing for huge x."""
    return float(Fraction(x, q ** (n // 2))) / (math.sqrt(q) if n % 2 else 1.0)


# ---------------------------------------------------------------------------
# geometric sine sums


def sin_power_sum(a: float, theta: float, omega: float, n: int) -> float:
    """Closed form of sum_{k=1}^n a^k sin(k theta + omega)."""
    num = (
        a * math.sin(theta + omega)
        - a**2 * math.sin(omega)
        - a ** (n + 1) * math.sin((n + 1) * theta + omega)
        + a ** (n + 2) * math.sin(n * theta + omega)
    )
    return num / (1 - 2 * a * math.cos(theta) + a * a)


def sin_power_sum_direct(a: float, theta: float, omega: float, n: int) -> float:
    return math.fsum(a**k * math.sin(k * theta + omega) for k in range(1, n + 1))


def sin_even_sum(theta: float, k: int) -> float:
    """sin 2t + sin 4t + ... + sin 2kt."""
    return (math.cos(theta) - math.cos((2 * k + 1) * theta)) / (2 * math.sin(theta))


def sin_odd_sum(theta: float, k: int) -> float:
    """sin t + sin 3t + ... + sin (2k+1)t."""
    return (1 - math.cos((2 * k + 2) * theta)) / (2 * math.sin(theta))
