"""Limiting sign densities of the bias sequences.

The oscillatory model is obtained by partial fractions of the exact
generating function.  Writing r_j = q**-1/2 exp(-i theta_j) for the poles coming
from the L-polynomial,

    b(n) = q**(n/2) * (alpha_{n mod 2} + sum_j beta_j sin(n theta_j + omega_j)) + tail(n)

for every n past the polynomial part, where alpha_even/alpha_odd come from
the poles +-q**-1/2 of 1/(1 - q u^2) and tail(n) is the (polynomial in n)
contribution of a pole at u = 1.  Under GSH, Kronecker-Weyl turns the
sign frequencies into Haar measures of regions of the torus.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .biasseries import BiasSeries, RationalGF, _exact_div, cumulative_gf, expand, gf_lambda, gf_mu, normalized
from .ffpoly import DomainError
from .lfunc import GSHDiagnostic, IntegrityError, InverseZeroData, LPolynomial, gsh_diagnostic, inverse_zeros
from .multfunc import Factorization
from .report import DensityReport

log = logging.getLogger(__name__)

QUAD_NODES = 1 << 16
QMC_POINTS = 10_000_019
QMC_SHIFTS = 8
QMC_SEED = 12345
QMC_CHUNK = 1 << 20
ALPHA_ZERO_TOL = 1e-9


class GSHViolation(ValueError):
    """The angle data fails GSH; use :func:`periodic_density` instead."""


# ---------------------------------------------------------------------------
# generic Laurent coefficients at a pole


def _taylor_at(coeffs, r, order):
    """Coefficients of P(r (1 - v)) in v up to v**order (Fraction or complex r)."""
    out = [0] * (order + 1)
    # Horner in the polynomial ring truncated at v**order
    for c in reversed(coeffs):
        # out = out * r * (1 - v) + c
        new = [0] * (order + 1)
        for i, x in enumerate(out):
            if x:
                new[i] += x * r
                if i + 1 <= order:
                    new[i + 1] -= x * r
        new[0] += c
        out = new
    return out


def _series_div(a, b, order):
    out = []
    for n in range(order + 1):
        acc = a[n]
        for i in range(1, n + 1):
            acc -= b[i] * out[n - i]
        out.append(acc / b[0])
    return out


def _deflate(den, r, k):
    """den(u) / (1 - u/r)**k, dropping the (numerically ~0) remainder."""
    out = list(den)
    for _ in range(k):
        quo = []
        prev = 0
        for c in out[:-1]:
            prev = c + prev / r
            quo.append(prev)
        out = quo
    return out


def laurent_coefficients(num, den, r, k):
    """c_1..c_k with num/den = sum_j c_j / (1 - u/r)**j + (analytic at r)."""
    Q = _deflate(den, r, k)
    a = _taylor_at(num, r, k - 1)
    b = _taylor_at(Q, r, k - 1)
    h = _series_div(a, b, k - 1)
    # num/den = h(v) / v**k, v = 1 - u/r
    return [h[k - j] for j in range(1, k + 1)]


def _multiplicity_at_one(den) -> int:
    k = 0
    d = tuple(den)
    while len(d) > 1 and sum(d) == 0:
        d = _exact_div(d, (1, -1))
        k += 1
    return k


def _multiplicity_of(den, factor_) -> int:
    k = 0
    d = tuple(den)
    while len(d) >= len(factor_):
        try:
            d = _exact_div(d, factor_)
        except ArithmeticError:
            break
        k += 1
    return k


# ---------------------------------------------------------------------------
# model


@dataclass(frozen=True)
class OscillatoryModel:
    alpha_even: float
    alpha_odd: float
    terms: tuple[tuple[float, float, float], ...]  # (theta_j, beta_j, omega_j)
    constant_C: float  # tail(n) = constant_C + tail_slope * n (+ higher terms, rare)
    tail_slope: float
    valid_from: int
    exact_from: int
    kind: str
    cumulative: bool
    q: int
    M: int
    degenerate: bool = False
    gsh_verdict: str = ""
    modulus: str = ""
    tail: tuple[float, ...] = field(default=(), repr=False)  # Laurent coeffs at u = 1
    growth_terms: tuple[tuple[complex, int, complex], ...] = field(default=(), repr=False)

    @property
    def m_prime(self) -> int:
        return len(self.terms)

    @property
    def betas(self) -> tuple[float, ...]:
        return tuple(t[1] for t in self.terms)

    def alpha(self, n: int) -> float:
        return self.alpha_even if n % 2 == 0 else self.alpha_odd

    def main_part(self, n: int) -> float:
        """alpha_n + sum beta_j sin(n theta_j + omega_j)."""
        return self.alpha(n) + math.fsum(b * math.sin(n * t + w) for t, b, w in self.terms)

    def tail_value(self, n: int) -> float:
        return math.fsum(c * comb(n + j, j) for j, c in enumerate(self.tail))

    def normalized(self, n: int) -> float:
        """Model for q**(-n/2) b(n), tail included (exact for n >= exact_from)."""
        val = self.main_part(n) + self.tail_value(n) * self.q ** (-n / 2)
        for r, j, c in self.growth_terms:
            val += (2 * c * comb(n + j - 1, j - 1) * (r * math.sqrt(self.q)) ** (-n)).real
        return val


def oscillatory_model(
    gf: RationalGF,
    zeros: InverseZeroData,
    diagnostic: GSHDiagnostic | None = None,
) -> OscillatoryModel:
    """Residue extraction at every pole of the (reduced) generating function."""
    q, M = zeros.q, zeros.M
    if zeros.has_real_zeros:
        # 1 - q u^2 divides the L-polynomial: the +-q^-1/2 poles are no longer simple
        log.warning("real inverse zeros for %s: no oscillatory model", gf.modulus)
        raise GSHViolation("real inverse zeros +-sqrt(q); use periodic_density on the exact series")
    num, den = gf.numerator, gf.denominator
    sqrt_q = math.sqrt(q)

    k_one = _multiplicity_at_one(den)
    k_sq = _multiplicity_of(den, (1, 0, -q))
    if k_sq > 1:
        raise IntegrityError("pole at +-q^-1/2 is not simple")
    deg_angle_part = len(den) - 1 - k_one - 2 * k_sq
    if deg_angle_part != 2 * zeros.m_prime:
        raise IntegrityError(
            f"denominator degree {len(den) - 1} inconsistent with {zeros.m_prime} angle pairs"
        )
    deg_poly_part = len(num) - len(den)
    exact_from = max(deg_poly_part + 1, 0)

    dden = [i * c for i, c in enumerate(den)][1:]

    def simple_coeff(r):
        nv = sum(c * r**i for i, c in enumerate(num))
        dv = sum(c * r**i for i, c in enumerate(dden))
        return -nv / (r * dv)

    if k_sq:
        c_plus = simple_coeff(1 / sqrt_q)
        c_minus = simple_coeff(-1 / sqrt_q)
    else:
        c_plus = c_minus = 0.0
    alpha_even = c_plus + c_minus
    alpha_odd = c_plus - c_minus

    terms = []
    growth = []
    degenerate = False
    seen = set()
    for theta, mult in zip(zeros.angles, zeros.multiplicities):
        if theta in seen:
            continue
        seen.add(theta)
        r = complex(math.cos(theta), -math.sin(theta)) / sqrt_q
        if mult == 1:
            c = simple_coeff(r)
            terms.append((theta, 2 * abs(c), (math.atan2(c.imag, c.real) + math.pi / 2) % (2 * math.pi)))
        else:
            degenerate = True
            cs = laurent_coefficients([complex(x) for x in num], [complex(x) for x in den], r, mult)
            c = cs[0]
            terms.append((theta, 2 * abs(c), (math.atan2(c.imag, c.real) + math.pi / 2) % (2 * math.pi)))
            growth.extend((r, j, cj) for j, cj in enumerate(cs[1:], 2))
        if theta in (0.0, math.pi):
            degenerate = True

    tail: list[float] = []
    if k_one:
        cs = laurent_coefficients([Fraction(x) for x in num], [Fraction(x) for x in den], Fraction(1), k_one)
        # sum_j c_j binom(n+j-1, j-1)  ->  coefficients in the comb(n+i, i) basis
        tail = [float(c) for c in cs]
    const_C = tail[0] if tail else 0.0
    slope = 0.0
    if len(tail) >= 2:
        # c_1 + c_2 (n + 1): constant c_1 + c_2, slope c_2
        const_C = tail[0] + tail[1]
        slope = tail[1]
    if len(tail) > 2:
        degenerate = True
    if degenerate:
        log.warning("non-simple or real pole for %s: model is degenerate, densities need periodic_density", gf.modulus)

    return OscillatoryModel(
        alpha_even=float(alpha_even),
        alpha_odd=float(alpha_odd),
        terms=tuple(terms),
        constant_C=const_C,
        tail_slope=slope,
        valid_from=2 * M,
        exact_from=exact_from,
        kind=gf.kind,
        cumulative=gf.cumulative,
        q=q,
        M=M,
        degenerate=degenerate,
        gsh_verdict=diagnostic.verdict if diagnostic else "",
        modulus=gf.modulus,
        tail=tuple(tail),
        growth_terms=tuple(growth),
    )


def model_deviation(model: OscillatoryModel, series: BiasSeries, n_lo: int, n_hi: int, full: bool = True) -> float:
    """max |q^(-n/2) x(n) - model| over n_lo <= n <= n_hi, x = b or B per model kind."""
    xs = series.B if model.cumulative else series.b
    worst = 0.0
    for n in range(n_lo, n_hi + 1):
        pred = model.normalized(n) if full else model.main_part(n)
        worst = max(worst, abs(normalized(xs[n], model.q, n) - pred))
    return worst


# ---------------------------------------------------------------------------
# closed-form constants


@dataclass(frozen=True)
class SymmetricConstants:
    C_m: float
    e_even: float
    e_odd: float
    cosines: tuple[float, ...]
    q: int
    M: int

    def alpha_closed_form(self, cumulative: bool) -> tuple[float, float]:
        """(alpha_even, alpha_odd) as predicted by the symmetric-function formulas."""
        q, C, ee, eo = self.q, self.C_m, self.e_even, self.e_odd
        s = math.sqrt(q)
        # each cumulation (sum over k, or the extra 1/(1 - q^-1/2 u) for even M) applies
        # (x_e, x_o) -> ((q x_e + s x_o)/(q-1), (s x_e + q x_o)/(q-1))
        steps = (self.M % 2 == 0) + bool(cumulative)
        xe, xo = C * ee, C * eo
        for _ in range(steps):
            xe, xo = (q * xe + s * xo) / (q - 1), (s * xe + q * xo) / (q - 1)
        return xe, xo


def elementary_symmetric(xs) -> list[float]:
    """e_0, ..., e_n of the given numbers."""
    e = [1.0]
    for x in xs:
        e = [a + x * b for a, b in zip(e + [0.0], [0.0] + e)]
    return e


def symmetric_constants(zeros: InverseZeroData, factorization: Factorization) -> SymmetricConstants:
    if zeros.has_real_zeros:
        raise DomainError("C_m is undefined with real inverse zeros (sin theta = 0)")
    q = zeros.q
    cos = tuple(math.cos(t) for t in zeros.angles)
    e = elementary_symmetric(cos)
    e_even = math.fsum(e[0::2])
    e_odd = math.fsum(e[1::2])
    num = math.prod(1 - q ** (-g.degree) for g, _ in factorization.factors)
    den = 2 ** len(cos) * math.prod(math.sin(t) ** 2 for t in zeros.angles)
    return SymmetricConstants(num / den, e_even, e_odd, cos, q, zeros.M)


def gap_identity(constants: SymmetricConstants, L: LPolynomial, factorization: Factorization) -> tuple[float, float]:
    """Both sides of C_m (e_even + e_odd) L(q^-1/2) = prod(1 - q^-M_i) (1 - q^-1/2)^[M even]."""
    q = constants.q
    lhs = constants.C_m * (constants.e_even + constants.e_odd) * L(q**-0.5)
    rhs = math.prod(1 - q ** (-g.degree) for g, _ in factorization.factors)
    if L.M % 2 == 0:
        rhs *= 1 - q**-0.5
    return lhs, rhs


# ---------------------------------------------------------------------------
# torus measures


@dataclass(frozen=True)
class TorusRegion:
    """{ y : upper > sum_j beta_j sin(y_j) > -lower } on the normalized torus."""

    upper: float
    lower: float
    betas: tuple[float, ...]


def arcsin_ext(x):
    """arcsin extended by +-pi/2 outside [-1, 1]."""
    return np.arcsin(np.clip(x, -1.0, 1.0))


def _sine_cdf(x, beta):
    # P(beta sin y < x), y uniform
    if beta == 0:
        return np.where(np.asarray(x) > 0, 1.0, 0.0)
    return 0.5 + arcsin_ext(np.asarray(x) / beta) / math.pi


def _quadrature_2d(region: TorusRegion, nodes: int) -> float:
    b1, b2 = region.betas
    y = 2 * math.pi * np.arange(nodes) / nodes
    s = b1 * np.sin(y)
    section = _sine_cdf(region.upper - s, b2) - _sine_cdf(-region.lower - s, b2)
    return float(section.mean())


def _lattice_vector(d: int, n: int) -> np.ndarray:
    # rank-1 lattice generator from the d-dimensional golden ratio (R_d sequence)
    phi = 2.0
    for _ in range(64):
        phi = (1 + phi) ** (1 / (d + 1))
    alpha = np.array([phi ** -(j + 1) for j in range(d)])
    return np.round(alpha * n).astype(np.int64) % n


def qmc_measure(region: TorusRegion, points: int = QMC_POINTS, shifts: int = QMC_SHIFTS, seed: int = QMC_SEED):
    """Randomly shifted rank-1 lattice estimate; returns (mean, standard error)."""
    betas = np.array(region.betas)
    d = len(betas)
    z = _lattice_vector(d, points)
    estimates = []
    for child in np.random.SeedSequence(seed).spawn(shifts):
        shift = np.random.default_rng(child).random(d)
        hits = 0
        for start in range(0, points, QMC_CHUNK):
            k = np.arange(start, min(start + QMC_CHUNK, points), dtype=np.int64)
            x = ((k[:, None] * z[None, :]) % points) / points + shift
            g = np.sin(2 * math.pi * x) @ betas
            hits += int(np.count_nonzero((g < region.upper) & (g > -region.lower)))
        estimates.append(hits / points)
    est = np.array(estimates)
    return float(est.mean()), float(est.std(ddof=1) / math.sqrt(shifts))


def torus_measure(region: TorusRegion, nodes: int = QUAD_NODES, qmc_points: int = QMC_POINTS) -> tuple[float, float, str]:
    """Haar measure of the region; returns (measure, error_bound, method)."""
    d = len(region.betas)
    if d == 0:
        return float(-region.lower < 0 < region.upper), 0.0, "model-closed-form"
    if region.upper <= -region.lower:
        return 0.0, 0.0, "model-closed-form"  # empty band
    if d == 1:
        (b,) = region.betas
        val = float(_sine_cdf(region.upper, b) - _sine_cdf(-region.lower, b))
        return val, 1e-15, "model-closed-form"
    if d == 2:
        fine = _quadrature_2d(region, nodes)
        coarse = _quadrature_2d(region, nodes // 2)
        return fine, max(abs(fine - coarse), 1e-12), "model-quadrature"
    mean, se = qmc_measure(region, qmc_points)
    return mean, 3 * se, "model-qmc"


# ---------------------------------------------------------------------------
# densities


def _check_gsh(model: OscillatoryModel, verdict: str | None):
    v = verdict if verdict is not None else model.gsh_verdict
    if v == "violated" or model.degenerate:
        raise GSHViolation(f"GSH verdict {v or 'degenerate'}; use periodic_density on the exact series")
    return v


def _eventual_sign(model: OscillatoryModel, parity: int) -> int:
    # M' = 0: the sign is fixed by alpha, else by the tail polynomial in n
    a = model.alpha(parity)
    if abs(a) > ALPHA_ZERO_TOL:
        return 1 if a > 0 else -1
    if abs(model.tail_slope) > ALPHA_ZERO_TOL:
        return 1 if model.tail_slope > 0 else -1
    if abs(model.constant_C) > ALPHA_ZERO_TOL:
        return 1 if model.constant_C > 0 else -1
    return 0


def _degenerate_report(model: OscillatoryModel, verdict: str, source: str) -> DensityReport:
    counts = {1: Fraction(0), 0: Fraction(0), -1: Fraction(0)}
    for parity in (0, 1):
        counts[_eventual_sign(model, parity)] += Fraction(1, 2)
    return DensityReport.from_fractions(
        counts[1], counts[0], counts[-1], source,
        kind=model.kind, cumulative=model.cumulative, modulus=model.modulus,
        q=model.q, gsh_verdict=verdict, notes=("no oscillating terms (M' = 0)",),
    )


def density_lambda(
    model: OscillatoryModel,
    constants: SymmetricConstants | None = None,
    verdict: str | None = None,
    nodes: int = QUAD_NODES,
    qmc_points: int = QMC_POINTS,
) -> DensityReport:
    """delta_+ = 1/2 + 1/2 * measure{alpha_even > g(y) > -alpha_odd}."""
    if model.kind != "lambda":
        raise ValueError("density_lambda needs a lambda model")
    v = _check_gsh(model, verdict)
    if constants is not None:
        ce, co = constants.alpha_closed_form(model.cumulative)
        if not (math.isclose(ce, model.alpha_even, rel_tol=1e-9, abs_tol=1e-12)
                and math.isclose(co, model.alpha_odd, rel_tol=1e-9, abs_tol=1e-12)):
            raise IntegrityError(
                f"residue alphas ({model.alpha_even}, {model.alpha_odd}) differ from closed form ({ce}, {co})"
            )
    if model.m_prime == 0:
        return _degenerate_report(model, v, "model-closed-form")
    region = TorusRegion(model.alpha_even, model.alpha_odd, model.betas)
    measure, err, method = torus_measure(region, nodes, qmc_points)
    plus = 0.5 + 0.5 * measure
    if v == "plausible" and not plus > 0.5:
        raise IntegrityError(f"lambda density {plus} not above 1/2 under GSH")
    return DensityReport(
        plus, 0.0, 1 - plus, method, error_bound=0.5 * err,
        kind="lambda", cumulative=model.cumulative, modulus=model.modulus,
        q=model.q, gsh_verdict=v,
    )


def density_mu(model: OscillatoryModel, verdict: str | None = None) -> DensityReport:
    """No bias for mu under GSH: (1/2, 0, 1/2), with a check of the vanishing constant term."""
    if model.kind != "mu":
        raise ValueError("density_mu needs a mu model")
    v = _check_gsh(model, verdict)
    if abs(model.alpha_even) > ALPHA_ZERO_TOL or abs(model.alpha_odd) > ALPHA_ZERO_TOL:
        raise IntegrityError(f"mu model has a constant term ({model.alpha_even}, {model.alpha_odd})")
    if model.m_prime == 0:
        return _degenerate_report(model, v, "theorem-mu")
    half = Fraction(1, 2)
    return DensityReport.from_fractions(
        half, Fraction(0), half, "theorem-mu",
        kind="mu", cumulative=model.cumulative, modulus=model.modulus, q=model.q, gsh_verdict=v,
    )


# ---------------------------------------------------------------------------
# GSH-violating case: exact periodic sign patterns


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def minimal_period(signs, max_period: int, min_repeats: int = 3) -> int | None:
    n = len(signs)
    for P in range(1, max_period + 1):
        if n < min_repeats * P:
            break
        if all(signs[i] == signs[i + P] for i in range(n - P)):
            return P
    return None


def periodic_density(
    series: BiasSeries, window: int = 120, start: int = 1, verdict: str = "violated"
) -> tuple[DensityReport, DensityReport]:
    """Exact densities from the minimal period of sign(b(n)) and sign(B(n)), n >= start.

    Falls back to empirical frequencies (with a logged warning) when no period
    <= window repeats over the whole available range.
    """
    if series.N - start + 1 < 3:
        raise ValueError("series too short for period detection")
    out = []
    for cumulative, xs in ((False, series.b), (True, series.B)):
        signs = [_sign(x) for x in xs[start:]]
        P = minimal_period(signs, window)
        meta = dict(kind=series.kind, cumulative=cumulative, modulus=series.modulus, q=series.q, gsh_verdict=verdict)
        if P is None:
            log.warning("no stable sign period <= %d for %s; reporting empirical densities", window, series.modulus)
            n = len(signs)
            out.append(
                DensityReport.from_fractions(
                    Fraction(signs.count(1), n), Fraction(signs.count(0), n), Fraction(signs.count(-1), n),
                    "empirical", notes=("no stable period found",), **meta,
                )
            )
            continue
        block = signs[:P]
        out.append(
            DensityReport.from_fractions(
                Fraction(block.count(1), P), Fraction(block.count(0), P), Fraction(block.count(-1), P),
                "periodic-exact", notes=(f"period {P}", "heuristic-exact: period read off a finite window"), **meta,
            )
        )
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Kronecker-Weyl sanity check


@dataclass(frozen=True)
class KWCheck:
    empirical: float
    analytic: float

    @property
    def error(self) -> float:
        return abs(self.empirical - self.analytic)


def kw_density_check(theta: float, omega: float, c: float, N: int) -> KWCheck:
    """(1/N) #{n <= N : sin(n theta + omega) > c} against 1/2 - arcsin(c)/pi."""
    hits = 0
    for start in range(1, N + 1, QMC_CHUNK):
        n = np.arange(start, min(start + QMC_CHUNK, N + 1), dtype=np.float64)
        hits += int(np.count_nonzero(np.sin(n * theta + omega) > c))
    return KWCheck(hits / N, 0.5 - float(arcsin_ext(c)) / math.pi)


# ---------------------------------------------------------------------------
# one-call front end


def model_densities(
    L: LPolynomial,
    factorization: Factorization,
    kind: str = "lambda",
    window: int = 120,
    qmc_points: int = QMC_POINTS,
) -> tuple[DensityReport, DensityReport]:
    """(non-cumulative, cumulative) limiting densities for chi_m.

    Uses the oscillatory model when the angles look GSH-generic and falls back
    to exact period detection on the series otherwise.
    """
    zeros = inverse_zeros(L)
    diag = gsh_diagnostic(zeros)
    gf = gf_lambda(L, factorization) if kind == "lambda" else gf_mu(L)
    try:
        if diag.verdict == "violated":
            raise GSHViolation("GSH violated")
        out = []
        for g in (gf, cumulative_gf(gf)):
            model = oscillatory_model(g, zeros, diag)
            if kind == "lambda":
                out.append(density_lambda(model, symmetric_constants(zeros, factorization), qmc_points=qmc_points))
            else:
                out.append(density_mu(model))
        return out[0], out[1]
    except GSHViolation:
        start = 2 * L.M
        series = expand(gf, start + 3 * window + 3)
        return periodic_density(series, window, start=start, verdict=diag.verdict)
