"""Dirichlet L-polynomials of quadratic characters and their inverse zeros.

For a monic squarefree m of degree M the L-function of chi_m is an integer
polynomial in u = q**-s of degree at most M - 1.  All its zeros other than
u = 1 (a simple zero, present exactly when M is even) lie on |u| = q**-1/2,
so the inverse zeros are sqrt(q) * exp(+-i theta_j) with theta_j in (0, pi).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _batch
from .ffpoly import DomainError, FieldSpec, Poly, enumerate_monic, format_poly, parse_poly
from .multfunc import Factorization, check_modulus, factor, jacobi

SCHEMA_VERSION = 1
RH_TOLERANCE = 1e-9
CLUSTER_TOLERANCE = 1e-8
GSH_MAX_DENOMINATOR = 120
GSH_RATIONAL_RTOL = 1e-10
GSH_MAX_COEFF = 20
GSH_RELATION_TOL = 1e-9


class IntegrityError(RuntimeError):
    """An identity guaranteed by theory failed; points at an upstream bug."""


@dataclass(frozen=True)
class LPolynomial:
    """Integer coefficients (ascending in u) of the L-function of chi_m."""

    spec: FieldSpec
    modulus: Poly
    coeffs: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def M(self) -> int:
        return self.modulus.degree

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def m_prime(self) -> int:
        return (self.M - 1) // 2 if self.M % 2 else (self.M - 2) // 2

    def __call__(self, u):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def __str__(self) -> str:
        return format_upoly(self.coeffs)

    def to_json(self) -> str:
        obj = {
            "schema_version": SCHEMA_VERSION,
            "q": self.spec.q,
            "p": self.spec.p,
            "k": self.spec.k,
            "m": format_poly(self.modulus),
            "coeffs": [str(c) for c in self.coeffs],
        }
        if self.spec.ext_modulus is not None:
            obj["ext_modulus"] = list(self.spec.ext_modulus)
        return json.dumps(obj, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> LPolynomial:
        obj = json.loads(text)
        ext = obj.get("ext_modulus")
        spec = FieldSpec(obj["p"], obj["k"], tuple(ext) if ext else None)
        if spec.q != obj["q"]:
            raise ValueError(f"inconsistent q={obj['q']} for p={obj['p']}, k={obj['k']}")
        m = parse_poly(obj["m"], spec)
        return cls(spec, m, tuple(int(c) for c in obj["coeffs"]))


def format_upoly(coeffs, var: str = "u") -> str:
    """Human form of an integer polynomial in u, e.g. ``1 + 3u + 5u^2``."""
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        body = str(mag) if (mag != 1 or i == 0) else ""
        body += mono
        if not terms:
            terms.append(body if c > 0 else "-" + body)
        else:
            terms.append(("+ " if c > 0 else "- ") + body)
    return " ".join(terms) if terms else "0"


def _character_sums_scalar(m: Poly, M: int) -> list[int]:
    spec = m.field
    return [sum(jacobi(f, m) for f in enumerate_monic(spec, n)) for n in range(M)]


def _character_sums_batch(m: Poly, M: int, fac: Factorization) -> list[int]:
    primes = [P for P, _ in fac.factors]
    return [int(_batch.character_values(_batch.all_monic(m.field, n), primes).sum()) for n in range(M)]


def l_polynomial(spec: FieldSpec, m: Poly, method: str = "batch") -> LPolynomial:
    """Coefficients sum_{f monic, deg f = n} chi_m(f) for n < deg m, by enumeration.

    ``method="batch"`` evaluates the character with vectorized Euler
    criterion; ``"scalar"`` walks every f through the reciprocity-based
    :func:`multfunc.jacobi`.
    """
    if m.field != spec:
        raise DomainError("modulus is not over the given field")
    check_modulus(m)
    M = m.degree
    if method == "batch":
        sums = _character_sums_batch(m, M, factor(m))
    elif method == "scalar":
        sums = _character_sums_scalar(m, M)
    else:
        raise ValueError(f"unknown method {method!r}")
    while len(sums) > 1 and sums[-1] == 0:
        sums.pop()
    if sums[0] != 1:
        raise IntegrityError(f"L-polynomial constant term {sums[0]} != 1")
    if M % 2 == 0 and sum(sums) != 0:
        raise IntegrityError("even-degree modulus without a zero at u = 1")
    return LPolynomial(spec, m, tuple(sums))


# ---------------------------------------------------------------------------
# exact rational helpers


def _rat_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    # ascending coefficient lists, b nonzero with nonzero top
    a = list(a)
    db = len(b) - 1
    if len(a) <= db:
        return [Fraction(0)], a
    quot = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / b[-1]
        quot[i - db] = c
        for j in range(db + 1):
            a[i - db + j] -= c * b[j]
    rem = a[:db]
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


def _rat_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while b:
        _, r = _rat_divmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a]


def _rat_derivative(a):
    return [i * c for i, c in enumerate(a)][1:]


def squarefree_parts(coeffs) -> list[tuple[list[Fraction], int]]:
    """Yun decomposition over Q: [(s_i, i)] with coeffs ~ prod s_i**i."""
    f = [Fraction(c) for c in coeffs]
    out = []
    if len(f) <= 1:
        return out
    d = _rat_derivative(f)
    a0 = _rat_gcd(f, d)
    b, _ = _rat_divmod(f, a0)
    c, _ = _rat_divmod(d, a0)
    i = 1
    while len(b) > 1:
        db = _rat_derivative(b)
        diff = [x - y for x, y in itertools.zip_longest(c, db, fillvalue=Fraction(0))]
        while diff and diff[-1] == 0:
            diff.pop()
        a = _rat_gcd(b, diff) if diff else [c / b[-1] for c in b]
        if len(a) > 1:
            out.append((a, i))
        b, _ = _rat_divmod(b, a)
        c, _ = _rat_divmod(diff, a) if diff else ([], [])
        i += 1
    return out


# ---------------------------------------------------------------------------
# inverse zeros


@dataclass(frozen=True)
class InverseZeroData:
    """Angles of the inverse zeros sqrt(q) exp(+-i theta_j) of an L-polynomial."""

    q: int
    M: int
    angles: tuple[float, ...]
    multiplicities: tuple[int, ...]
    has_unit_zero: bool
    rh_residual: float
    roots: tuple[complex, ...] = field(repr=False, default=())
    clustered: bool = False
    real_zeros: int = 0  # inverse zeros +-sqrt(q) (angles 0 / pi), each half of a pair

    @property
    def m_prime(self) -> int:
        return len(self.angles)

    @property
    def has_real_zeros(self) -> bool:
        return self.real_zeros > 0


def _newton_polish(coeffs_desc: np.ndarray, z: complex) -> complex:
    d = np.polyder(coeffs_desc)
    fz, dz = np.polyval(coeffs_desc, z), np.polyval(d, z)
    return z - fz / dz if dz != 0 else z


def inverse_zeros(L: LPolynomial) -> InverseZeroData:
    """Remove the unit zero exactly, locate the remaining roots, return the angles."""
    q, M = L.q, L.M
    coeffs = list(L.coeffs)
    has_unit = M % 2 == 0
    if has_unit:
        if sum(coeffs) != 0:
            raise IntegrityError("expected a zero at u = 1 for even M")
        # synthetic division by (1 - u): partial sums
        coeffs = list(itertools.accumulate(coeffs))[:-1]
        if sum(coeffs) == 0:
            raise IntegrityError("zero at u = 1 is not simple")
    expected = L.m_prime
    if len(coeffs) - 1 != 2 * expected:
        raise IntegrityError(f"L-polynomial {L} has degree {L.degree}, expected {M - 1}")

    angles: list[float] = []
    mults: list[int] = []
    roots: list[complex] = []
    residual = 0.0
    real = 0
    sqrt_q = math.sqrt(q)
    for part, mult in squarefree_parts(coeffs):
        desc = np.array([float(c) for c in reversed(part)])
        found = np.roots(desc)
        for z in found:
            z = _newton_polish(desc, complex(z))
            inv = 1 / z
            residual = max(residual, abs(abs(inv) - sqrt_q))
            roots.extend([z] * mult)
            if abs(inv.imag) <= RH_TOLERANCE * sqrt_q:
                # real inverse zero +-sqrt(q): no conjugate partner
                real += mult
                angles.extend([0.0 if inv.real > 0 else math.pi] * mult)
                mults.extend([mult] * mult)
            elif inv.imag > 0:  # conjugate representative
                angles.extend([math.atan2(inv.imag, inv.real)] * mult)
                mults.extend([mult] * mult)
    if residual > RH_TOLERANCE:
        raise IntegrityError(f"inverse zero off the circle |z| = sqrt(q): residual {residual:.3e}")
    if 2 * len(angles) - real != 2 * expected:
        raise IntegrityError(f"found {len(angles)} angles ({real} real), expected {expected} pairs")
    order = sorted(range(len(angles)), key=angles.__getitem__)
    angles = [angles[i] for i in order]
    mults = [mults[i] for i in order]
    clustered = any(m > 1 for m in mults) or any(
        b - a < CLUSTER_TOLERANCE for a, b in zip(angles, angles[1:])
    )
    return InverseZeroData(
        q=q,
        M=M,
        angles=tuple(angles),
        multiplicities=tuple(mults),
        has_unit_zero=has_unit,
        rh_residual=residual,
        roots=tuple(roots),
        clustered=clustered,
        real_zeros=real,
    )


# ---------------------------------------------------------------------------
# GSH heuristics


@dataclass(frozen=True)
class AngleVerdict:
    theta: float
    verdict: str  # "plausibly-irrational" | "rational-multiple" | "unresolved"
    fraction: tuple[int, int] | None = None  # theta/pi = a/b


@dataclass(frozen=True)
class GSHDiagnostic:
    """Bounded search for Q-linear relations among pi and the angles.

    Heuristic only: the absence of a small relation is evidence, not proof.
    """

    angles: tuple[AngleVerdict, ...]
    relations: tuple[tuple[int, ...], ...]  # (c0, c_i, c_j, i, j): c0*pi + c_i th_i + c_j th_j ~ 0

    @property
    def verdict(self) -> str:
        if any(a.verdict == "rational-multiple" for a in self.angles) or self.relations:
            return "violated"
        if any(a.verdict == "unresolved" for a in self.angles):
            return "unresolved"
        return "plausible"

    @property
    def plausible(self) -> bool:
        return self.verdict == "plausible"

    def describe(self) -> str:
        parts = []
        for k, a in enumerate(self.angles, 1):
            if a.fraction:
                parts.append(f"theta_{k}/pi = {a.fraction[0]}/{a.fraction[1]} ({a.verdict})")
            else:
                parts.append(f"theta_{k} = {a.theta:.12f} ({a.verdict})")
        for c0, ci, cj, i, j in self.relations:
            parts.append(f"relation {c0}*pi + {ci}*theta_{i + 1} + {cj}*theta_{j + 1} ~ 0")
        parts.append(f"GSH {self.verdict} (heuristic search, denominators <= {GSH_MAX_DENOMINATOR})")
        return "; ".join(parts)


def gsh_diagnostic(z: InverseZeroData) -> GSHDiagnostic:
    verdicts = []
    for theta, mult in zip(z.angles, z.multiplicities):
        x = theta / math.pi
        frac = Fraction(x).limit_denominator(GSH_MAX_DENOMINATOR)
        if abs(x - float(frac)) <= GSH_RATIONAL_RTOL * abs(x):
            verdicts.append(AngleVerdict(theta, "rational-multiple", (frac.numerator, frac.denominator)))
        elif mult > 1:
            verdicts.append(AngleVerdict(theta, "unresolved"))
        else:
            verdicts.append(AngleVerdict(theta, "plausibly-irrational"))

    relations = []
    c = np.arange(-GSH_MAX_COEFF, GSH_MAX_COEFF + 1)
    c0, ci, cj = np.meshgrid(c, c, c, indexing="ij")
    nontrivial = (ci != 0) & (cj != 0)
    for i, j in itertools.combinations(range(len(z.angles)), 2):
        val = c0 * math.pi + ci * z.angles[i] + cj * z.angles[j]
        hits = np.argwhere(nontrivial & (np.abs(val) < GSH_RELATION_TOL))
        if len(hits):
            norms = np.abs(c0[tuple(hits.T)]) + np.abs(ci[tuple(hits.T)]) + np.abs(cj[tuple(hits.T)])
            a, b, d = hits[int(np.argmin(norms))]
            relations.append((int(c[a]), int(c[b]), int(c[d]), i, j))
    return GSHDiagnostic(tuple(verdicts), tuple(relations))


# ---------------------------------------------------------------------------
# central value


@dataclass(frozen=True)
class CentralValue:
    horner: float
    product: float


def central_l_value(L: LPolynomial, zeros: InverseZeroData | None = None) -> CentralValue:
    """L(q**-1/2, chi_m) by Horner and from the angles (prod (2 - 2 cos theta_j))."""
    u = 1 / math.sqrt(L.q)
    horner = 0.0
    for c in reversed(L.coeffs):
        horner = horner * u + c
    z = zeros if zeros is not None else inverse_zeros(L)
    prod = 1.0
    for t in z.angles:
        if z.has_real_zeros and t in (0.0, math.pi):
            prod *= 1 - math.cos(t)  # lone real zero
        else:
            prod *= 2 - 2 * math.cos(t)  # |1 - e^{i theta}|^2 for a conjugate pair
    if z.has_unit_zero:
        prod *= 1 - u
    return CentralValue(horner, prod)
