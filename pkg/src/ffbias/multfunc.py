"""Irreducibility, factorization and the multiplicative functions mu, lambda, chi_m.

Factorization runs squarefree decomposition first, then trial division for
small squarefree parts (degree < 6) and distinct-degree plus Cantor-Zassenhaus
equal-degree splitting above that.  The splitting RNG is seeded with
:data:`FACTOR_SEED` so every run produces the same factor order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .ffpoly import DomainError, FieldSpec, Poly, enumerate_monic, gcd

FACTOR_SEED = 20240917
TRIAL_DIVISION_BELOW = 6


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _frobenius_power(f: Poly, i: int) -> Poly:
    """T**(q**i) mod f."""
    x = Poly.monomial(f.field, 1)
    h = x % f
    for _ in range(i):
        h = h.mod_pow(f.field.q, f)
    return h


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: deterministic irreducibility check over F_q."""
    n = f.degree
    if n < 1:
        raise DomainError("irreducibility is undefined for constants")
    if n == 1:
        return True
    f = f.monic()
    x = Poly.monomial(f.field, 1)
    for r in _prime_divisors(n):
        h = _frobenius_power(f, n // r)
        if gcd(h - x, f).degree != 0:
            return False
    return (_frobenius_power(f, n) - x) % f == Poly(f.field)


@lru_cache(maxsize=None)
def monic_irreducibles(spec: FieldSpec, d: int) -> tuple[Poly, ...]:
    """All monic irreducibles of degree d, in enumeration order."""
    return tuple(f for f in enumerate_monic(spec, d) if is_irreducible(f))


@dataclass(frozen=True)
class Factorization:
    """f = unit * prod(g**e for g, e in factors); factors sorted, monic, irreducible."""

    unit: int
    factors: tuple[tuple[Poly, int], ...]

    @property
    def omega(self) -> int:
        """Number of irreducible factors counted with multiplicity."""
        return sum(e for _, e in self.factors)

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @property
    def degrees(self) -> list[int]:
        return [g.degree for g, _ in self.factors]

    def expand(self, spec: FieldSpec) -> Poly:
        out = Poly.constant(spec, self.unit)
        for g, e in self.factors:
            out = out * g**e
        return out


def _pth_root(f: Poly) -> Poly:
    # f' = 0 so f = sum a_i T^(i p); a**(1/p) = a**(q/p)
    F = f.field
    e = F.q // F.p
    return Poly(F, [F.pow(c, e) for c in f.coeffs[:: F.p]])


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Return [(s_i, i)] with f monic = prod s_i**i and the s_i squarefree, coprime."""
    f = f.monic()
    one = Poly.constant(f.field, 1)
    out: dict[int, Poly] = {}

    def merge(parts, scale):
        for s, i in parts:
            out[i * scale] = out.get(i * scale, one) * s

    def sff(g: Poly) -> list[tuple[Poly, int]]:
        parts = []
        d = g.derivative()
        if d.is_zero():
            return [(s, i * g.field.p) for s, i in sff(_pth_root(g))]
        c = gcd(g, d)
        w = g // c
        i = 1
        while w.degree > 0:
            y = gcd(w, c)
            fac = w // y
            if fac.degree > 0:
                parts.append((fac, i))
            i += 1
            w = y
            c = c // y
        if c.degree > 0:
            parts.extend((s, j * g.field.p) for s, j in sff(_pth_root(c)))
        return parts

    if f.degree > 0:
        merge(sff(f), 1)
    return sorted(((s, i) for i, s in out.items()), key=lambda t: t[1])


def _trial_split(f: Poly) -> list[Poly]:
    # f monic squarefree, deg f < TRIAL_DIVISION_BELOW
    found = []
    for d in range(1, f.degree // 2 + 1):
        for g in monic_irreducibles(f.field, d):
            if g.degree > f.degree // 2:
                break
            quo, rem = divmod(f, g)
            if rem.is_zero():
                found.append(g)
                f = quo
        if f.degree < 2 * (d + 1):
            break
    if f.degree > 0:
        found.append(f)
    return found


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    # f monic squarefree; returns products of all irreducible factors of each degree
    out = []
    x = Poly.monomial(f.field, 1)
    h = x % f
    i = 0
    while f.degree >= 2 * (i + 1):
        i += 1
        h = h.mod_pow(f.field.q, f)
        g = gcd(h - x, f)
        if g.degree > 0:
            out.append((g, i))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    # Cantor-Zassenhaus for odd q
    if f.degree == d:
        return [f]
    F = f.field
    n = f.degree
    e = (F.q**d - 1) // 2
    one = Poly.constant(F, 1)
    while True:
        a = Poly(F, [rng.randrange(F.q) for _ in range(n)])
        if a.degree < 1:
            continue
        g = gcd(a, f)
        if 0 < g.degree < n:
            break
        b = a.mod_pow(e, f) - one
        g = gcd(b, f)
        if 0 < g.degree < n:
            break
    return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def _sort_key(g: Poly):
    return (g.degree, tuple(reversed(g.coeffs)))


def factor(f: Poly, seed: int = FACTOR_SEED) -> Factorization:
    """Factor f into monic irreducibles (deterministic for a fixed seed)."""
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    unit = f.lead
    rng = random.Random(seed)
    factors = []
    for s, mult in squarefree_decomposition(f):
        if s.degree < TRIAL_DIVISION_BELOW:
            irreducibles = _trial_split(s)
        else:
            irreducibles = []
            for block, d in _distinct_degree(s):
                irreducibles.extend(_equal_degree(block, d, rng))
        factors.extend((g, mult) for g in irreducibles)
    factors.sort(key=lambda t: _sort_key(t[0]))
    return Factorization(unit, tuple(factors))


def is_squarefree(f: Poly) -> bool:
    if f.is_zero():
        raise DomainError("zero is not squarefree")
    if f.degree < 1:
        return True
    return all(i == 1 for _, i in squarefree_decomposition(f))


def mobius(f: Poly) -> int:
    if f.is_zero():
        raise DomainError("mu(0) is undefined")
    fac = factor(f)
    if not fac.is_squarefree:
        return 0
    return -1 if len(fac.factors) % 2 else 1


def liouville(f: Poly) -> int:
    if f.is_zero():
        raise DomainError("lambda(0) is undefined")
    return -1 if factor(f).omega % 2 else 1


# ---------------------------------------------------------------------------
# quadratic character


def check_modulus(m: Poly) -> None:
    """Raise DomainError unless m is monic, squarefree and nonconstant."""
    if m.degree < 1:
        raise DomainError(f"modulus must be nonconstant, got {m}")
    if not m.is_monic():
        raise DomainError(f"modulus must be monic, got {m}")
    if gcd(m, m.derivative()).degree > 0:
        raise DomainError(f"modulus {m} is not squarefree")


def _constant_symbol(spec: FieldSpec, c: int, deg_m: int) -> int:
    # (c/m) for a nonzero constant: chi_q(c)**deg m
    s = spec.quadratic_character(c)
    return s if deg_m % 2 else 1


def jacobi(f: Poly, m: Poly) -> int:
    """The residue symbol (f/m) for monic m, via quadratic reciprocity.

    For monic coprime a, b:  (a/b) = (-1)**((q-1)/2 * deg a * deg b) * (b/a).
    """
    spec = m.field
    half = (spec.q - 1) // 2
    result = 1
    a, b = f, m
    while True:
        if b.degree == 0:
            return result
        a = a % b
        if a.is_zero():
            return 0
        if a.lead != 1:
            result *= _constant_symbol(spec, a.lead, b.degree)
            a = a.monic()
        if a.degree == 0:
            return result
        if half * a.degree * b.degree % 2:
            result = -result
        a, b = b, a


def chi(m: Poly, f: Poly) -> int:
    """chi_m(f) = (f/m) in {-1, 0, +1}; m must be monic squarefree nonconstant."""
    check_modulus(m)
    return jacobi(f, m)


def chi_euler(m: Poly, f: Poly, factorization: Factorization | None = None) -> int:
    """chi_m(f) through Euler's criterion f**((|P|-1)/2) mod P on each prime P | m."""
    check_modulus(m)
    spec = m.field
    fac = factorization or factor(m)
    minus_one = spec.neg(1)
    result = 1
    for P, _ in fac.factors:
        r = f.mod_pow((P.norm() - 1) // 2, P)
        if r.is_zero():
            return 0
        c = r.coeffs[0]
        if r.degree != 0 or c not in (1, minus_one):
            raise AssertionError(f"Euler criterion gave non-unit {r} mod {P}")
        if c == minus_one:
            result = -result
    return result
