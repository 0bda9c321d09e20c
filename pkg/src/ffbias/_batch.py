"""Vectorized arithmetic on many polynomials at once (numpy int64 rows).

A batch is an (N, L) array whose rows are ascending coefficient vectors of
length L.  The monic polynomials of degree n are indexed by
``i = sum(c_j * q**j for j < n)`` so that row i of :func:`all_monic`
coincides with the i-th item of :func:`ffpoly.enumerate_monic`.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .ffpoly import FieldSpec, Poly


class BatchField:
    """Elementwise F_q arithmetic on int arrays (tables for extension fields)."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.q = spec.q
        self.p = spec.p
        if spec.k > 1:
            q = spec.q
            self._add = np.array([[spec.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            self._mul = np.array([[spec.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            self._neg = np.array([spec.neg(a) for a in range(q)], dtype=np.int64)

    def add(self, a, b):
        if self.spec.k == 1:
            return (a + b) % self.p
        return self._add[a, b]

    def sub(self, a, b):
        if self.spec.k == 1:
            return (a - b) % self.p
        return self._add[a, self._neg[b]]

    def mul(self, a, b):
        if self.spec.k == 1:
            return (a * b) % self.p
        return self._mul[a, b]


@lru_cache(maxsize=16)
def batch_field(spec: FieldSpec) -> BatchField:
    return BatchField(spec)


def all_monic(spec: FieldSpec, n: int) -> np.ndarray:
    """(q**n, n+1) array of every monic polynomial of degree n."""
    q = spec.q
    idx = np.arange(q**n, dtype=np.int64)
    out = np.empty((q**n, n + 1), dtype=np.int64)
    for j in range(n):
        out[:, j] = (idx // q**j) % q
    out[:, n] = 1
    return out


def encode(rows: np.ndarray, q: int) -> np.ndarray:
    """Index of each row's low coefficients in base q."""
    weights = q ** np.arange(rows.shape[1], dtype=np.int64)
    return rows @ weights


def reduce_mod(rows: np.ndarray, m: Poly) -> np.ndarray:
    """Remainders of every row modulo the monic polynomial m -> (N, deg m)."""
    F = batch_field(m.field)
    d = m.degree
    mc = np.array(m.coeffs, dtype=np.int64)
    A = rows.copy()
    for i in range(A.shape[1] - 1, d - 1, -1):
        c = A[:, i]
        if not c.any():
            continue
        for j in range(d):
            A[:, i - d + j] = F.sub(A[:, i - d + j], F.mul(c, mc[j]))
        A[:, i] = 0
    if A.shape[1] < d:
        A = np.pad(A, ((0, 0), (0, d - A.shape[1])))
    return A[:, :d]


def mul_rows(A: np.ndarray, B: np.ndarray, spec: FieldSpec) -> np.ndarray:
    """Row-wise products; B may be a single row (broadcast)."""
    F = batch_field(spec)
    B = np.atleast_2d(B)
    la, lb = A.shape[1], B.shape[1]
    out = np.zeros((max(A.shape[0], B.shape[0]), la + lb - 1), dtype=np.int64)
    for i in range(la):
        ai = A[:, i : i + 1]
        out[:, i : i + lb] = F.add(out[:, i : i + lb], F.mul(ai, B))
    return out


def mulmod(A: np.ndarray, B: np.ndarray, m: Poly) -> np.ndarray:
    return reduce_mod(mul_rows(A, B, m.field), m)


def powmod(A: np.ndarray, e: int, m: Poly) -> np.ndarray:
    d = m.degree
    result = np.zeros((A.shape[0], d), dtype=np.int64)
    result[:, 0] = 1
    base = reduce_mod(A, m)
    while e:
        if e & 1:
            result = mulmod(result, base, m)
        base = mulmod(base, base, m)
        e >>= 1
    return result


def euler_symbol(rows: np.ndarray, P: Poly) -> np.ndarray:
    """(f/P) for every row via Euler's criterion; P monic irreducible."""
    spec = P.field
    r = powmod(rows, (P.norm() - 1) // 2, P)
    if r.shape[1] > 1 and r[:, 1:].any():
        raise AssertionError(f"Euler criterion produced non-constant residues mod {P}")
    c = r[:, 0]
    out = np.zeros(len(c), dtype=np.int64)
    out[c == 1] = 1
    out[c == spec.neg(1)] = -1
    return out


def character_values(rows: np.ndarray, prime_factors: list[Poly]) -> np.ndarray:
    """chi_m on every row, as the product of Euler symbols over m's prime factors."""
    out = np.ones(rows.shape[0], dtype=np.int64)
    for P in prime_factors:
        out *= euler_symbol(rows, P)
    return out


def residue_character_table(m: Poly, prime_factors: list[Poly]) -> np.ndarray:
    """chi_m on all q**deg m residues, indexed by :func:`encode` of the residue."""
    spec = m.field
    d = m.degree
    q = spec.q
    idx = np.arange(q**d, dtype=np.int64)
    rows = np.empty((q**d, d), dtype=np.int64)
    for j in range(d):
        rows[:, j] = (idx // q**j) % q
    return character_values(rows, prime_factors)
