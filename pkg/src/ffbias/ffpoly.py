"""Finite fields F_q (q odd) and univariate polynomials over them.

Field elements are plain ints in ``range(q)``.  For a prime field the int is
the residue itself; for an extension field F_p[x]/(g) the int packs the
coefficient vector (c_0, ..., c_{k-1}) in base p, i.e. ``sum(c_i * p**i)``.

Polynomials are immutable :class:`Poly` values holding a tuple of field
elements in ascending powers of T with no trailing zeros (the zero
polynomial has the empty tuple).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

DEG_ZERO = -math.inf
"""Degree of the zero polynomial (compares below every int)."""


class DomainError(ValueError):
    """Raised for mathematically undefined inputs (inverse of 0, x/0, ...)."""


class PolyParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based offending offset."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    return all(n % d for d in range(3, r + 1, 2))


@dataclass(frozen=True)
class FieldSpec:
    """The field F_q with q = p**k, p an odd prime.

    ``ext_modulus`` is the ascending coefficient tuple of a monic irreducible
    polynomial of degree k over F_p; it is required iff k > 1.
    """

    p: int
    k: int = 1
    ext_modulus: tuple[int, ...] | None = None
    q: int = field(init=False, compare=False)

    def __post_init__(self):
        if not _is_prime(self.p) or self.p == 2:
            raise DomainError(f"p must be an odd prime, got {self.p}")
        if self.k < 1:
            raise DomainError(f"extension degree must be >= 1, got {self.k}")
        if self.k == 1:
            if self.ext_modulus is not None:
                raise DomainError("ext_modulus given for a prime field")
        else:
            g = self.ext_modulus
            if g is None:
                raise DomainError("extension fields need an explicit irreducible modulus")
            g = tuple(int(c) % self.p for c in g)
            if len(g) != self.k + 1 or g[-1] != 1:
                raise DomainError(f"ext_modulus must be monic of degree {self.k}")
            object.__setattr__(self, "ext_modulus", g)
            from .multfunc import is_irreducible

            if not is_irreducible(Poly(FieldSpec(self.p), g)):
                raise DomainError(f"ext_modulus {g} is reducible over F_{self.p}")
        object.__setattr__(self, "q", self.p**self.k)

    # -- element arithmetic -------------------------------------------------

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def element(self, value) -> int:
        """Coerce an int (reduced mod p) or a length-k vector into an element."""
        if isinstance(value, int):
            return value % self.p
        vec = [int(c) % self.p for c in value]
        if len(vec) > self.k:
            raise DomainError(f"vector of length {len(vec)} in F_{self.q}")
        return sum(c * self.p**i for i, c in enumerate(vec))

    def vector(self, a: int) -> tuple[int, ...]:
        """Coefficient vector (length k) of the element ``a``."""
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self._add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return self._neg_table[a]

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        log, exp = self._log_exp
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.p)
        log, exp = self._log_exp
        return exp[-log[a] % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def quadratic_character(self, a: int) -> int:
        """Return +1/-1/0 according as a is a nonzero square, a non-square, or 0."""
        if a == 0:
            return 0
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def elements(self) -> range:
        return range(self.q)

    # -- extension field tables (k > 1 only) ---------------------------------

    @cached_property
    def _add_table(self) -> list[list[int]]:
        vecs = [self.vector(a) for a in range(self.q)]
        p = self.p
        return [
            [self.element([(x + y) % p for x, y in zip(va, vb)]) for vb in vecs] for va in vecs
        ]

    @cached_property
    def _neg_table(self) -> list[int]:
        return [self.element([-c for c in self.vector(a)]) for a in range(self.q)]

    @cached_property
    def _log_exp(self) -> tuple[dict[int, int], list[int]]:
        # schoolbook multiplication of residues mod ext_modulus, only used to build tables
        p, k, g = self.p, self.k, self.ext_modulus

        def slow_mul(a, b):
            va, vb = self.vector(a), self.vector(b)
            prod = [0] * (2 * k - 1)
            for i, x in enumerate(va):
                for j, y in enumerate(vb):
                    prod[i + j] += x * y
            for d in range(2 * k - 2, k - 1, -1):
                c = prod[d] % p
                if c:
                    for i in range(k + 1):
                        prod[d - k + i] -= c * g[i]
            return self.element(prod[:k])

        order = self.q - 1
        for gen in range(2, self.q):
            exp = [1]
            x = gen
            while x != 1:
                exp.append(x)
                x = slow_mul(x, gen)
            if len(exp) == order:
                return {v: i for i, v in enumerate(exp)}, exp
        raise DomainError("no primitive element found")  # unreachable for a field

    def __str__(self) -> str:
        return f"F_{self.q}"


# ---------------------------------------------------------------------------
# polynomials


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Immutable polynomial over a :class:`FieldSpec`, ascending coefficients."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldSpec, coeffs: Sequence[int] = ()):
        # ints are residues mod p (prime field) or packed elements (extension)
        self.field = field
        if field.k == 1:
            self.coeffs = _trim([int(c) % field.p for c in coeffs])
        else:
            self.coeffs = _trim([c % field.q if isinstance(c, int) else field.element(c) for c in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, field: FieldSpec, coeffs: tuple[int, ...]) -> Poly:
        # coeffs already reduced and trimmed
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, field: FieldSpec, c: int) -> Poly:
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: FieldSpec, n: int, c: int = 1) -> Poly:
        return cls(field, (0,) * n + (c,))

    @classmethod
    def from_roots(cls, field: FieldSpec, roots: Sequence[int]) -> Poly:
        out = cls.constant(field, 1)
        for r in roots:
            out = out * cls._raw(field, (field.neg(r), 1))
        return out

    # -- basic properties ----------------------------------------------------

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def norm(self) -> int:
        """|f| = q**deg f as an exact int; undefined for f = 0."""
        if not self.coeffs:
            raise DomainError("|0| is undefined")
        return self.field.q ** (len(self.coeffs) - 1)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Poly.constant(self.field, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field.q, self.coeffs))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({self.field}, {format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- ring operations -----------------------------------------------------

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.field != self.field:
                raise DomainError(f"mixing polynomials over {self.field} and {other.field}")
            return other
        if isinstance(other, int):
            return Poly.constant(self.field, other)
        return NotImplemented

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        F = self.field
        if F.k == 1:
            p = F.p
            out = [(x + y) % p for x, y in zip(a, b)] + list(a[len(b):])
        else:
            out = [F.add(x, y) for x, y in zip(a, b)] + list(a[len(b):])
        return Poly._raw(F, _trim(out))

    __radd__ = __add__

    def __neg__(self) -> Poly:
        F = self.field
        return Poly._raw(F, tuple(F.neg(c) for c in self.coeffs))

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def __mul__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(self.field, ())
        F = self.field
        out = [0] * (len(a) + len(b) - 1)
        if F.k == 1:
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            p = F.p
            out = [c % p for c in out]
        else:
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly._raw(F, _trim(out))

    __rmul__ = __mul__

    def scale(self, c: int) -> Poly:
        F = self.field
        return Poly._raw(F, _trim([F.mul(c, x) for x in self.coeffs]))

    def monic(self) -> Poly:
        """Return f / lead(f); the zero polynomial is returned unchanged."""
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        return self.scale(self.field.inv(self.coeffs[-1]))

    def __divmod__(self, other) -> tuple[Poly, Poly]:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.coeffs:
            raise DomainError("polynomial division by zero")
        F = self.field
        b = other.coeffs
        db = len(b) - 1
        rem = list(self.coeffs)
        if len(rem) <= db:
            return Poly._raw(F, ()), self
        quot = [0] * (len(rem) - db)
        inv_lead = F.inv(b[-1])
        if F.k == 1:
            p = F.p
            for i in range(len(rem) - 1, db - 1, -1):
                c = rem[i] * inv_lead % p
                if c:
                    quot[i - db] = c
                    for j in range(db + 1):
                        rem[i - db + j] = (rem[i - db + j] - c * b[j]) % p
        else:
            for i in range(len(rem) - 1, db - 1, -1):
                c = F.mul(rem[i], inv_lead)
                if c:
                    quot[i - db] = c
                    for j in range(db + 1):
                        rem[i - db + j] = F.sub(rem[i - db + j], F.mul(c, b[j]))
        return Poly._raw(F, _trim(quot)), Poly._raw(F, _trim(rem[:db]))

    def __floordiv__(self, other) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other) -> Poly:
        return divmod(self, other)[1]

    def __pow__(self, e: int) -> Poly:
        if e < 0:
            raise DomainError("negative power of a polynomial")
        result = Poly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def mod_pow(self, e: int, modulus: Poly) -> Poly:
        """self**e mod modulus by square-and-multiply."""
        if e < 0:
            raise DomainError("negative exponent in mod_pow")
        result = Poly.constant(self.field, 1) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def __call__(self, x: int) -> int:
        """Evaluate at a field element by Horner's rule."""
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def derivative(self) -> Poly:
        F = self.field
        return Poly._raw(F, _trim([F.mul(i % F.p, c) for i, c in enumerate(self.coeffs)][1:]))

    def divides(self, other: Poly) -> bool:
        return (other % self).is_zero()


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd (zero only when both inputs are zero)."""
    while g.coeffs:
        f, g = g, f % g
    return f.monic()


def xgcd(f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (d, s, t) with s*f + t*g = d = gcd(f, g), d monic."""
    F = f.field
    r0, r1 = f, g
    s0, s1 = Poly.constant(F, 1), Poly._raw(F, ())
    t0, t1 = Poly._raw(F, ()), Poly.constant(F, 1)
    while r1.coeffs:
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if not r0.coeffs:
        return r0, s0, t0
    c = F.inv(r0.lead)
    return r0.scale(c), s0.scale(c), t0.scale(c)


def enumerate_monic(spec: FieldSpec, n: int) -> Iterator[Poly]:
    """Yield all q**n monic polynomials of degree n.

    Order is lexicographic in the coefficient tuple read from the top
    (c_{n-1}, ..., c_0); for n = 1 this is T, T+1, ..., T+(q-1).
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    for top in itertools.product(range(spec.q), repeat=n):
        yield Poly._raw(spec, tuple(reversed(top)) + (1,))


# ---------------------------------------------------------------------------
# text format
#
# expr   := ['+'|'-'] term (('+'|'-') term)*
# term   := factor (['*'] factor)*
# factor := atom ['^' int]
# atom   := int | '<' int '>' | VAR | '(' expr ')'
#
# '<n>' is an extension-field element in the packed int encoding.

_TOKEN = re.compile(r"\s*(?:(\d+)|(<\d+>)|([A-Za-z_]\w*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:  # only trailing whitespace left
            break
        num, elem, name, sym = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("int", num, start))
        elif elem is not None:
            tokens.append(("elem", elem[1:-1], start))
        elif name is not None:
            tokens.append(("name", name, start))
        else:
            tokens.append(("sym", sym, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, spec: FieldSpec, var: str, reduce: bool):
        self.text = text
        self.spec = spec
        self.var = var
        self.reduce = reduce
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        raise PolyParseError(message, self.text, tok[2])

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            self.fail("empty polynomial")
        f = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return f

    def expr(self) -> Poly:
        sign = 1
        tok = self.peek()
        if tok[0] == "sym" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] == "sym" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def _starts_factor(self) -> bool:
        kind, val, _ = self.peek()
        return kind in ("int", "elem", "name") or (kind == "sym" and val == "(")

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "sym" and tok[1] == "*":
                self.take()
                acc = acc * self.factor()
            elif self._starts_factor():
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Poly:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "sym" and tok[1] == "^":
            self.take()
            exp_tok = self.take()
            if exp_tok[0] != "int":
                self.fail("expected integer exponent", exp_tok)
            return base ** int(exp_tok[1])
        return base

    def atom(self) -> Poly:
        kind, val, pos = tok = self.take()
        spec = self.spec
        if kind == "int":
            c = int(val)
            if c >= spec.p and not self.reduce:
                self.fail(f"coefficient {c} >= p = {spec.p}", tok)
            return Poly.constant(spec, c % spec.p)
        if kind == "elem":
            c = int(val)
            if c >= spec.q:
                self.fail(f"element <{c}> outside F_{spec.q}", tok)
            return Poly._raw(spec, _trim([c]))
        if kind == "name":
            if val != self.var:
                self.fail(f"unknown variable {val!r}", tok)
            return Poly.monomial(spec, 1)
        if kind == "sym" and val == "(":
            inner = self.expr()
            close = self.take()
            if close[0] != "sym" or close[1] != ")":
                self.fail("expected ')'", close)
            return inner
        self.fail(f"unexpected {val!r}" if kind != "end" else "unexpected end of input", tok)


def parse_poly(text: str, spec: FieldSpec, *, var: str = "T", reduce: bool = False) -> Poly:
    """Parse polynomial text such as ``"T^3-T+1"`` or ``"(T^2+1)*(T^3+2*T+1)"``.

    Integer literals must lie in [0, p) unless ``reduce=True``; negative
    coefficients are written with a minus sign and reduced mod p.
    """
    return _Parser(text, spec, var, reduce).parse()


def _format_coeff(spec: FieldSpec, c: int) -> str:
    return str(c) if c < spec.p else f"<{c}>"


def format_poly(f: Poly, var: str = "T") -> str:
    """Canonical text: descending powers, no '*', unit coefficients elided."""
    if not f.coeffs:
        return "0"
    parts = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if c == 0:
            continue
        coeff = _format_coeff(f.field, c)
        if i == 0:
            parts.append(coeff)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        parts.append(mono if c == 1 else coeff + mono)
    return "+".join(parts)
