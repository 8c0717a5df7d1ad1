"""Exact arithmetic in cyclotomic fields.

A `CyclotomicNumber` is the residue of a rational polynomial in a primitive
N-th root of unity modulo the N-th cyclotomic polynomial.  For a fixed
conductor N the coefficient vector (length phi(N), exact `Fraction` entries)
is unique, so equality tests and dict keying are sound.  Arithmetic lifts
operands to the lcm of their conductors and never tries to shrink a conductor
back down; values that happen to be rational still compare equal across
conductors because comparison always lifts to a common field first.

`to_complex` is the only bridge to floating point.  It exists for numerical
cross-check harnesses; no arithmetic in this module depends on it.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

__all__ = [
    "CyclotomicNumber",
    "CycloParseError",
    "as_root_of_unity",
    "cyclotomic_polynomial",
    "divisors",
    "euler_phi",
    "parse_cyclotomic",
    "rational",
    "zeta",
]

Rationalish = Union[int, Fraction]


@lru_cache(maxsize=None)
def _factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((prime, multiplicity), ...)."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    phi = 1
    for p, e in _factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, e in _factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _poly_div_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # Long division by a monic integer polynomial; the remainder must vanish.
    work = list(num)
    dn = len(den) - 1
    out = [0] * (len(work) - dn)
    for i in range(len(work) - 1, dn - 1, -1):
        c = work[i]
        if c:
            out[i - dn] = c
            for j, dj in enumerate(den):
                work[i - dn + j] -= c * dj
    if any(work[:dn]):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, ascending degree."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in divisors(n):
        if d < n:
            poly = _poly_div_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


# Rows of the reduction table for conductor n: _row(n, k) holds the integer
# coefficient vector of x^(phi(n)+k) modulo Phi_n.  Rows are extended lazily
# and cached for the lifetime of the process.
_ROW_CACHE: dict[int, list[tuple[int, ...]]] = {}


def _row(n: int, k: int) -> tuple[int, ...]:
    rows = _ROW_CACHE.setdefault(n, [])
    if not rows:
        phi = euler_phi(n)
        rows.append(tuple(-c for c in cyclotomic_polynomial(n)[:phi]))
    base = rows[0]
    while len(rows) <= k:
        prev = rows[-1]
        top = prev[-1]
        shifted = (0,) + prev[:-1]
        if top:
            shifted = tuple(s + top * b for s, b in zip(shifted, base))
        rows.append(shifted)
    return rows[k]


def _reduce_ints(n: int, vec: list[int]) -> list[int]:
    """Reduce an integer coefficient vector of any length modulo Phi_n."""
    phi = euler_phi(n)
    out = vec[:phi]
    if len(out) < phi:
        out += [0] * (phi - len(out))
    for k in range(len(vec) - phi):
        c = vec[phi + k]
        if c:
            row = _row(n, k)
            for i in range(phi):
                out[i] += c * row[i]
    return out


def _int_parts(coeffs: tuple[Fraction, ...]) -> tuple[list[int], int]:
    """Clear denominators: return (integer numerators, common denominator)."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in coeffs], den


@lru_cache(maxsize=None)
def _trace_vector(n: int) -> tuple[int, ...]:
    # Trace of zeta_n^j over Q, j = 0..phi(n)-1 (Ramanujan sum formula).
    phi = euler_phi(n)
    out = []
    for j in range(phi):
        d = n // math.gcd(n, j)
        mu = 1
        for _, e in _factorize(d):
            if e > 1:
                mu = 0
                break
            mu = -mu
        out.append(mu * (phi // euler_phi(d)))
    return tuple(out)


_FR0 = Fraction(0)
_FR1 = Fraction(1)


class CyclotomicNumber:
    """An element of Q(zeta_N), stored as a reduced residue mod Phi_N."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: tuple[Fraction, ...]):
        # Internal constructor: `coeffs` must already be reduced (length
        # phi(conductor)).  Use rational(), zeta(), or parse_cyclotomic().
        self.conductor = conductor
        self.coeffs = coeffs
        self._hash: Optional[int] = None

    # -- construction helpers -------------------------------------------

    @staticmethod
    def _from_int_vec(n: int, vec: list[int], den: int) -> "CyclotomicNumber":
        reduced = _reduce_ints(n, vec)
        return CyclotomicNumber(n, tuple(Fraction(c, den) for c in reduced))

    # -- conductor handling ----------------------------------------------

    def _lifted_coeffs(self, m: int) -> tuple[Fraction, ...]:
        if m == self.conductor:
            return self.coeffs
        step = m // self.conductor
        nums, den = _int_parts(self.coeffs)
        vec = [0] * ((len(nums) - 1) * step + 1)
        for j, c in enumerate(nums):
            if c:
                vec[j * step] = c
        reduced = _reduce_ints(m, vec)
        return tuple(Fraction(c, den) for c in reduced)

    def embed(self, m: int) -> "CyclotomicNumber":
        """Image under Q(zeta_N) -> Q(zeta_m), zeta_N |-> zeta_m^(m/N).

        Requires N | m; this is a ring homomorphism (in fact injective).
        """
        if m % self.conductor:
            raise ValueError(
                f"cannot embed conductor {self.conductor} into {m}: not a multiple"
            )
        return CyclotomicNumber(m, self._lifted_coeffs(m))

    # -- predicates -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    @property
    def rational_value(self) -> Optional[Fraction]:
        """The value as a Fraction if it is rational, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(value) -> Optional["CyclotomicNumber"]:
        if isinstance(value, CyclotomicNumber):
            return value
        if isinstance(value, (int, Fraction)):
            return CyclotomicNumber(1, (Fraction(value),))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = _lcm(self.conductor, other.conductor)
        a = self._lifted_coeffs(n)
        b = other._lifted_coeffs(n)
        return CyclotomicNumber(n, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = _lcm(self.conductor, other.conductor)
        if self.is_zero or other.is_zero:
            return CyclotomicNumber(n, (_FR0,) * euler_phi(n))
        na, da = _int_parts(self._lifted_coeffs(n))
        nb, db = _int_parts(other._lifted_coeffs(n))
        conv = [0] * (len(na) + len(nb) - 1)
        for i, ai in enumerate(na):
            if ai:
                for j, bj in enumerate(nb):
                    if bj:
                        conv[i + j] += ai * bj
        return CyclotomicNumber._from_int_vec(n, conv, da * db)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse via the extended Euclidean algorithm
        against Phi_N (irreducible, so every nonzero residue is a unit)."""
        if self.is_zero:
            raise ZeroDivisionError("division by zero in a cyclotomic field")
        n = self.conductor
        modulus = [Fraction(c) for c in cyclotomic_polynomial(n)]
        r0, r1 = modulus, list(self.coeffs)
        # Bezout coefficient of `self` only.
        s0, s1 = [_FR0], [_FR1]
        while any(r1):
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r0 is a nonzero constant gcd; normalize.
        g = next(c for c in r0 if c)
        inv = [c / g for c in s0]
        phi = euler_phi(n)
        inv = inv[:phi] + [_FR0] * max(0, phi - len(inv))
        # s0 may exceed degree phi-1 transiently only if self was not reduced;
        # reduced inputs keep it inside the basis.
        return CyclotomicNumber(n, tuple(inv[:phi]))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self
        if exponent < 0:
            base = self.inverse()
            exponent = -exponent
        result = CyclotomicNumber(base.conductor, _one_coeffs(base.conductor))
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base if exponent > 1 else base
            exponent >>= 1
        return result

    # -- comparison and hashing -------------------------------------------

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.conductor == other.conductor:
            return self.coeffs == other.coeffs
        n = _lcm(self.conductor, other.conductor)
        return self._lifted_coeffs(n) == other._lifted_coeffs(n)

    def __hash__(self) -> int:
        # Conductor-independent: rational values hash like their Fraction,
        # other values hash on normalized traces of a and a^2 (both invariant
        # under embedding into a larger cyclotomic field).
        if self._hash is None:
            rv = self.rational_value
            if rv is not None:
                self._hash = hash(rv)
            else:
                self._hash = hash((self._trace_avg(), (self * self)._trace_avg()))
        return self._hash

    def _trace_avg(self) -> Fraction:
        tv = _trace_vector(self.conductor)
        phi = len(self.coeffs)
        return sum((c * t for c, t in zip(self.coeffs, tv)), _FR0) / phi

    def __bool__(self) -> bool:
        return not self.is_zero

    # -- output -------------------------------------------------------------

    def to_complex(self) -> complex:
        """Float image at the embedding zeta_N = exp(2*pi*i/N).  Test use only."""
        n = self.conductor
        return sum(
            float(c) * cmath.exp(2j * cmath.pi * j / n)
            for j, c in enumerate(self.coeffs)
            if c
        ) or complex(0)

    def render(self) -> str:
        """Canonical expression string; parse_cyclotomic(render()) == self."""
        n = self.conductor
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                term = _format_rational(c)
            else:
                power = f"E({n})" if j == 1 else f"E({n})^{j}"
                if c == 1:
                    term = power
                elif c == -1:
                    term = "-" + power
                else:
                    term = f"{_format_rational(c)}*{power}"
            parts.append(term)
        if not parts:
            return "0"
        text = parts[0]
        for term in parts[1:]:
            text += term if term.startswith("-") else "+" + term
        return text

    def __repr__(self) -> str:
        return f"<cyc {self.render()}>"


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@lru_cache(maxsize=None)
def _one_coeffs(n: int) -> tuple[Fraction, ...]:
    return (_FR1,) + (_FR0,) * (euler_phi(n) - 1)


def _format_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


# -- Fraction polynomial helpers (inverse computation only) -----------------


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    db = max(i for i, c in enumerate(b) if c)
    lead = b[db]
    q = [_FR0] * max(1, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            f = c / lead
            q[i - db] = f
            for j in range(db + 1):
                a[i - db + j] -= f * b[j]
    return q, a[:db] if db else [_FR0]


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [_FR0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    size = max(len(a), len(b))
    a = a + [_FR0] * (size - len(a))
    b = b + [_FR0] * (size - len(b))
    return [x - y for x, y in zip(a, b)]


# -- public constructors -----------------------------------------------------


def rational(value: Rationalish) -> CyclotomicNumber:
    """The rational number `value` as a cyclotomic value (conductor 1)."""
    return CyclotomicNumber(1, (Fraction(value),))


def zeta(n: int, k: int = 1) -> CyclotomicNumber:
    """The k-th power of the canonical primitive n-th root of unity."""
    if n < 1:
        raise ValueError(f"E({n}) is not a root of unity")
    k %= n
    vec = [0] * (k + 1)
    vec[k] = 1
    return CyclotomicNumber._from_int_vec(n, vec, 1)


def as_root_of_unity(a: CyclotomicNumber) -> Optional[tuple[int, int]]:
    """If a is a root of unity, return (r, k) with a = zeta(r)^k, r the exact
    multiplicative order and 0 <= k < r (so gcd(k, r) = 1 unless r = 1).
    Returns None for values that are not roots of unity."""
    if a.is_zero:
        return None
    limit = _lcm(2, a.conductor)
    if not (a**limit).is_one:
        # The torsion units of Q(zeta_N) form a cyclic group of order lcm(2, N).
        return None
    order = next(r for r in divisors(limit) if (a**r).is_one)
    if order == 1:
        return (1, 0)
    m = _lcm(a.conductor, order)
    target = a.embed(m)
    root = zeta(order).embed(m)
    w = root
    for k in range(1, order):
        if w == target:
            return (order, k)
        w = w * root
    raise ArithmeticError("order-finding inconsistency")  # pragma: no cover


# -- parser ------------------------------------------------------------------


class CycloParseError(ValueError):
    """Syntax or semantic error in a cyclotomic expression, with position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class _Parser:
    # Grammar:
    #   expr   := ['+'|'-'] term (('+'|'-') term)*
    #   term   := factor (('*'|'/') factor)*
    #   factor := base ('^' int)?
    #   base   := posint | 'E(' posint ')' | '(' expr ')'
    # A leading sign negates the first term.  "p/q" comes out of term-level
    # division and is exact either way.

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> CyclotomicNumber:
        value = self._expr()
        self._skip_ws()
        if self.pos != len(self.text):
            raise CycloParseError("unexpected trailing input", self.pos)
        return value

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expr(self) -> CyclotomicNumber:
        negate = False
        ch = self._peek()
        if ch in "+-":
            negate = ch == "-"
            self.pos += 1
        value = self._term()
        if negate:
            value = -value
        while True:
            ch = self._peek()
            if ch == "+":
                self.pos += 1
                value = value + self._term()
            elif ch == "-":
                self.pos += 1
                value = value - self._term()
            else:
                return value

    def _term(self) -> CyclotomicNumber:
        value = self._factor()
        while True:
            ch = self._peek()
            if ch == "*":
                self.pos += 1
                value = value * self._factor()
            elif ch == "/":
                at = self.pos
                self.pos += 1
                divisor = self._factor()
                if divisor.is_zero:
                    raise CycloParseError("division by zero", at)
                value = value / divisor
            else:
                return value

    def _factor(self) -> CyclotomicNumber:
        value = self._base()
        if self._peek() == "^":
            at = self.pos
            self.pos += 1
            exponent = self._int(signed=True)
            if exponent < 0 and value.is_zero:
                raise CycloParseError("zero raised to a negative power", at)
            value = value**exponent
        return value

    def _base(self) -> CyclotomicNumber:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            value = self._expr()
            if self._peek() != ")":
                raise CycloParseError("expected ')'", self.pos)
            self.pos += 1
            return value
        if ch == "E":
            self.pos += 1
            if self._peek() != "(":
                raise CycloParseError("expected '(' after E", self.pos)
            self.pos += 1
            at = self.pos
            n = self._int(signed=False)
            if n < 1:
                raise CycloParseError(f"E({n}) is not a root of unity", at)
            if self._peek() != ")":
                raise CycloParseError("expected ')'", self.pos)
            self.pos += 1
            return zeta(n)
        if ch.isdigit():
            return rational(self._int(signed=False))
        raise CycloParseError("expected a number, E(n), or '('", self.pos)

    def _int(self, signed: bool) -> int:
        self._skip_ws()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            raise CycloParseError("expected an integer", start)
        return int(self.text[start : self.pos])


def parse_cyclotomic(text: str) -> CyclotomicNumber:
    """Parse an exact cyclotomic expression such as "1/2-E(3)^2"."""
    return _Parser(text).parse()
