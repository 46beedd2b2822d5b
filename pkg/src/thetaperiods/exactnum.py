"""Exact scalars: rationals and elements of real quadratic fields Q(sqrt D).

Rationals are plain :class:`fractions.Fraction` values.  Quadratic elements
are ``a + b*sqrt(D)`` with rational ``a, b`` and a squarefree tag ``D > 1``.
Every module downstream is written against the small common interface of
these two types (ring operations, ``conj`` and ``is_zero``), so a
computation can start over Q and be promoted to Q(sqrt D) half way.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

Rational = Fraction

FACTOR_BOUND = 10**6


class MismatchedField(ValueError):
    """Raised when elements of Q(sqrt D1) and Q(sqrt D2) are combined."""


class IrrationalBeyondBound(ValueError):
    """Raised when a discriminant cannot be factored below FACTOR_BOUND."""


class NegativeDiscriminant(ValueError):
    """Raised for quadratics whose roots are not real (unsupported)."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


class QuadElem:
    """An element a + b*sqrt(D) of the real quadratic field Q(sqrt D)."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b, D: int):
        if D <= 1:
            raise ValueError("D must be a squarefree integer > 1")
        self.a = _frac(a)
        self.b = _frac(b)
        self.D = D

    # -- coercion -------------------------------------------------------
    def _lift(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.D != self.D:
                raise MismatchedField(f"Q(sqrt {self.D}) vs Q(sqrt {other.D})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(other, 0, self.D)
        return NotImplemented

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.a * other, self.b * other, self.D)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.a * o.a + self.D * self.b * o.b,
                        self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.D * self.b * self.b

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt %d)" % self.D)
        return QuadElem(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadElem(self.a / other, self.b / other, self.D)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadElem(1, 0, self.D)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- field structure ------------------------------------------------
    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.D)

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return self.D == other.D and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __repr__(self):
        return f"QuadElem({self.a}, {self.b}, {self.D})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt({self.D})"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*sqrt({self.D})"


Scalar = Union[Fraction, QuadElem]


def quad_arith(x: QuadElem, y: QuadElem, op: str) -> QuadElem:
    """Apply ``op`` in {add, sub, mul, div} to two elements of one field."""
    if isinstance(x, QuadElem) and isinstance(y, QuadElem) and x.D != y.D:
        raise MismatchedField(f"Q(sqrt {x.D}) vs Q(sqrt {y.D})")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if is_zero(y):
            raise ZeroDivisionError("division by zero")
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def conj(x):
    """Galois conjugation; the identity on rationals."""
    if isinstance(x, QuadElem):
        return x.conjugate()
    return x


def is_zero(x) -> bool:
    return not x


def sqrt_of(D: int) -> QuadElem:
    return QuadElem(0, 1, D)


def squarefree_decomposition(n: int, bound: int = FACTOR_BOUND) -> tuple[int, int]:
    """Write n > 0 as s*s*D with D squarefree, trial dividing up to ``bound``."""
    if n <= 0:
        raise ValueError("n must be positive")
    s, D = 1, 1
    m = n
    p = 2
    while p <= bound and p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            s *= p ** (e // 2)
            if e % 2:
                D *= p
        p += 1 if p == 2 else 2
    if m > 1:
        if p * p > m:
            D *= m  # what is left is prime
        else:
            r = isqrt(m)
            if r * r == m:
                s *= r
            else:
                raise IrrationalBeyondBound(
                    f"cofactor {m} of {n} not factored below {bound}")
    return s, D


def sqrt_rational(x: Fraction) -> Scalar:
    """Exact square root of a non-negative rational, in Q or Q(sqrt D)."""
    x = _frac(x)
    if x < 0:
        raise NegativeDiscriminant(f"{x} has no real square root")
    if x == 0:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    s, D = squarefree_decomposition(num * den)
    if D == 1:
        return Fraction(s, den)
    return QuadElem(0, Fraction(s, den), D)


def solve_quadratic(c2, c1, c0) -> tuple[Scalar, Scalar]:
    """Roots of c2*x^2 + c1*x + c0, exact, larger root first when irrational.

    Rational roots come back as Fractions, irrational ones as a conjugate
    pair of QuadElem values with a squarefree tag.
    """
    c2, c1, c0 = _frac(c2), _frac(c1), _frac(c0)
    if c2 == 0:
        raise ValueError("leading coefficient must be nonzero")
    disc = c1 * c1 - 4 * c2 * c0
    r = sqrt_rational(disc)
    r1 = (-c1 + r) / (2 * c2)
    r2 = (-c1 - r) / (2 * c2)
    return r1, r2


def scalar_to_json(x):
    if isinstance(x, QuadElem):
        return {"a": scalar_to_json(x.a), "b": scalar_to_json(x.b), "D": x.D}
    x = _frac(x)
    return f"{x.numerator}/{x.denominator}"


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, dict):
        return QuadElem(scalar_from_json(obj["a"]), scalar_from_json(obj["b"]), int(obj["D"]))
    return Fraction(obj)


def common_field(values) -> int | None:
    """The D shared by the QuadElem values in ``values`` (None if all rational)."""
    D = None
    for v in values:
        if isinstance(v, QuadElem) and v.b != 0:
            if D is None:
                D = v.D
            elif D != v.D:
                raise MismatchedField(f"Q(sqrt {D}) vs Q(sqrt {v.D})")
    return D
