"""Truncated q-expansions over an exact scalar field.

A :class:`QSeries` holds the coefficients c_0 .. c_{P-1}; coefficients at
exponents >= P are unknown rather than zero, and every operation propagates
the smallest precision of its inputs.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .exactnum import scalar_to_json

_ZERO = Fraction(0)


class NonUnitDivisor(ArithmeticError):
    """Division by a series whose valuation exceeds that of the dividend."""


def _all_rational(coeffs) -> bool:
    return all(type(c) is Fraction for c in coeffs)


def _int_convolve(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        lim = n - i
        for j, y in enumerate(b[:lim]):
            if y:
                out[i + j] += x * y
    return out


def _to_ints(coeffs):
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in coeffs], den


class QSeries:
    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs, prec: int | None = None):
        coeffs = [c if not isinstance(c, int) else Fraction(c) for c in coeffs]
        if prec is None:
            prec = len(coeffs)
        if prec < 1:
            raise ValueError("precision must be at least 1")
        if len(coeffs) < prec:
            coeffs = coeffs + [_ZERO] * (prec - len(coeffs))
        self.coeffs = coeffs[:prec]
        self.prec = prec

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, prec: int) -> "QSeries":
        return cls([], prec)

    @classmethod
    def one(cls, prec: int) -> "QSeries":
        return cls([Fraction(1)], prec)

    @classmethod
    def constant(cls, c, prec: int) -> "QSeries":
        return cls([c], prec)

    @classmethod
    def q(cls, prec: int) -> "QSeries":
        return cls([_ZERO, Fraction(1)], prec)

    @classmethod
    def from_dict(cls, terms: dict, prec: int) -> "QSeries":
        c = [_ZERO] * prec
        for n, a in terms.items():
            if n < prec:
                c[n] = Fraction(a) if isinstance(a, int) else a
        return cls(c, prec)

    # -- access -----------------------------------------------------------
    def __getitem__(self, n: int):
        if n >= self.prec:
            raise IndexError(f"coefficient q^{n} unknown at precision {self.prec}")
        return self.coeffs[n]

    def __len__(self):
        return self.prec

    def valuation(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def truncate(self, prec: int) -> "QSeries":
        return QSeries(self.coeffs[:prec], min(prec, self.prec))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QSeries):
            c = list(self.coeffs)
            c[0] = c[0] + other
            return QSeries(c, self.prec)
        p = min(self.prec, other.prec)
        return QSeries([self.coeffs[i] + other.coeffs[i] for i in range(p)], p)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "QSeries":
        return QSeries([c * s for c in self.coeffs], self.prec)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        p = min(self.prec, other.prec)
        a, b = self.coeffs[:p], other.coeffs[:p]
        if _all_rational(a) and _all_rational(b):
            ia, da = _to_ints(a)
            ib, db = _to_ints(b)
            prodint = _int_convolve(ia, ib, p)
            d = da * db
            return QSeries([Fraction(x, d) for x in prodint], p)
        out = [_ZERO] * p
        for i, x in enumerate(a):
            if not x:
                continue
            for j in range(p - i):
                y = b[j]
                if y:
                    out[i + j] = out[i + j] + x * y
        return QSeries(out, p)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = QSeries.one(self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "QSeries":
        c0 = self.coeffs[0]
        if not c0:
            raise NonUnitDivisor("constant term is zero")
        p = self.prec
        inv = [_ZERO] * p
        inv[0] = 1 / c0 if not isinstance(c0, Fraction) else Fraction(1) / c0
        for n in range(1, p):
            acc = _ZERO
            for j in range(1, n + 1):
                if self.coeffs[j]:
                    acc = acc + self.coeffs[j] * inv[n - j]
            inv[n] = -acc * inv[0]
        return QSeries(inv, p)

    def __truediv__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(Fraction(1) / other if isinstance(other, int) else 1 / other)
        vb = other.valuation()
        if vb is None:
            raise NonUnitDivisor("division by the zero series")
        va = self.valuation()
        if va is None:
            va = self.prec
        if vb > va:
            raise NonUnitDivisor(f"valuation {vb} of divisor exceeds {va}")
        a = self.shift_down(vb)
        b = other.shift_down(vb)
        return a * b.inverse()

    def shift_down(self, v: int) -> "QSeries":
        """Divide by q^v (the first v coefficients must vanish)."""
        if v == 0:
            return self
        if any(self.coeffs[:v]):
            raise NonUnitDivisor("series not divisible by q^%d" % v)
        return QSeries(self.coeffs[v:], self.prec - v)

    def shift_up(self, v: int) -> "QSeries":
        """Multiply by q^v."""
        return QSeries([_ZERO] * v + self.coeffs, self.prec + v)

    def dilate(self, d: int) -> "QSeries":
        return qs_dilate(self, d)

    def derive(self, times: int = 1) -> "QSeries":
        c = list(self.coeffs)
        for n in range(self.prec):
            if c[n]:
                c[n] = c[n] * n**times
        return QSeries(c, self.prec)

    def map(self, fn) -> "QSeries":
        return QSeries([fn(c) for c in self.coeffs], self.prec)

    # -- comparison -------------------------------------------------------
    def agrees(self, other: "QSeries") -> bool:
        p = min(self.prec, other.prec)
        return all(self.coeffs[i] == other.coeffs[i] for i in range(p))

    def __eq__(self, other):
        if isinstance(other, QSeries):
            return self.agrees(other)
        if other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def to_json(self) -> dict:
        return {"prec": self.prec, "coeffs": [scalar_to_json(c) for c in self.coeffs]}

    def __repr__(self):
        terms = []
        for n, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c})*q^{n}" if n else f"({c})")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(q^{self.prec})"


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def qs_div(a: QSeries, b: QSeries) -> QSeries:
    return a / b


def qs_dilate(a: QSeries, d: int) -> QSeries:
    """Substitute q -> q^d; the precision is kept (the gaps are known zeros)."""
    if d < 1:
        raise ValueError("dilation factor must be >= 1")
    if d == 1:
        return a
    c = [_ZERO] * a.prec
    for n in range(0, (a.prec - 1) // d + 1):
        c[n * d] = a.coeffs[n]
    return QSeries(c, a.prec)


def qs_derive(a: QSeries) -> QSeries:
    return a.derive()


def sigma(r: int, n: int) -> int:
    return sum(d**r for d in range(1, n + 1) if n % d == 0)


def sigma_series(r: int, prec: int) -> QSeries:
    """sum_{n>=1} sigma_r(n) q^n, computed by a divisor sieve."""
    c = [0] * prec
    for d in range(1, prec):
        dr = d**r
        for n in range(d, prec, d):
            c[n] += dr
    return QSeries([Fraction(x) for x in c], prec)


def eta_product(exponents: dict[int, int], prec: int) -> QSeries:
    """prod_d prod_n (1-q^{dn})^{e_d}, without the q^{sum d e_d/24} prefactor."""
    result = QSeries.one(prec)
    for d, e in exponents.items():
        # Euler's pentagonal expansion of prod (1-q^n), then dilate
        euler = [0] * prec
        k = 0
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 >= prec and g2 >= prec:
                break
            s = -1 if k % 2 else 1
            if g1 < prec:
                euler[g1] += s
            if k and g2 < prec:
                euler[g2] += s
            k += 1
        base = qs_dilate(QSeries([Fraction(x) for x in euler], prec), d)
        result = result * (base ** e if e >= 0 else base.inverse() ** (-e))
    return result
