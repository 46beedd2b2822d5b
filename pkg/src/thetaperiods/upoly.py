"""Dense univariate polynomials over an arbitrary exact ring.

Coefficients may be Fractions, QuadElems or even other ``UPoly`` values, so
nesting gives Q[a][x] (used for formal Hecke eigenvalues) without any extra
machinery.  This is deliberately minimal: ring operations, evaluation,
composition with a linear map and exact division by a monic-able divisor.
"""

from __future__ import annotations

from fractions import Fraction


class UPoly:
    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.c = c

    @classmethod
    def const(cls, a):
        return cls([a])

    @classmethod
    def x(cls):
        return cls([Fraction(0), Fraction(1)])

    @classmethod
    def monomial(cls, n: int, a=Fraction(1)):
        return cls([Fraction(0)] * n + [a])

    def degree(self) -> int:
        return len(self.c) - 1

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else Fraction(0)

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly([other])
        return self.c == other.c

    def __hash__(self):
        return hash(tuple(self.c))

    def _coerce(self, other):
        return other if isinstance(other, UPoly) else UPoly([other])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.c), len(o.c))
        return UPoly([self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            return UPoly([a * other for a in self.c])
        if not self.c or not other.c:
            return UPoly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = UPoly([Fraction(1)])
        for _ in range(n):
            result = result * self
        return result

    def __call__(self, x):
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def scale_var(self, s):
        """p(s*x)."""
        out, f = [], Fraction(1)
        for a in self.c:
            out.append(a * f)
            f = f * s
        return UPoly(out)

    def map_coeffs(self, fn):
        return UPoly([fn(a) for a in self.c])

    def truncate(self, n: int):
        return UPoly(self.c[:n])

    def divmod(self, other: "UPoly"):
        """Euclidean division; the leading coefficient of ``other`` must be invertible."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, len(self.c) - len(other.c) + 1)
        r = list(self.c)
        lead = other.c[-1]
        for i in range(len(q) - 1, -1, -1):
            coef = r[i + len(other.c) - 1] / lead
            q[i] = coef
            if coef:
                for j, b in enumerate(other.c):
                    r[i + j] = r[i + j] - coef * b
        return UPoly(q), UPoly(r[: len(other.c) - 1])

    def __repr__(self):
        return f"UPoly({self.c!r})"
