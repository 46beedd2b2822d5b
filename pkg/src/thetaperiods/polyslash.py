"""Laurent polynomials in X (and X, Y) with the weight -w slash action.

The one-variable objects are period polynomials and their hat-V cousins
(exponents -1 .. w+1); the two-variable objects carry either scalar or
q-series coefficients.  Matrices act by

    P |_{-w} g  (X) = det(g)^{-w/2} (cX + d)^w P((aX + b)/(cX + d)),

optionally twisted by a character value eps^e where e counts the
Atkin-Lehner letters of the word.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt

from .arith import Character, divisors, prime_factors

_ZERO = Fraction(0)
_ONE = Fraction(1)


class NonPolynomialResult(ArithmeticError):
    """A slash image left the permitted exponent range."""


class LaurentTailPresent(ValueError):
    """An operation defined on V_w met an X^-1 or X^{w+1} term."""


class OddWeight(ValueError):
    """Half-integral powers of a divisor would be needed (k odd)."""


class OddHalfPower(ArithmeticError):
    """An unresolved square root of a determinant survived."""


def _is_zero(c) -> bool:
    if hasattr(c, "is_zero") and not isinstance(c, Fraction):
        z = c.is_zero
        return z() if callable(z) else bool(z)
    return not c


class LaurentPoly:
    """A finite Laurent polynomial sum c_n X^n stored as {n: c_n}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        for n, c in (terms or {}).items():
            if isinstance(c, int):
                c = Fraction(c)
            if not _is_zero(c):
                t[int(n)] = c
        self.terms = t

    @classmethod
    def monomial(cls, n: int, c=_ONE) -> "LaurentPoly":
        return cls({n: c})

    @classmethod
    def from_coeffs(cls, coeffs, start: int = 0) -> "LaurentPoly":
        return cls({start + i: c for i, c in enumerate(coeffs)})

    # -- structure --------------------------------------------------------
    def __getitem__(self, n: int):
        return self.terms.get(n, _ZERO)

    def exponents(self):
        return sorted(self.terms)

    def min_exp(self):
        return min(self.terms) if self.terms else None

    def max_exp(self):
        return max(self.terms) if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def in_space(self, w: int, hat: bool = False) -> bool:
        lo, hi = (-1, w + 1) if hat else (0, w)
        return all(lo <= n <= hi for n in self.terms)

    def check_space(self, w: int, hat: bool = False) -> "LaurentPoly":
        if not self.in_space(w, hat):
            if hat:
                raise NonPolynomialResult(f"exponents {self.exponents()} outside [-1, {w + 1}]")
            raise LaurentTailPresent(f"exponents {self.exponents()} outside [0, {w}]")
        return self

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        t = dict(self.terms)
        for n, c in other.terms.items():
            t[n] = t[n] + c if n in t else c
        return LaurentPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({n: -c for n, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly({n: c * other for n, c in self.terms.items()})
        t = {}
        for n, a in self.terms.items():
            for m, b in other.terms.items():
                t[n + m] = t[n + m] + a * b if (n + m) in t else a * b
        return LaurentPoly(t)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = LaurentPoly({0: _ONE})
        for _ in range(e):
            out = out * self
        return out

    def __truediv__(self, s):
        return LaurentPoly({n: c / s for n, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other}) if not _is_zero(other) else LaurentPoly()
        return (self - other).terms == {}

    __hash__ = None

    def subs_scale(self, s) -> "LaurentPoly":
        """P(s X)."""
        return LaurentPoly({n: c * (s**n if n >= 0 else Fraction(1) / s ** (-n))
                            for n, c in self.terms.items()})

    def reflect(self) -> "LaurentPoly":
        """P(-X)."""
        return LaurentPoly({n: (c if n % 2 == 0 else -c) for n, c in self.terms.items()})

    def even_part(self) -> "LaurentPoly":
        return LaurentPoly({n: c for n, c in self.terms.items() if n % 2 == 0})

    def odd_part(self) -> "LaurentPoly":
        return LaurentPoly({n: c for n, c in self.terms.items() if n % 2})

    def map_coeffs(self, fn) -> "LaurentPoly":
        return LaurentPoly({n: fn(c) for n, c in self.terms.items()})

    def evaluate(self, x):
        acc = _ZERO
        for n, c in self.terms.items():
            acc = acc + c * (x**n if n >= 0 else Fraction(1) / x ** (-n))
        return acc

    def leading(self):
        return self.terms[self.max_exp()] if self.terms else _ZERO

    def __repr__(self):
        return f"LaurentPoly({render_poly(self)})"

    def __str__(self):
        return render_poly(self)


@dataclass(frozen=True)
class GroupWord:
    """An integer matrix ((a, b), (c, d)) with det > 0 and a character exponent."""

    a: int
    b: int
    c: int
    d: int
    char_exp: int = 0

    def __post_init__(self):
        if self.det <= 0:
            raise ValueError("determinant must be positive")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @classmethod
    def in_normalizer(cls, a, b, c, d, p: int) -> "GroupWord":
        """Word of Gamma_0^*(p); the W-letter parity is read off from det mod squares."""
        det = a * d - b * c
        v = 0
        while det % p == 0:
            det //= p
            v += 1
        return cls(a, b, c, d, v % 2)

    def __matmul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.a * other.a + self.b * other.c,
                         self.a * other.b + self.b * other.d,
                         self.c * other.a + self.d * other.c,
                         self.c * other.b + self.d * other.d,
                         self.char_exp + other.char_exp)

    def __pow__(self, n: int) -> "GroupWord":
        out = GroupWord(1, 0, 0, 1)
        for _ in range(n):
            out = out @ self
        return out

    def reduced(self) -> "GroupWord":
        """Divide out the content of the matrix (the action is projective)."""
        g = gcd(gcd(self.a, self.b), gcd(self.c, self.d))
        return GroupWord(self.a // g, self.b // g, self.c // g, self.d // g, self.char_exp)


IDENTITY = GroupWord(1, 0, 0, 1)


def T_word() -> GroupWord:
    return GroupWord(1, 1, 0, 1)


def T_inv_word() -> GroupWord:
    return GroupWord(1, -1, 0, 1)


def W_word(N: int) -> GroupWord:
    return GroupWord(0, -1, N, 0, 1)


def U_word(p: int) -> GroupWord:
    """U_p = T W_p."""
    return GroupWord(p, -1, p, 0, 1)


def U_tilde_word(p: int) -> GroupWord:
    """U~_p = T^{-1} W_p."""
    return GroupWord(-p, -1, p, 0, 1)


def _det_power(det: int, w: int) -> Fraction:
    """det^{-w/2} as an exact rational."""
    if w % 2 == 0:
        e = w // 2
        return Fraction(1, det**e) if e >= 0 else Fraction(det ** (-e))
    r = isqrt(det)
    if r * r != det:
        raise OddHalfPower(f"sqrt({det}) would survive at odd w={w}")
    return Fraction(1, r**w) if w >= 0 else Fraction(r ** (-w))


def _linear_power(a: int, b: int, e: int) -> LaurentPoly:
    """(aX + b)^e for any integer e, provided it is a Laurent polynomial."""
    if e >= 0:
        return LaurentPoly({i: Fraction(comb(e, i) * a**i * b ** (e - i)) for i in range(e + 1)})
    if b == 0:
        return LaurentPoly({e: Fraction(1, a ** (-e)) if a > 0 or (-e) % 2 == 0 else Fraction(-1, abs(a) ** (-e))})
    if a == 0:
        return LaurentPoly({0: Fraction(1, b ** (-e)) if b > 0 or (-e) % 2 == 0 else Fraction(-1, abs(b) ** (-e))})
    raise NonPolynomialResult(f"({a}X+{b})^{e} is not a Laurent polynomial")


def slash(P: LaurentPoly, g: GroupWord, w: int, eps: int = 1, hat: bool | None = None) -> LaurentPoly:
    """P |_{-w, eps} g, with the exponent range of V_w (or hat-V_w) enforced."""
    if hat is None:
        hat = not P.in_space(w)
    P.check_space(w, hat)
    out = LaurentPoly()
    for n, c in P.terms.items():
        term = _linear_power(g.a, g.b, n) * _linear_power(g.c, g.d, w - n)
        out = out + term * c
    scale = _det_power(g.det, w) * (eps ** (g.char_exp % 2))
    out = out * scale
    if not out.in_space(w, hat):
        raise NonPolynomialResult(f"image exponents {out.exponents()} leave the space")
    return out


def pair_vw(P: LaurentPoly, Q: LaurentPoly, w: int):
    """The invariant pairing (X^r, X^s) = (-1)^r delta_{r+s,w} / binom(w, r)."""
    P.check_space(w)
    Q.check_space(w)
    acc = _ZERO
    for r, c in P.terms.items():
        s = w - r
        if s in Q.terms:
            term = c * Q.terms[s] / comb(w, r)
            acc = acc + (term if r % 2 == 0 else -term)
    return acc


def lambda_poly(P: LaurentPoly, N2: int, eps2: Character, k: int) -> LaurentPoly:
    """sum_{d | N2} eps2(d) d^{1-k/2} P(dX)."""
    if k % 2:
        raise OddWeight("the level-raising map needs even weight")
    out = LaurentPoly()
    for d in divisors(N2):
        e = 1 - k // 2
        f = Fraction(d) ** e
        out = out + P.subs_scale(Fraction(d)) * (f * eps2(d))
    return out


def apply_group_ring(P: LaurentPoly, element, w: int, eps: int = 1) -> LaurentPoly:
    """sum_i c_i P|g_i for element = [(c_i, g_i), ...]."""
    out = LaurentPoly()
    for c, g in element:
        out = out + slash(P, g, w, eps) * c
    return out


def A_p_element(p: int):
    """sum_{j=1}^{p-1} (p-j)(U~_p^j - U_p^j)."""
    U, Ut = U_word(p), U_tilde_word(p)
    el = []
    for j in range(1, p):
        el.append((Fraction(p - j), Ut**j))
        el.append((Fraction(-(p - j)), U**j))
    return el


def cocycle_sum(P: LaurentPoly, p: int, w: int, eps: int) -> LaurentPoly:
    """sum_{j<2p} P |_{-w,eps} U_p^j."""
    U = U_word(p)
    return apply_group_ring(P, [(_ONE, U**j) for j in range(2 * p)], w, eps)


def eps_free_words(p: int) -> list[tuple[int, GroupWord]]:
    """(sign, gamma_j) with gamma_j = U^j (j even) or W^{-1} U^j (j odd).

    All gamma_j lie in Gamma_0(p), so sum_j sign_j r|gamma_j = 0 holds
    for the untwisted action on any r with r|(1 + eps W) = 0, whatever eps.
    """
    U, W = U_word(p), W_word(p)
    out = []
    for j in range(2 * p):
        g = U**j if j % 2 == 0 else W @ (U**j)
        g = GroupWord(g.a, g.b, g.c, g.d, 0).reduced()
        out.append((1 if j % 2 == 0 else -1, g))
    return out


# -- two-variable objects ---------------------------------------------------

class BiLaurent:
    """sum c_{ij} X^i Y^j with scalar or q-series coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        for key, c in (terms or {}).items():
            if isinstance(c, int):
                c = Fraction(c)
            if not _is_zero(c):
                t[(int(key[0]), int(key[1]))] = c
        self.terms = t

    @classmethod
    def from_product(cls, P: LaurentPoly, Q: LaurentPoly) -> "BiLaurent":
        return cls({(i, j): a * b for i, a in P.terms.items() for j, b in Q.terms.items()})

    def __getitem__(self, key):
        return self.terms.get(key)

    def keys(self):
        return sorted(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        t = dict(self.terms)
        for k_, c in other.terms.items():
            t[k_] = t[k_] + c if k_ in t else c
        return BiLaurent(t)

    def __neg__(self):
        return BiLaurent({k_: -c for k_, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "BiLaurent":
        return BiLaurent({k_: c * s for k_, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, BiLaurent):
            t = {}
            for (i, j), a in self.terms.items():
                for (k_, l), b in other.terms.items():
                    key = (i + k_, j + l)
                    t[key] = t[key] + a * b if key in t else a * b
            return BiLaurent(t)
        return self.scale(other)

    __rmul__ = __mul__

    def swap(self) -> "BiLaurent":
        return BiLaurent({(j, i): c for (i, j), c in self.terms.items()})

    def even_odd(self) -> "BiLaurent":
        """(C(X,Y) + C(-X,Y))/2: keep even X-degree terms (and odd Y-degree ones)."""
        return BiLaurent({(i, j): c for (i, j), c in self.terms.items() if i % 2 == 0 and j % 2})

    def reflect_x(self) -> "BiLaurent":
        return BiLaurent({(i, j): (c if i % 2 == 0 else -c) for (i, j), c in self.terms.items()})

    def map_coeffs(self, fn) -> "BiLaurent":
        return BiLaurent({k_: fn(c) for k_, c in self.terms.items()})

    def x_exponents(self):
        return sorted({i for i, _ in self.terms})

    def y_exponents(self):
        return sorted({j for _, j in self.terms})

    def x_range_ok(self, lo: int, hi: int) -> bool:
        return all(lo <= i <= hi and lo <= j <= hi for i, j in self.terms)

    def y_slice(self, j: int) -> LaurentPoly:
        return LaurentPoly({i: c for (i, jj), c in self.terms.items() if jj == j})

    def equals(self, other: "BiLaurent") -> bool:
        """Coefficientwise equality (q-series compared up to common precision)."""
        d = self - other
        return all(_is_zero(c) for c in d.terms.values())

    def __repr__(self):
        return f"BiLaurent({len(self.terms)} terms)"


def render_poly(P: LaurentPoly, var: str = "X") -> str:
    """Render in the style 8X^6-34X^4+17X^2-1 (descending degree)."""
    if not P.terms:
        return "0"
    parts = []
    for n in sorted(P.terms, reverse=True):
        c = P.terms[n]
        if isinstance(c, Fraction):
            neg = c < 0
            mag = -c if neg else c
            cs = str(mag)
            if "/" in cs:
                cs = f"({cs})"
        else:
            neg, cs = False, f"({c})"
        if n == 0:
            mono = cs
        else:
            x = var if n == 1 else f"{var}^{n}"
            mono = x if cs == "1" else f"{cs}{x}"
        parts.append(("-" if neg else "+") + mono)
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def render_bivariate(B: BiLaurent) -> str:
    if not B.terms:
        return "0"
    parts = []
    for (i, j) in sorted(B.terms, key=lambda t: (-t[0], -t[1])):
        c = B.terms[(i, j)]
        mono = ""
        if i:
            mono += "X" if i == 1 else f"X^{i}"
        if j:
            mono += "Y" if j == 1 else f"Y^{j}"
        parts.append(f"({c}){mono}")
    return " + ".join(parts)


def primitive_part(P: LaurentPoly) -> tuple[Fraction, LaurentPoly]:
    """(c, P0) with P = c*P0, P0 integral, content 1 and positive leading coefficient."""
    if not P.terms:
        return Fraction(0), P
    from math import lcm
    den = 1
    for c in P.terms.values():
        den = lcm(den, c.denominator)
    nums = [int(c * den) for c in P.terms.values()]
    g = 0
    for x in nums:
        g = gcd(g, x)
    c = Fraction(g, den)
    if P.leading() < 0:
        c = -c
    return c, P / c
