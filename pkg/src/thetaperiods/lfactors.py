"""Local Euler factors and their Hadamard (Rankin-Selberg) convolutions.

Everything lives in Q[a][x]: x stands for p^{-s} and ``a`` is an optional
formal Hecke eigenvalue a_p.  Coefficients are always ``UPoly`` values in
``a``, so an identity that is checked here holds for every a_p at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import prime_factors
from .upoly import UPoly

FORMAL = "formal"


def _ap(c) -> UPoly:
    """Coerce a scalar (or an element of Q[a]) into Q[a]."""
    if isinstance(c, UPoly):
        return c
    return UPoly([Fraction(c)])


def _xpoly(coeffs) -> UPoly:
    return UPoly([_ap(c) for c in coeffs])


A_SYMBOL = UPoly([Fraction(0), Fraction(1)])  # the formal a_p


def _ppow(p: int, e: int) -> Fraction:
    return Fraction(p) ** e


def _is_prime(p: int) -> bool:
    return p >= 2 and prime_factors(p) == [p]


@dataclass
class LocalSeries:
    """c_0 + c_1 x + ... + c_{order-1} x^{order-1}, coefficients in Q[a]."""

    coeffs: list[UPoly]

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> UPoly:
        return self.coeffs[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalSeries) or other.order != self.order:
            return NotImplemented if not isinstance(other, LocalSeries) else False
        return all(x == y for x, y in zip(self.coeffs, other.coeffs))

    def truncate(self, n: int) -> "LocalSeries":
        return LocalSeries(self.coeffs[:n])

    def scale_var(self, s) -> "LocalSeries":
        """B(s x)."""
        out, f = [], Fraction(1)
        for c in self.coeffs:
            out.append(c * f)
            f = f * s
        return LocalSeries(out)

    def specialize(self, a_value) -> list[Fraction]:
        return [c(Fraction(a_value)) for c in self.coeffs]

    @classmethod
    def from_scalars(cls, coeffs) -> "LocalSeries":
        return cls([_ap(c) for c in coeffs])


def geometric(alpha, order: int) -> LocalSeries:
    """1/(1 - alpha x)."""
    return LocalSeries([_ap(Fraction(alpha) ** i if not isinstance(alpha, UPoly) else alpha**i)
                        for i in range(order)])


def hadamard(a: LocalSeries, b: LocalSeries) -> LocalSeries:
    """Coefficientwise product, truncated to the shorter order."""
    n = min(a.order, b.order)
    return LocalSeries([a[i] * b[i] for i in range(n)])


@dataclass
class EulerFactor:
    """num(x)/den(x) with den(0) = 1.  ``meta`` records p, k, character values and so on."""

    num: UPoly
    den: UPoly
    p: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.den or self.den[0] != _ap(1):
            raise ValueError("denominator must have constant term 1")

    def expand(self, order: int) -> LocalSeries:
        """Power series by long division: s_n = num_n - sum_{j>=1} den_j s_{n-j}."""
        out: list[UPoly] = []
        for n in range(order):
            acc = _ap(self.num[n])
            for j in range(1, min(n, self.den.degree()) + 1):
                acc = acc - _ap(self.den[j]) * out[n - j]
            out.append(acc)
        return LocalSeries(out)

    def __mul__(self, other: "EulerFactor") -> "EulerFactor":
        return EulerFactor(self.num * other.num, self.den * other.den, self.p, dict(self.meta))

    def __add__(self, other: "EulerFactor") -> "EulerFactor":
        return EulerFactor(self.num * other.den + other.num * self.den, self.den * other.den,
                           self.p, dict(self.meta))

    def multiply_poly(self, poly: UPoly) -> "EulerFactor":
        return EulerFactor(self.num * poly, self.den, self.p, dict(self.meta))

    def divide_poly(self, poly: UPoly) -> "EulerFactor":
        """self / poly, with poly(0) = 1 so the result is still normalized."""
        return EulerFactor(self.num, self.den * poly, self.p, dict(self.meta))

    def scale_var(self, s) -> "EulerFactor":
        """L(s x)."""
        return EulerFactor(self.num.scale_var(Fraction(s)), self.den.scale_var(Fraction(s)),
                           self.p, dict(self.meta))

    def scale(self, c) -> "EulerFactor":
        return EulerFactor(self.num * _ap(c), self.den, self.p, dict(self.meta))

    def equals(self, other: "EulerFactor") -> bool:
        """Exact equality of rational functions by cross-multiplication."""
        return self.num * other.den == other.num * self.den

    def evaluate(self, x) -> tuple[UPoly, UPoly]:
        """(num(x), den(x)) as elements of Q[a]; kept apart so nothing is divided."""
        return _ap(self.num(Fraction(x))), _ap(self.den(Fraction(x)))

    def is_rational(self) -> bool:
        """True when no coefficient involves the formal a_p."""
        return all(_ap(c).degree() <= 0 for c in self.num.c + self.den.c)


def _one(p: int, **meta) -> EulerFactor:
    return EulerFactor(_xpoly([1]), _xpoly([1]), p, meta)


def lf_build(kind: str, **params) -> EulerFactor:
    """Build one of the local factors.

    new:             p, k, a_p (number or FORMAL), ramified_sign (None when p does not divide N)
    old-step:        base (EulerFactor), k, eps2 -- multiplies by 1 + eps2 p^{k/2} x
    eisenstein-Geps: p, k1, k2, eps (None when p does not divide N)
    zeta-like:       p, factors = [(shift, power), ...] giving prod 1/(1 - p^shift x^power)
    """
    if kind == "new":
        p, k = params["p"], params["k"]
        _check(p, k)
        sign = params.get("ramified_sign")
        if sign is not None:
            _check_sign(sign)
            return EulerFactor(_xpoly([1]), _xpoly([1, sign * _ppow(p, k // 2 - 1)]), p,
                               {"kind": kind, "k": k, "eps": sign})
        a = params.get("a_p", FORMAL)
        ap = A_SYMBOL if a == FORMAL else _ap(a)
        return EulerFactor(_xpoly([1]), UPoly([_ap(1), -ap, _ap(_ppow(p, k - 1))]), p,
                           {"kind": kind, "k": k, "a_p": a})
    if kind == "old-step":
        base: EulerFactor = params["base"]
        k, e2 = params["k"], params["eps2"]
        _check(base.p, k)
        _check_sign(e2)
        out = base.multiply_poly(_xpoly([1, e2 * _ppow(base.p, k // 2)]))
        out.meta = {**base.meta, "kind": kind, "eps2": e2}
        return out
    if kind == "eisenstein-Geps":
        p, k1, k2 = params["p"], params["k1"], params["k2"]
        _check(p, k1)
        _check(p, k2)
        sign = params.get("eps")
        num = _xpoly([1]) if sign is None else _xpoly([1, sign * Fraction(p) ** ((k1 - k2) // 2)])
        if sign is not None:
            _check_sign(sign)
        den = _xpoly([1, -1]) * _xpoly([1, -_ppow(p, k1 - 1)])
        return EulerFactor(num, den, p, {"kind": kind, "k1": k1, "k2": k2, "eps": sign})
    if kind == "zeta-like":
        p = params["p"]
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        den = _xpoly([1])
        for shift, power in params["factors"]:
            den = den * _xpoly([1] + [0] * (power - 1) + [-Fraction(p) ** shift])
        return EulerFactor(_xpoly([1]), den, p, {"kind": kind, "factors": list(params["factors"])})
    raise ValueError(f"unknown factor kind {kind!r}")


def _check(p: int, k: int) -> None:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 2 or k % 2:
        raise ValueError("weight must be even and >= 2")


def _check_sign(e) -> None:
    if e not in (1, -1):
        raise ValueError("character value must be +1 or -1")


def level_one_eisenstein(p: int, k: int) -> EulerFactor:
    """L(G_k, x)_p = 1/((1-x)(1-p^{k-1}x))."""
    return lf_build("zeta-like", p=p, factors=[(0, 1), (k - 1, 1)])


def oldform_factor(p: int, k: int, N1: int, N2: int, eps1: dict, eps2: dict, a_p=FORMAL) -> EulerFactor:
    """L(f, x)_p for f = Lambda^{eps2}_{k,N2}(f1), f1 new of level N1."""
    new = lf_build("new", p=p, k=k, a_p=a_p, ramified_sign=eps1[p] if N1 % p == 0 else None)
    if N2 % p == 0:
        return lf_build("old-step", base=new, k=k, eps2=eps2[p])
    return new


def pade(series: LocalSeries, dnum: int, dden: int) -> EulerFactor:
    """Recover num/den (den(0) = 1) from a series with numeric coefficients.

    Needs order >= dnum + dden + 1.  The denominator solves the Toeplitz system
    sum_j d_j s_{i-j} = 0 for dnum < i <= dnum + dden.
    """
    from .extract import nullspace  # plain Fraction linear algebra

    s = [c(Fraction(0)) if c.degree() <= 0 else None for c in series.coeffs]
    if any(v is None for v in s):
        raise ValueError("Pade reconstruction needs numeric coefficients; specialize a_p first")
    if series.order < dnum + dden + 1:
        raise ValueError("series too short for these degrees")

    def at(i):
        return s[i] if 0 <= i < len(s) else Fraction(0)

    rows = [[at(i - j) for j in range(dden + 1)] for i in range(dnum + 1, dnum + dden + 1)]
    if rows:
        ker = nullspace(rows, dden + 1)
        ker = [v for v in ker if v[0] != 0]
        if not ker:
            raise ValueError("no normalized denominator of this degree")
        d = [x / ker[0][0] for x in ker[0]]
    else:
        d = [Fraction(1)]
    num = [sum((d[j] * at(i - j) for j in range(min(i, dden) + 1)), Fraction(0)) for i in range(dnum + 1)]
    return EulerFactor(_xpoly(num), _xpoly(d), 0)


def _hadamard_rational(G: EulerFactor, L: EulerFactor, poles: list[Fraction]) -> EulerFactor:
    """G * L for G = num/prod(1 - alpha_i x) with distinct alpha_i and deg num < #poles.

    Partial fractions give G = sum c_i/(1 - alpha_i x), hence G * L = sum c_i L(alpha_i x).
    """
    if G.num.degree() >= len(poles):
        raise ValueError("numerator degree too large for pure partial fractions")
    out = None
    for i, al in enumerate(poles):
        val = _ap(G.num(1 / al))
        rest = Fraction(1)
        for j, be in enumerate(poles):
            if j != i:
                rest *= 1 - be / al
        term = L.scale_var(al).scale(val * (1 / rest))
        out = term if out is None else out + term
    return out


@dataclass
class ConvReport:
    p: int
    k1: int
    k2: int
    m: int
    case: str
    order: int
    series_ok: bool
    rational_ok: bool
    critical_factor: Fraction | None
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.series_ok and self.rational_ok and self.critical_factor == 1

    def line(self) -> str:
        flag = "ok" if self.ok else "FAIL"
        return (f"{flag} p={self.p} k1={self.k1} k2={self.k2} m={self.m} {self.case}: "
                f"series={self.series_ok} exact={self.rational_ok} factor={self.critical_factor}")


def verify_conv_lemma(p: int, k1: int, k2: int, m: int, case: str, order: int = 10) -> ConvReport:
    """Check one local convolution identity, for every relevant character value.

    The identity is tested as a truncated series identity (LHS by coefficientwise
    product) and as an exact rational identity (LHS by partial fractions).  The
    correction factor relating L(f*G) to L(f,x)L(f,p^{k1-1}x)/zeta(p^{k+k1-2}x^2)
    is evaluated at x = p^{-(k-m-1)}.
    """
    k = k1 + k2 + 2 * m
    if m < 0:
        raise ValueError("m must be >= 0")
    _check(p, k1)
    _check(p, k2)
    b = _ppow(p, k1 - 1)
    x0 = _ppow(p, -(k - m - 1))
    crit_shift = k + k1 - 2
    zeta_poly = _xpoly([1, 0, -_ppow(p, crit_shift)])  # 1/zeta(p^{k+k1-2} x^2)_p
    series_ok = rational_ok = True
    crit_values: list[Fraction] = []
    details: list[str] = []

    signs = [None] if case == "generic" else [1, -1]
    for e in signs:
        if case == "generic":
            Lf = lf_build("new", p=p, k=k)
            G = lf_build("eisenstein-Geps", p=p, k1=k1, k2=k2)
            main = (Lf * Lf.scale_var(b)).multiply_poly(zeta_poly)
            closed = main
            A = _one(p)
        elif case == "p-new":
            Lf = lf_build("new", p=p, k=k, ramified_sign=e)
            G = lf_build("eisenstein-Geps", p=p, k1=k1, k2=k2, eps=e)
            main = (Lf * Lf.scale_var(b)).multiply_poly(zeta_poly)
            A = EulerFactor(_xpoly([1, -_ppow(p, k1 + m - 1)]), _xpoly([1, 0, -_ppow(p, crit_shift)]), p)
            closed = A * main
        elif case == "p-old":
            Lf1 = lf_build("new", p=p, k=k)
            Lf = lf_build("old-step", base=Lf1, k=k, eps2=e)
            G = lf_build("eisenstein-Geps", p=p, k1=k1, k2=k2, eps=e)
            main = (Lf * Lf.scale_var(b)).multiply_poly(zeta_poly)
            Q = UPoly([A_SYMBOL + _ap(e * _ppow(p, k // 2)),
                       _ap(-(b + 1) * _ppow(p, k - 1)),
                       _ap(-e * _ppow(p, k1 + 3 * k // 2 - 2))])
            extra_poly = _xpoly([0, e * Fraction(p) ** ((k1 - k2) // 2)]) * _xpoly([1, -_ppow(p, k - m - 1)]) * Q
            second = (Lf1 * Lf1.scale_var(b)).multiply_poly(extra_poly)
            closed = main + second
            A = None
        else:
            raise ValueError(f"unknown case {case!r}")

        lhs_series = hadamard(Lf.expand(order), G.expand(order))
        if lhs_series != closed.expand(order):
            series_ok = False
            details.append(f"series mismatch (eps={e})")
        lhs_exact = _hadamard_rational(G, Lf, [Fraction(1), b])
        if not lhs_exact.equals(closed):
            rational_ok = False
            details.append(f"rational mismatch (eps={e})")

        if A is not None:
            n0, d0 = A.evaluate(x0)
            if n0.degree() > 0 or d0.degree() > 0 or not d0:
                details.append(f"correction factor not a number (eps={e})")
                crit_values.append(None)
            else:
                crit_values.append(n0[0] / d0[0])
        else:
            # closed = main + second; the p-old claim is that the two sides agree at x0
            # because the second term vanishes there.  When k1 = k2 and eps2 = -1 the
            # main term vanishes at x0 as well, so the factor is read as equality of values.
            s0, _ = second.evaluate(x0)
            ln, ld = lhs_exact.evaluate(x0)
            mn, md = main.evaluate(x0)
            if not ld or not md:
                details.append(f"pole at the critical point (eps={e})")
                crit_values.append(None)
            elif s0 or ln * md != mn * ld:
                details.append(f"second term does not vanish at the critical point (eps={e})")
                crit_values.append(None)
            else:
                crit_values.append(Fraction(1))
                if not mn:
                    details.append(f"both sides vanish at the critical point (eps={e})")

    crit = crit_values[0] if crit_values and all(c == crit_values[0] for c in crit_values) else None
    return ConvReport(p, k1, k2, m, case, order, series_ok, rational_ok, crit, details)


def lemma_grid(primes=(2, 3, 5), weights=(2, 4, 6), ms=(0, 1, 2),
               cases=("generic", "p-new", "p-old"), order: int = 10) -> list[ConvReport]:
    return [verify_conv_lemma(p, k1, k2, m, c, order)
            for p in primes for k1 in weights for k2 in weights for m in ms for c in cases]
