"""The level-N generating function B_N(X, Y, tau, T) and its pieces.

B_N = F_tau(XT, YT) F_{N tau}(T, -NXYT) is expanded slice by slice: the
coefficient of T^{k-2} is a Laurent polynomial in X, Y with q-series
coefficients.  The T^{-2} head is universal and kept as a scalar object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .arith import Character, all_characters, divisors, is_squarefree, prime_factors
from .eisenstein import (
    eis_constant,
    eis_Geps,
    g_level,
    g_table_entry,
    lambda_constant,
    qk_poly,
)
from .exactnum import scalar_to_json
from .polyslash import BiLaurent, GroupWord, LaurentPoly, OddHalfPower, eps_free_words, lambda_poly, slash
from .qseries import QSeries, qs_dilate
from .thetafun import FKernel, ThetaKernel, fkernel_via_theta, kernel_for_weight


class LaurentResidueNonzero(ArithmeticError):
    """The cuspidal remainder kept an X^{-1}, X^{k-1}, Y^{-1} or Y^{k-1} term."""


class NotSquarefree(ValueError):
    pass


def _check_level(N: int) -> None:
    if not is_squarefree(N):
        raise NotSquarefree("level must be squarefree")


def head(N: int) -> BiLaurent:
    """(X+Y)(NXY-1)/(N X^2 Y^2) = X^{-1} + Y^{-1} - (X^{-2}Y^{-1} + X^{-1}Y^{-2})/N."""
    inv = Fraction(1, N)
    return BiLaurent({(-1, 0): 1, (0, -1): 1, (-2, -1): -inv, (-1, -2): -inv})


@dataclass
class GenFunSlice:
    N: int
    k: int
    body: BiLaurent
    head: BiLaurent = field(default=None)

    def __post_init__(self):
        if self.head is None:
            self.head = head(self.N)

    def check_exponents(self) -> None:
        if not self.body.x_range_ok(-1, self.k - 1):
            raise ValueError(f"exponents outside [-1, {self.k - 1}]")

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "head": [{"i": i, "j": j, "c": scalar_to_json(c)} for (i, j), c in sorted(self.head.terms.items())],
            "coeffs": [
                {"i": i, "j": j, "qseries": [scalar_to_json(x) for x in s.coeffs]}
                for (i, j), s in sorted(self.body.terms.items())
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _pairs(total: int):
    """(a, b) with a, b >= -1 and a + b = total."""
    for a in range(-1, total + 2):
        b = total - a
        if b >= -1:
            yield a, b


def _assemble(k: int, N: int, M: int, first, second) -> BiLaurent:
    """T^{k-2} coefficient of F_{M tau}(sqrt(M) XT, sqrt(M) YT) F_{(N/M) tau}(T/sqrt(M), -NXYT/sqrt(M)).

    ``first`` and ``second`` are kernels already dilated to M tau and (N/M) tau.
    """
    terms: dict[tuple[int, int], QSeries] = {}
    s = k - 2
    for s1 in range(-2, s + 3):
        s2 = s - s1
        if s2 < -2:
            continue
        for a, b in _pairs(s1):
            f1 = first.coeff(a, b)
            if f1 is None:
                continue
            for c, d in _pairs(s2):
                f2 = second.coeff(c, d)
                if f2 is None:
                    continue
                num = a + b - c - d
                if num % 2:
                    raise OddHalfPower(f"M^{num}/2 left at weight {k}")
                e = num // 2
                scal = Fraction(M) ** e * Fraction(-N) ** d
                key = (a + d, b + d)
                val = (f1 * f2).scale(scal)
                terms[key] = terms[key] + val if key in terms else val
    return BiLaurent(terms)


def _weights(kmax: int):
    return range(2, kmax + 1, 2)


def bn_expand(N: int, kmax: int, qprec: int) -> dict[int, GenFunSlice]:
    """Slices T^{k-2}, 2 <= k <= kmax, from the Eisenstein-derivative kernel."""
    _check_level(N)
    if kmax % 2:
        raise ValueError("kmax must be even")
    kern = kernel_for_weight(kmax, qprec)
    kN = kern.dilate(N)
    return {k: GenFunSlice(N, k, _assemble(k, N, 1, kern, kN)) for k in _weights(kmax)}


def bn_via_theta(N: int, kmax: int, qprec: int) -> dict[int, GenFunSlice]:
    """Same slices, with F taken from the theta quotient."""
    _check_level(N)
    kern = fkernel_via_theta(kmax - 1, qprec)
    kN = kern.dilate(N)
    return {k: GenFunSlice(N, k, _assemble(k, N, 1, kern, kN)) for k in _weights(kmax)}


def _g_level_any(k1: int, k2: int, m: int, N: int, qprec: int) -> QSeries:
    if m >= 0:
        return g_level(k1, k2, m, N, qprec)
    # m = -1: only the weight-two unit terms contribute
    out = QSeries.zero(qprec)
    if k2 == 2:
        out = out - g_table_entry(k1, 0, qprec).scale(Fraction(1, N))
    if k1 == 2:
        out = out + qs_dilate(g_table_entry(k2, 0, qprec), N)
    return out


def bn_via_rc(N: int, k: int, qprec: int) -> GenFunSlice:
    """The slice as sum of (X^{k1-1}+Y^{k1-1})(1-(NXY)^{k2-1})(XY)^m g^(N)_{k1,k2,m}."""
    _check_level(N)
    terms: dict[tuple[int, int], QSeries] = {}
    for k1 in range(2, k + 3, 2):
        for k2 in range(2, k + 3, 2):
            rest = k - k1 - k2
            if rest % 2 or rest < -2:
                continue
            m = rest // 2
            if m == -1 and k1 != 2 and k2 != 2:
                continue
            g = _g_level_any(k1, k2, m, N, qprec)
            if not g:
                continue
            x_part = [(k1 - 1, 0), (0, k1 - 1)]
            y_part = [((0, 0), Fraction(1)), ((k2 - 1, k2 - 1), -Fraction(N) ** (k2 - 1))]
            for (i0, j0) in x_part:
                for (i1, j1), c in y_part:
                    key = (i0 + i1 + m, j0 + j1 + m)
                    val = g.scale(c)
                    terms[key] = terms[key] + val if key in terms else val
    return GenFunSlice(N, k, BiLaurent(terms))


# -- Eisenstein and cuspidal parts -------------------------------------------

@dataclass
class EisSummand:
    eps: Character
    poly: BiLaurent  # scalar coefficients, even in X and odd in Y
    series: QSeries


@dataclass
class EisPart:
    N: int
    k: int
    summands: list[EisSummand]

    def total(self) -> BiLaurent:
        out = BiLaurent()
        for s in self.summands:
            out = out + s.poly.scale(s.series) + s.poly.swap().scale(s.series)
        return out

    def for_character(self, eps: Character) -> BiLaurent:
        out = BiLaurent()
        for s in self.summands:
            if s.eps == eps:
                out = out + s.poly.scale(s.series) + s.poly.swap().scale(s.series)
        return out


def eis_summand_poly(N: int, k: int, eps: Character) -> BiLaurent:
    """[1 - eps(N) N^{k/2-1} X^{k-2}] Lambda^eps(Q_k)(Y) / (2^t prod(1 + eps(p) p^{k/2}))."""
    t = len(prime_factors(N))
    xpart = LaurentPoly({0: 1}) - LaurentPoly({k - 2: Fraction(eps(N) * N ** (k // 2 - 1))})
    if not xpart:
        return BiLaurent()
    ypart = lambda_poly(qk_poly(k), N, eps, k)
    den = 2**t * lambda_constant(k, N, eps)
    return BiLaurent.from_product(xpart, ypart).scale(Fraction(1) / den)


def eis_part(N: int, k: int, qprec: int) -> EisPart:
    _check_level(N)
    out = []
    for eps in all_characters(N):
        poly = eis_summand_poly(N, k, eps)
        if not poly:
            continue
        series = eis_Geps(k, N, eps, qprec) / eis_constant(k)
        out.append(EisSummand(eps, poly, series))
    return EisPart(N, k, out)


def _strip_tails(B: BiLaurent, k: int) -> BiLaurent:
    bad = [key for key in B.terms if -1 in key or (k - 1) in key]
    if bad:
        raise LaurentResidueNonzero(f"weight {k}: tail terms survive at {sorted(bad)}")
    return B


def cusp_part(N: int, k: int, qprec: int, slice_: GenFunSlice | None = None) -> BiLaurent:
    """Slice minus Eisenstein part; must be a genuine polynomial."""
    if slice_ is None:
        slice_ = bn_expand(N, k, qprec)[k]
    return _strip_tails(slice_.body - eis_part(N, k, qprec).total(), k)


# -- eigencomponents ----------------------------------------------------------

def m_summand(N: int, M: int, k: int, kern: FKernel | ThetaKernel) -> BiLaurent:
    """The M-term of the eigencomponent formula (kernel given at level tau)."""
    return _assemble(k, N, M, kern.dilate(M), kern.dilate(N // M))


def eigencomponent(N: int, eps: Character, kmax: int, qprec: int) -> dict[int, GenFunSlice]:
    """2^{-t} sum_{M | N} eps(M) (M-summand), slice by slice."""
    _check_level(N)
    t = len(prime_factors(N))
    kern = kernel_for_weight(kmax, qprec)
    dil = {d: kern.dilate(d) for d in divisors(N)}
    out = {}
    h = head(N) if eps.is_trivial() else BiLaurent()
    for k in _weights(kmax):
        acc = BiLaurent()
        for M in divisors(N):
            acc = acc + _assemble(k, N, M, dil[M], dil[N // M]).scale(Fraction(eps(M), 2**t))
        out[k] = GenFunSlice(N, k, acc, h)
    return out


def eigencomponent_cusp(N: int, eps: Character, k: int, qprec: int, comp: BiLaurent | None = None) -> BiLaurent:
    """Cuspidal part of one eigencomponent: remove that character's Eisenstein summand."""
    if comp is None:
        comp = eigencomponent(N, eps, k, qprec)[k].body
    return _strip_tails(comp - eis_part(N, k, qprec).for_character(eps), k)


# -- cusp values --------------------------------------------------------------

def m_summand_at_infinity(N: int, M: int, kmax: int) -> dict[int, BiLaurent]:
    """q^0 term of every M-summand slice, from constant terms of the kernel."""
    kern = kernel_for_weight(kmax, 1)
    out = {}
    for k in _weights(kmax):
        B = _assemble(k, N, M, kern, kern)
        out[k] = B.map_coeffs(lambda s: s[0])
    return out


def _sinh_ratio_series(alpha: BiLaurent, order: int) -> list[BiLaurent]:
    """S(alpha T^2) = sum alpha^n T^{2n} / (2n+1)!, where sinh(a) = a S(a^2)."""
    out = [BiLaurent({(0, 0): 1})]
    p = BiLaurent({(0, 0): 1})
    for n in range(1, order + 1):
        p = p * alpha
        out.append(p.scale(Fraction(1, factorial(2 * n + 1))))
    return out


def _tmul(a: list[BiLaurent], b: list[BiLaurent], order: int) -> list[BiLaurent]:
    out = []
    for n in range(order + 1):
        acc = BiLaurent()
        for i in range(n + 1):
            acc = acc + a[i] * b[n - i]
        out.append(acc)
    return out


def _tinv(a: list[BiLaurent], order: int) -> list[BiLaurent]:
    # a[0] == 1
    inv = [BiLaurent({(0, 0): 1})]
    for n in range(1, order + 1):
        acc = BiLaurent()
        for j in range(1, n + 1):
            acc = acc + a[j] * inv[n - j]
        inv.append(-acc)
    return inv


def cusp_value_sinh(N: int, M: int, kmax: int) -> dict[int, BiLaurent]:
    """Taylor coefficients in T of

        sinh(sqrt(M)(X+Y)T/2) sinh((NXY-1)T/(2 sqrt(M)))
        / (4 sinh(sqrt(M)XT/2) sinh(sqrt(M)YT/2) sinh(T/(2 sqrt(M))) sinh(NXYT/(2 sqrt(M)))),

    computed from the sinh series alone (no kernel data).
    """
    order = kmax // 2
    XplusY = BiLaurent({(1, 0): 1, (0, 1): 1})
    NXYm1 = BiLaurent({(1, 1): N, (0, 0): -1})
    X2 = BiLaurent({(2, 0): 1})
    Y2 = BiLaurent({(0, 2): 1})
    fM = Fraction(M)
    num = _tmul(
        _sinh_ratio_series((XplusY * XplusY).scale(fM / 4), order),
        _sinh_ratio_series((NXYm1 * NXYm1).scale(1 / (4 * fM)), order),
        order,
    )
    den = _sinh_ratio_series(X2.scale(fM / 4), order)
    for alpha in (Y2.scale(fM / 4), BiLaurent({(0, 0): 1 / (4 * fM)}),
                  BiLaurent({(2, 2): Fraction(N * N) / (4 * fM)})):
        den = _tmul(den, _sinh_ratio_series(alpha, order), order)
    ratio = _tmul(num, _tinv(den, order), order)
    pref = head(N)
    # T^{k-2} = T^{-2} T^{2n} with k = 2n
    return {2 * n: pref * ratio[n] for n in range(1, order + 1)}


def cusp_value_check(N: int, M: int, kmax: int) -> dict[int, bool]:
    """Per weight k: q^0 of the M-summand equals the sinh expansion (T^{k-2} term)."""
    a = m_summand_at_infinity(N, M, kmax)
    b = cusp_value_sinh(N, M, kmax)
    return {k: a[k].equals(b[k]) for k in _weights(kmax)}


# -- cocycle relations on slices --------------------------------------------

def _eval_slash_at(P: LaurentPoly, g: GroupWord, w: int, x: Fraction):
    """(P|_{-w} g)(x) for a Laurent polynomial P, or None at a pole."""
    den = g.c * x + g.d
    numr = g.a * x + g.b
    if den == 0 or numr == 0:
        return None
    z = numr / den
    acc = None
    for n, c in P.terms.items():
        term = c * (z**n)
        acc = term if acc is None else acc + term
    if acc is None:
        return 0
    r = g.det
    scale = den**w / Fraction(r) ** (w // 2)
    return acc * scale


def relation_on_polys(P: LaurentPoly, p: int, w: int) -> bool:
    """sum_j sign_j P|gamma_j = 0 exactly, with the polynomial action (P in V_w)."""
    out = LaurentPoly()
    for sign, g in eps_free_words(p):
        out = out + slash(P, g, w) * sign
    return not out


def relation_as_rational(P: LaurentPoly, p: int, w: int) -> bool:
    """The same relation for P with Laurent tails, as an identity of rational functions of X.

    Every term is (ax+b)^n (cx+d)^{w-n}; after multiplying by
    L = prod_g (a_g x + b_g)^A (c_g x + d_g)^B, with A and B the worst negative
    exponents, the sum becomes a polynomial of degree <= w + 2p(A+B).  It is
    therefore zero once it vanishes at that many + 1 points where L != 0.
    """
    if not P:
        return True
    words = eps_free_words(p)
    nmin, nmax = P.min_exp(), P.max_exp()
    A = max(0, -nmin)
    B = max(0, nmax - w)
    need = max(w, 0) + 2 * p * (A + B) + 1
    got = 0
    x = Fraction(2)
    while got < need:
        vals = [_eval_slash_at(P, g, w, x) for _, g in words]
        if all(v is not None for v in vals):
            total = None
            for (sign, _), v in zip(words, vals):
                term = v * sign
                total = term if total is None else total + term
            if total:
                return False
            got += 1
        x += 1
    return True


def relation_check_slice(B: BiLaurent, p: int, w: int, rational: bool = False) -> bool:
    """Apply the 2p-term relation in X, coefficientwise in Y (and q)."""
    for j in B.y_exponents():
        P = B.y_slice(j)
        ok = relation_as_rational(P, p, w) if rational else relation_on_polys(P, p, w)
        if not ok:
            return False
    return True


def four_term_relation_check(N: int, kmax: int, qprec: int) -> dict:
    """Per weight: relation on the cuspidal slice, on the full slice, and on the head."""
    if N not in (2, 3):
        raise ValueError("the theta relation is implemented for N = 2, 3")
    slices = bn_expand(N, kmax, qprec)
    report = {"N": N, "weights": {}, "failures": []}
    h = head(N)
    head_ok = relation_check_slice(h, N, -2, rational=True)
    report["head"] = head_ok
    if not head_ok:
        report["failures"].append("head")
    for k, sl in slices.items():
        w = k - 2
        cusp = cusp_part(N, k, qprec, sl)
        c_ok = relation_check_slice(cusp, N, w)
        f_ok = relation_check_slice(sl.body, N, w, rational=True)
        report["weights"][k] = {"cusp": c_ok, "full": f_ok}
        if not (c_ok and f_ok):
            report["failures"].append(k)
    return report


def slices_equal(a: dict[int, GenFunSlice], b: dict[int, GenFunSlice]) -> bool:
    return set(a) == set(b) and all(a[k].body.equals(b[k].body) for k in a)
