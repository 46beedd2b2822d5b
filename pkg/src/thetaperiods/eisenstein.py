"""Bernoulli numbers, Eisenstein series of squarefree level, Q_k and Rankin-Cohen brackets."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .arith import Character, divisors, moebius, prime_factors
from .polyslash import LaurentPoly, OddWeight
from .qseries import QSeries, qs_dilate, sigma_series


class QuasimodularWeightTwo(ValueError):
    """G_2^eps with trivial eps is only quasimodular."""


_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{j<=n} C(n+1, j) B_j = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    while len(_BERNOULLI) <= n:
        m = len(_BERNOULLI)
        acc = sum((comb(m + 1, j) * _BERNOULLI[j] for j in range(m)), Fraction(0))
        _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[n]


def eis_constant(k: int) -> Fraction:
    """G_k(infinity) = -B_k / 2k."""
    return -bernoulli(k) / (2 * k)


@lru_cache(maxsize=None)
def eis_G(k: int, qprec: int) -> QSeries:
    if k < 2 or k % 2:
        raise ValueError("weight must be even and >= 2")
    s = sigma_series(k - 1, qprec)
    return s + eis_constant(k)


def eis_E(k: int, qprec: int) -> QSeries:
    return eis_G(k, qprec) / eis_constant(k)


def eis_Geps(k: int, N: int, eps: Character, qprec: int) -> QSeries:
    """G^eps_{k,N} = sum_{d|N} eps(d) d^{k/2} G_k(d tau)."""
    if k == 2 and eps.is_trivial():
        raise QuasimodularWeightTwo("G^eps_{2,N} needs a nontrivial character")
    G = eis_G(k, qprec)
    out = QSeries.zero(qprec)
    for d in divisors(N):
        out = out + qs_dilate(G, d).scale(Fraction(eps(d) * d ** (k // 2)))
    return out


def eis_Geps_k2(k1: int, k2: int, N: int, eps: Character, qprec: int) -> QSeries:
    """sum_{d|N} eps(d) d^{(k1-k2)/2} G_{k1}(d tau) (the series used in the convolution lemma)."""
    G = eis_G(k1, qprec)
    out = QSeries.zero(qprec)
    for d in divisors(N):
        out = out + qs_dilate(G, d).scale(eps(d) * Fraction(d) ** ((k1 - k2) // 2))
    return out


def eis_Einf(k: int, N: int, qprec: int) -> QSeries:
    """E^(inf)_{k,N} = prod(p^k - 1)^{-1} sum_{d|N} mu(N/d) d^k E_k(d tau)."""
    E = eis_E(k, qprec)
    den = 1
    for p in prime_factors(N):
        den *= p**k - 1
    out = QSeries.zero(qprec)
    for d in divisors(N):
        out = out + qs_dilate(E, d).scale(Fraction(moebius(N // d) * d**k, den))
    return out


def qk_poly(k: int) -> LaurentPoly:
    """Q_k(X) = sum over even r + s = k of (B_r/r!)(B_s/s!) X^{r-1}."""
    if k < 2 or k % 2:
        raise ValueError("weight must be even and >= 2")
    terms = {}
    for r in range(0, k + 1, 2):
        s = k - r
        terms[r - 1] = bernoulli(r) / factorial(r) * bernoulli(s) / factorial(s)
    return LaurentPoly(terms)


def rc_bracket(F: QSeries, G: QSeries, k1: int, k2: int, m: int) -> QSeries:
    """[F, G]_m^{(k1,k2)}."""
    if m < 0:
        raise ValueError("m must be >= 0")
    prec = min(F.prec, G.prec)
    out = QSeries.zero(prec)
    for m1 in range(m + 1):
        m2 = m - m1
        c = (-1) ** m2 * comb(k1 + m - 1, m2) * comb(k2 + m - 1, m1)
        out = out + (F.derive(m1) * G.derive(m2)).scale(Fraction(c))
    return out


def rc_modified(k1: int, k2: int, d2: int, m: int, qprec: int) -> QSeries:
    """The modified bracket [G_{k1}, G_{k2}|V_{d2}]_m.

    The second argument is G_{k2}|V_{d2} = d2^{k2/2} G_{k2}(d2 tau); with this
    normalisation the weight-two correction terms keep exactly their level-one
    form.
    """
    if k1 < 2 or k2 < 2 or k1 % 2 or k2 % 2:
        raise ValueError("weights must be even and >= 2")
    G1 = eis_G(k1, qprec)
    G2 = qs_dilate(eis_G(k2, qprec), d2).scale(Fraction(d2 ** (k2 // 2)))
    out = rc_bracket(G1, G2, k1, k2, m)
    if k2 == 2:
        out = out + G1.derive(m + 1).scale(Fraction(1, 2 * (m + k1)))
    if k1 == 2:
        out = out + G2.derive(m + 1).scale(Fraction((-1) ** m, 2 * (m + k2)))
    return out


def g_table_entry(k: int, m: int, qprec: int) -> QSeries:
    """g_{k,m} = -2 D^m G_k / (m! (m+k-1)!) for m >= 0; delta_{k,2} for m = -1."""
    if m == -1:
        return QSeries.constant(Fraction(1 if k == 2 else 0), qprec)
    return eis_G(k, qprec).derive(m).scale(Fraction(-2, factorial(m) * factorial(m + k - 1)))


def g_level(k1: int, k2: int, m: int, N: int, qprec: int) -> QSeries:
    """g^(N)_{k1,k2,m} from the scaled modified bracket (m >= 0)."""
    br = rc_modified(k1, k2, N, m, qprec)
    scale = Fraction(4, factorial(k1 + m - 1) * factorial(k2 + m - 1)) / Fraction(N ** (k2 // 2))
    return br.scale(scale)


def g_level_double_sum(k1: int, k2: int, m: int, N: int, qprec: int) -> QSeries:
    """sum_{m1+m2=m, mi>=-1} (-N)^{m2} g_{k1,m1}(tau) g_{k2,m2}(N tau)."""
    out = QSeries.zero(qprec)
    for m1 in range(-1, m + 2):
        m2 = m - m1
        if m2 < -1:
            continue
        if (m1 == -1 and k1 != 2) or (m2 == -1 and k2 != 2):
            continue
        a = g_table_entry(k1, m1, qprec)
        b = qs_dilate(g_table_entry(k2, m2, qprec), N)
        out = out + (a * b).scale(Fraction(-N) ** m2)
    return out


def oldform_psp_ratio(k: int, N2: int, eps2: Character, a_p: dict[int, Fraction]) -> Fraction:
    """prod_{p|N2} 2 (p + eps2(p) a_p p^{1-k/2} + 1)."""
    if k % 2:
        raise OddWeight("Petersson ratio needs even weight")
    out = Fraction(1)
    for p in prime_factors(N2):
        out *= 2 * (p + eps2(p) * Fraction(a_p[p]) * Fraction(p) ** (1 - k // 2) + 1)
    return out


def lambda_constant(k: int, N: int, eps: Character) -> Fraction:
    """prod_{p|N} (1 + eps(p) p^{k/2}), the constant term ratio G^eps_{k,N}(inf)/G_k(inf)."""
    out = Fraction(1)
    for p in prime_factors(N):
        out *= 1 + eps(p) * p ** (k // 2)
    return out
