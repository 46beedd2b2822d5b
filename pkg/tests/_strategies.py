"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from thetaperiods.exactnum import QuadElem
from thetaperiods.polyslash import LaurentPoly
from thetaperiods.qseries import QSeries

small_ints = st.integers(min_value=-50, max_value=50)
fractions = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=30))
nonzero_fractions = fractions.filter(bool)


def quads(D: int = 19):
    return st.builds(QuadElem, fractions, fractions, st.just(D))


def qseries(prec: int = 8, unit: bool = False):
    coeffs = st.lists(fractions, min_size=prec, max_size=prec)
    if unit:
        coeffs = coeffs.filter(lambda c: c[0] != 0)
    return coeffs.map(lambda c: QSeries(c, prec))


def polys(w: int, parity: int | None = None):
    """Polynomials in V_w, optionally restricted to even (0) or odd (1) exponents."""
    exps = [n for n in range(w + 1) if parity is None or n % 2 == parity]
    return st.lists(fractions, min_size=len(exps), max_size=len(exps)).map(
        lambda cs: LaurentPoly({n: c for n, c in zip(exps, cs) if c}))
