from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetaperiods.arith import Character, all_characters
from thetaperiods.eisenstein import (
    QuasimodularWeightTwo,
    bernoulli,
    eis_constant,
    eis_E,
    eis_Einf,
    eis_G,
    eis_Geps,
    g_level,
    g_level_double_sum,
    lambda_constant,
    oldform_psp_ratio,
    qk_poly,
    rc_bracket,
    rc_modified,
)
from thetaperiods.extract import rref
from thetaperiods.polyslash import LaurentPoly, OddWeight
from thetaperiods.qseries import QSeries

P = 14


def test_bernoulli_values():
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(3) == 0
    assert bernoulli(12) == Fraction(-691, 2730)


def test_bernoulli_recurrence():
    from math import comb
    for n in range(1, 20):
        assert sum(comb(n + 1, j) * bernoulli(j) for j in range(n + 1)) == 0
    assert all(bernoulli(n) == 0 for n in range(3, 30, 2))


def test_level_one_series():
    assert eis_G(4, 4).coeffs == [Fraction(1, 240), 1, 9, 28]
    for k in (4, 6, 8, 12):
        E = eis_E(k, 4)
        assert E[0] == 1
        assert E[1] == -2 * k / bernoulli(k)
    assert eis_E(4, 3)[1] == 240


def test_level_N_constants():
    k = 6
    for N in (2, 3, 6):
        for eps in all_characters(N):
            G = eis_Geps(k, N, eps, 5)
            assert G[0] == eis_constant(k) * lambda_constant(k, N, eps)
            assert eis_Einf(k, N, 5)[0] == 1
    assert eis_Geps(k, 1, Character.trivial(1), P) == eis_G(k, P)
    with pytest.raises(QuasimodularWeightTwo):
        eis_Geps(2, 2, Character.trivial(2), 5)
    assert eis_Geps(2, 2, Character.from_sign(2, -1), 5)  # fine for nontrivial eps


def test_Qk_examples():
    assert qk_poly(4) == LaurentPoly({-1: Fraction(-1, 720), 3: Fraction(-1, 720), 1: Fraction(1, 144)})
    assert qk_poly(2) == LaurentPoly({-1: Fraction(1, 12), 1: Fraction(1, 12)})
    for k in range(2, 18, 2):
        Q = qk_poly(k)
        assert all(n % 2 for n in Q.exponents())
        assert Q.in_space(k - 2, hat=True)


def test_bracket_examples():
    F, G = eis_G(4, P), eis_G(6, P)
    assert rc_bracket(F, G, 4, 6, 0) == F * G
    assert not rc_bracket(F, F, 4, 4, 1)
    assert rc_bracket(F, F, 4, 4, 2)[0] == 0
    assert rc_modified(4, 6, 1, 3, P) == rc_bracket(F, G, 4, 6, 3)


def _level_one_basis(k: int, prec: int) -> list[QSeries]:
    E4, E6 = eis_E(4, prec), eis_E(6, prec)
    out = []
    for a in range(k // 4 + 1):
        rest = k - 4 * a
        if rest % 6 == 0:
            out.append(E4 ** a * E6 ** (rest // 6))
    return out


def _in_span(target: QSeries, basis: list[QSeries]) -> bool:
    n = min(target.prec, *(b.prec for b in basis))
    rows = [list(b.coeffs[:n]) for b in basis]
    _, piv = rref(rows, n)
    _, piv2 = rref(rows + [list(target.coeffs[:n])], n)
    return len(piv) == len(piv2)


@pytest.mark.parametrize("k1,k2,m", [(4, 4, 2), (4, 6, 1), (6, 6, 2), (4, 8, 3), (2, 4, 1), (2, 2, 0), (2, 2, 2)])
def test_brackets_are_level_one_modular(k1, k2, m):
    prec = 20
    br = rc_modified(k1, k2, 1, m, prec)
    assert _in_span(br, _level_one_basis(k1 + k2 + 2 * m, prec))


def test_non_modular_series_is_rejected():
    prec = 20
    assert not _in_span(eis_G(2, prec) * eis_G(2, prec), _level_one_basis(4, prec))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 4, 6]), st.sampled_from([2, 4, 6]), st.integers(0, 3), st.sampled_from([1, 2, 3, 5]))
def test_two_forms_of_g_level(k1, k2, m, N):
    assert g_level(k1, k2, m, N, 12) == g_level_double_sum(k1, k2, m, N, 12)


def test_psp_ratio_examples():
    a2 = {2: Fraction(-24)}
    assert oldform_psp_ratio(12, 2, Character.from_sign(2, 1), a2) == Fraction(9, 2)
    assert oldform_psp_ratio(12, 2, Character.from_sign(2, -1), a2) == Fraction(15, 2)
    assert oldform_psp_ratio(12, 1, Character.trivial(1), {}) == 1
    with pytest.raises(OddWeight):
        oldform_psp_ratio(11, 2, Character.from_sign(2, 1), a2)
