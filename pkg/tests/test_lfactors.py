from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from thetaperiods.lfactors import (
    A_SYMBOL, FORMAL, EulerFactor, LocalSeries, geometric, hadamard, lemma_grid, level_one_eisenstein,
    lf_build, oldform_factor, pade, verify_conv_lemma,
)
from thetaperiods.upoly import UPoly


def xp(*coeffs):
    return UPoly([UPoly([Fraction(c)]) for c in coeffs])


PRIMES = st.sampled_from([2, 3, 5, 7])
WEIGHTS = st.sampled_from([2, 4, 6, 8, 10, 12])
SIGNS = st.sampled_from([1, -1])


# -- building factors ----------------------------------------------------------------

@pytest.mark.parametrize("p,k,e", [(2, 4, 1), (3, 8, -1), (5, 12, 1)])
def test_new_ramified(p, k, e):
    f = lf_build("new", p=p, k=k, ramified_sign=e)
    want = EulerFactor(xp(1), xp(1, e * Fraction(p) ** (k // 2 - 1)), p)
    assert f.equals(want)
    assert f.is_rational()


def test_new_unramified_is_formal_in_a():
    f = lf_build("new", p=3, k=12, a_p=FORMAL)
    assert f.den == UPoly([UPoly([Fraction(1)]), -A_SYMBOL, UPoly([Fraction(3) ** 11])])
    assert not f.is_rational()
    g = lf_build("new", p=2, k=12, a_p=-24)
    assert g.expand(3).specialize(0) == [1, -24, 576 - 2048]


@pytest.mark.parametrize("e2", [1, -1])
def test_old_step_multiplies(e2):
    base = lf_build("new", p=2, k=12)
    old = lf_build("old-step", base=base, k=12, eps2=e2)
    assert old.equals(base.multiply_poly(xp(1, e2 * 2**6)))
    assert old.den == base.den


@pytest.mark.parametrize("p,k", [(2, 4), (3, 6), (5, 12)])
def test_level_one_eisenstein(p, k):
    f = level_one_eisenstein(p, k)
    assert f.equals(EulerFactor(xp(1), xp(1, -1) * xp(1, -Fraction(p) ** (k - 1)), p))
    # coefficients are sigma_{k-1}(p^i)
    s = f.expand(5).specialize(0)
    assert s == [sum(Fraction(p) ** ((k - 1) * j) for j in range(i + 1)) for i in range(5)]


def test_eisenstein_geps_at_bad_prime():
    f = lf_build("eisenstein-Geps", p=3, k1=6, k2=2, eps=-1)
    want = EulerFactor(xp(1, -9), xp(1, -1) * xp(1, -3**5), 3)
    assert f.equals(want)


@pytest.mark.parametrize("kw", [
    dict(kind="new", p=4, k=4),
    dict(kind="new", p=3, k=5),
    dict(kind="new", p=3, k=4, ramified_sign=2),
    dict(kind="zeta-like", p=9, factors=[(0, 1)]),
    dict(kind="bogus", p=3),
])
def test_bad_parameters(kw):
    kind = kw.pop("kind")
    with pytest.raises(ValueError):
        lf_build(kind, **kw)


def test_denominator_must_be_normalized():
    with pytest.raises(ValueError):
        EulerFactor(xp(1), xp(2, 1), 2)


def test_expand_matches_long_division():
    f = EulerFactor(xp(1, 3), xp(1, -2, 5), 2)
    s = f.expand(6).specialize(0)
    # (1 + 3x) = (1 - 2x + 5x^2) * s
    for n in range(6):
        lhs = [1, 3][n] if n < 2 else 0
        rhs = s[n] - 2 * (s[n - 1] if n >= 1 else 0) + 5 * (s[n - 2] if n >= 2 else 0)
        assert lhs == rhs


# -- Hadamard products ---------------------------------------------------------------

def test_hadamard_constant_series_truncates():
    B = LocalSeries.from_scalars([7, 2, 3, 4])
    one = LocalSeries.from_scalars([1, 0, 0, 0])
    assert hadamard(one, B) == LocalSeries.from_scalars([7, 0, 0, 0])


def test_hadamard_truncates_to_shorter():
    a = LocalSeries.from_scalars([1, 1, 1])
    b = LocalSeries.from_scalars([1, 2, 3, 4, 5])
    assert hadamard(a, b).order == 3


@given(alpha=st.fractions(max_denominator=5).filter(lambda a: abs(a) < 10),
       coeffs=st.lists(st.integers(-20, 20), min_size=1, max_size=8))
def test_geometric_hadamard_rule(alpha, coeffs):
    B = LocalSeries.from_scalars(coeffs)
    assert hadamard(geometric(alpha, B.order), B) == B.scale_var(alpha)


def test_geometric_with_formal_ratio():
    g = geometric(A_SYMBOL, 4)
    assert g[3] == A_SYMBOL ** 3


@pytest.mark.parametrize("k2,m", [(8, 0), (6, 1), (4, 2), (2, 3)])
def test_case_one_closed_form_formal(k2, m):
    p, k1, k = 3, 4, 12
    assert k1 + k2 + 2 * m == k
    Lf = lf_build("new", p=p, k=k, a_p=FORMAL)
    G = lf_build("eisenstein-Geps", p=p, k1=k1, k2=k2)
    lhs = hadamard(Lf.expand(10), G.expand(10))
    closed = (Lf * Lf.scale_var(Fraction(p) ** (k1 - 1))).multiply_poly(xp(1, 0, -Fraction(p) ** (k + k1 - 2)))
    assert lhs == closed.expand(10)
    # the identity genuinely involves a: coefficient 1 is a*(1 + p^{k1-1})
    assert lhs[1] == A_SYMBOL * (1 + p ** (k1 - 1))


def test_case_one_closed_form_detects_a_wrong_twist():
    p, k1, k = 3, 4, 12
    Lf = lf_build("new", p=p, k=k)
    G = lf_build("eisenstein-Geps", p=p, k1=k1, k2=8)
    wrong = (Lf * Lf.scale_var(Fraction(p) ** k1)).multiply_poly(xp(1, 0, -Fraction(p) ** (k + k1 - 2)))
    assert hadamard(Lf.expand(10), G.expand(10)) != wrong.expand(10)


# -- the convolution identities ------------------------------------------------------

def test_generic_case_small():
    r = verify_conv_lemma(2, 4, 4, 0, "generic", 10)
    assert r.series_ok and r.rational_ok and r.ok


@pytest.mark.parametrize("p,k1,k2,m", [(2, 4, 4, 0), (3, 2, 6, 1), (5, 6, 2, 2)])
def test_p_new_factor_is_one(p, k1, k2, m):
    r = verify_conv_lemma(p, k1, k2, m, "p-new", 10)
    assert r.ok
    assert r.critical_factor == 1
    # both parts of the factor are 1 - p^{-k2}
    k = k1 + k2 + 2 * m
    x0 = Fraction(p) ** (-(k - m - 1))
    assert 1 - Fraction(p) ** (k1 + m - 1) * x0 == 1 - Fraction(p) ** (-k2)
    assert 1 - Fraction(p) ** (k + k1 - 2) * x0 ** 2 == 1 - Fraction(p) ** (-k2)


@pytest.mark.parametrize("p,k1,k2,m", [(2, 4, 6, 0), (3, 2, 2, 1), (2, 6, 4, 2)])
def test_p_old_second_term_vanishes(p, k1, k2, m):
    r = verify_conv_lemma(p, k1, k2, m, "p-old", 10)
    assert r.ok, r.details
    assert not any("does not vanish" in d for d in r.details)


def test_p_old_equal_weights_report_both_sides_vanishing():
    r = verify_conv_lemma(2, 4, 4, 0, "p-old", 10)
    assert r.ok
    assert any("both sides vanish" in d for d in r.details)


def test_unknown_case():
    with pytest.raises(ValueError):
        verify_conv_lemma(2, 4, 4, 0, "other")


def test_grid_all_pass():
    reports = lemma_grid(primes=(2, 3), weights=(2, 4), ms=(0, 1))
    assert reports and all(r.ok for r in reports)
    assert "ok p=2" in reports[0].line()


# -- properties ----------------------------------------------------------------------

def _built(draw_kind, p, k, e, a):
    if draw_kind == 0:
        return lf_build("new", p=p, k=k, ramified_sign=e), 0, 1
    if draw_kind == 1:
        return lf_build("new", p=p, k=k, a_p=a), 0, 2
    if draw_kind == 2:
        return lf_build("old-step", base=lf_build("new", p=p, k=k, a_p=a), k=k, eps2=e), 1, 2
    if draw_kind == 3:
        return level_one_eisenstein(p, k), 0, 2
    return lf_build("eisenstein-Geps", p=p, k1=k, k2=2, eps=e), 1, 2


@settings(max_examples=60, deadline=None)
@given(kind=st.integers(0, 4), p=PRIMES, k=WEIGHTS, e=SIGNS, a=st.integers(-50, 50))
def test_pade_round_trip(kind, p, k, e, a):
    f, dn, dd = _built(kind, p, k, e, a)
    g = pade(f.expand(dn + dd + 3), dn, dd)
    assert g.equals(f)
    assert g.expand(10) == f.expand(10)


def test_pade_needs_numbers_and_length():
    f = lf_build("new", p=2, k=4)
    with pytest.raises(ValueError):
        pade(f.expand(6), 0, 2)
    with pytest.raises(ValueError):
        pade(lf_build("new", p=2, k=4, a_p=1).expand(2), 0, 2)


@settings(max_examples=40, deadline=None)
@given(p=PRIMES, k=WEIGHTS, e1=SIGNS, e2=SIGNS, N1=st.sampled_from([1, 2, 3, 5, 6, 7]),
       N2=st.sampled_from([1, 2, 3, 5, 7]))
def test_oldform_factor_shape(p, k, e1, e2, N1, N2):
    eps1 = {q: e1 for q in (2, 3, 5, 7)}
    eps2 = {q: e2 for q in (2, 3, 5, 7)}
    f = oldform_factor(p, k, N1, N2, eps1, eps2)
    if N1 % p == 0:
        base = lf_build("new", p=p, k=k, ramified_sign=e1)
    else:
        base = lf_build("new", p=p, k=k)
    if N2 % p == 0:
        assert f.equals(base.multiply_poly(xp(1, e2 * Fraction(p) ** (k // 2))))
    else:
        assert f.equals(base)
