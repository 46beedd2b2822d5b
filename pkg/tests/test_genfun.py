from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetaperiods.arith import Character, all_characters, is_squarefree, sturm_precision
from thetaperiods.eisenstein import eis_E, qk_poly
from thetaperiods.fixtures import table_rows
from thetaperiods.genfun import (
    GenFunSlice,
    LaurentResidueNonzero,
    NotSquarefree,
    bn_expand,
    bn_via_rc,
    bn_via_theta,
    cusp_part,
    cusp_value_check,
    cusp_value_sinh,
    eigencomponent,
    eigencomponent_cusp,
    eis_part,
    eis_summand_poly,
    four_term_relation_check,
    head,
    relation_on_polys,
    slices_equal,
)
from thetaperiods.extract import cocycle_relation
from thetaperiods.polyslash import BiLaurent, LaurentPoly
from thetaperiods.qseries import QSeries

QP = 12


def _row(N, label):
    return next(r for r in table_rows(N) if r.label == label)


def test_head_shape():
    X, Y = LaurentPoly.monomial(1), LaurentPoly.monomial(1)
    # (X+Y)(2XY-1)/(2X^2Y^2), expanded
    want = BiLaurent({(-1, 0): 1, (0, -1): 1, (-2, -1): Fraction(-1, 2), (-1, -2): Fraction(-1, 2)})
    assert head(2).equals(want)
    assert bn_expand(2, 4, 5)[4].head.equals(want)


def test_non_squarefree_level():
    with pytest.raises(NotSquarefree):
        bn_expand(4, 4, 5)


def test_rc_route_at_2_8():
    assert bn_expand(2, 8, QP)[8].body.equals(bn_via_rc(2, 8, QP).body)


def test_level_one_rc_route():
    assert bn_expand(1, 12, 16)[12].body.equals(bn_via_rc(1, 12, 16).body)


def test_theta_route_small():
    assert slices_equal(bn_expand(3, 8, QP), bn_via_theta(3, 8, QP))


@settings(max_examples=12, deadline=None)
@given(st.sampled_from([n for n in range(1, 16) if is_squarefree(n)]), st.sampled_from([2, 4, 6, 8]))
def test_rc_route_random_levels(N, k):
    assert bn_expand(N, k, 8)[k].body.equals(bn_via_rc(N, k, 8).body)


@pytest.mark.parametrize("N", [1, 2, 3, 6])
def test_q0_is_sinh_quotient(N):
    kmax = 10
    sl = bn_expand(N, kmax, 3)
    sinh = cusp_value_sinh(N, 1, kmax)
    for k in range(2, kmax + 1, 2):
        assert sl[k].body.map_coeffs(lambda s: s[0]).equals(sinh[k])


def test_cusp_value_identity_every_divisor():
    for N in (2, 3, 6):
        for M in (d for d in range(1, N + 1) if N % d == 0):
            assert all(cusp_value_check(N, M, 12).values())


def test_trivial_bracket_at_weight_two():
    assert not eis_summand_poly(2, 2, Character.from_sign(2, 1))
    assert eis_summand_poly(2, 2, Character.from_sign(2, -1))


@pytest.mark.parametrize("k", [4, 6, 8, 12])
def test_level_one_eisenstein_part(k):
    Qk = qk_poly(k)
    one = LaurentPoly.monomial(0)
    top = LaurentPoly.monomial(k - 2)
    poly = BiLaurent.from_product(one - top, Qk) + BiLaurent.from_product(Qk, one - top)
    assert eis_part(1, k, QP).total().equals(poly.scale(eis_E(k, QP)))


@pytest.mark.parametrize("N,k", [(1, 12), (2, 8), (3, 6), (5, 8), (6, 6)])
def test_cusp_part_vanishes_at_infinity(N, k):
    cp = cusp_part(N, k, sturm_precision(N, k))
    assert all(s[0] == 0 for s in cp.terms.values())
    for (i, j) in cp.terms:
        assert 0 <= i <= k - 2 and 0 <= j <= k - 2


def test_cusp_part_at_2_8():
    row = _row(2, "Delta8+")
    cp = cusp_part(2, 8, QP).even_odd()
    want = row.R.scale(row.q.truncate(QP).scale(Fraction(1, 720)))
    # compare through the precision of the printed q-expansion
    diff = cp - want
    assert all(not any(s.coeffs[:row.q.prec]) for s in diff.terms.values())


def test_cusp_part_at_5_4():
    row = _row(5, "Delta4+")
    cp = cusp_part(5, 4, QP).even_odd()
    want = row.R.scale(row.q.scale(Fraction(1, 2)))
    diff = cp - want
    assert all(not any(s.coeffs[:row.q.prec]) for s in diff.terms.values())


def test_no_cusp_forms_at_2_4():
    assert not any(cusp_part(2, 4, QP).terms.values())


def test_tail_residue_raises():
    sl = bn_expand(2, 8, QP)[8]
    broken = GenFunSlice(2, 8, sl.body + BiLaurent({(-1, 3): QSeries.one(QP)}))
    with pytest.raises(LaurentResidueNonzero):
        cusp_part(2, 8, QP, broken)


@pytest.mark.parametrize("N", [2, 3, 6])
def test_components_sum_to_slice(N):
    kmax = 8
    full = bn_expand(N, kmax, QP)
    comps = [eigencomponent(N, e, kmax, QP) for e in all_characters(N)]
    for k in full:
        total = BiLaurent()
        for c in comps:
            total = total + c[k].body
        assert total.equals(full[k].body)


def test_component_at_2_8():
    plus, minus = Character.from_sign(2, 1), Character.from_sign(2, -1)
    cp = cusp_part(2, 8, QP)
    assert eigencomponent_cusp(2, plus, 8, QP).even_odd().equals(cp.even_odd())
    assert not any(eigencomponent_cusp(2, minus, 8, QP).even_odd().terms.values())


@pytest.mark.parametrize("N", [1, 2, 5, 6])
def test_total_parity_is_odd(N):
    for k, sl in bn_expand(N, 10, 6).items():
        assert all((i + j) % 2 for (i, j), s in sl.body.terms.items() if s)


@pytest.mark.parametrize("N,label,w", [(2, "Delta8+", 6), (3, "Delta6-", 4)])
def test_relation_on_table_factor(N, label, w):
    row = _row(N, label)
    P = row.R.even_odd()
    # X-factor: the Y^j slice for any j with nonzero coefficient
    j = next(iter(P.y_exponents()))
    Px = P.y_slice(j)
    assert relation_on_polys(Px, N, w)
    assert cocycle_relation(Px, N, w, row.sign)


def test_relation_report_small():
    rep = four_term_relation_check(2, 10, sturm_precision(2, 10))
    assert rep["head"] and not rep["failures"]
