from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thetaperiods.qseries import NonUnitDivisor, QSeries, eta_product, qs_derive, qs_dilate, qs_div, qs_mul, sigma_series

from _strategies import qseries

P = 8


def S(*coeffs, prec=P):
    return QSeries([Fraction(c) for c in coeffs], prec)


def test_products():
    assert qs_mul(S(1, 1), S(1, -1)) == S(1, 0, -1)
    assert qs_mul(QSeries.q(P), QSeries.q(P)) == S(0, 0, 1)
    geom = QSeries([Fraction(1)] * P, P)
    assert qs_mul(geom, S(1, -1)) == QSeries.one(P)


def test_division():
    assert qs_div(QSeries.one(P), S(1, -1)) == QSeries([Fraction(1)] * P, P)
    quot = qs_div(S(0, 1, 1), S(0, 1))
    assert quot == S(1, 1, prec=P - 1) and quot.prec == P - 1
    with pytest.raises(NonUnitDivisor):
        qs_div(S(0, 1), S(0, 0, 1))


def test_dilate_examples():
    assert qs_dilate(S(0, 1, 1), 2) == S(0, 0, 1, 0, 1)
    a = S(3, 1, 4, 1, 5)
    assert qs_dilate(a, 1) == a
    assert qs_dilate(QSeries.one(P), 5) == QSeries.one(P)
    assert qs_dilate(a, 3).prec == P


def test_derivative_examples():
    assert qs_derive(QSeries.from_dict({3: 5}, P)) == QSeries.from_dict({3: 15}, P)
    assert not qs_derive(QSeries.constant(Fraction(7), P))
    assert QSeries.from_dict({4: 1}, P).derive(3)[4] == 64


def test_sigma_series():
    assert sigma_series(3, 4).coeffs == [0, 1, 9, 28]
    s0 = sigma_series(0, 12)
    assert all(s0[p] == 2 for p in (2, 3, 5, 7, 11))
    assert sigma_series(1, 5)[4] == 7


def test_delta_from_eta():
    delta = eta_product({1: 24}, 6).shift_up(1)
    assert delta.coeffs[:6] == [0, 1, -24, 252, -1472, 4830]


def test_comparison_up_to_common_precision():
    assert S(1, 2, 3, prec=3) == S(1, 2, 3, 4)


@given(qseries(), qseries(unit=True))
def test_division_round_trip(a, b):
    assert qs_div(qs_mul(a, b), b) == a


@given(qseries(), qseries(), st.integers(min_value=1, max_value=4))
def test_dilation_is_a_ring_map(a, b, d):
    assert qs_dilate(qs_mul(a, b), d) == qs_mul(qs_dilate(a, d), qs_dilate(b, d))
    assert qs_dilate(a + b, d) == qs_dilate(a, d) + qs_dilate(b, d)


@given(qseries(), qseries())
def test_leibniz(a, b):
    assert qs_derive(a * b) == qs_derive(a) * b + a * qs_derive(b)


@given(qseries(), qseries(), qseries())
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
