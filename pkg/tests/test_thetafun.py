from fractions import Fraction
from math import factorial

import pytest

from thetaperiods.eisenstein import eis_G, g_table_entry
from thetaperiods.qseries import QSeries
from thetaperiods.thetafun import (
    fkernel_via_g,
    fkernel_via_theta,
    kernel_for_weight,
    kernel_structure_check,
    kernels_agree,
    theta_reduced,
    theta_series_oracle,
)


def test_theta_linear_term():
    th = theta_reduced(6, 6)
    assert th.coeff(1, 0) == 1


def test_theta_at_q0_is_two_sinh():
    th = theta_reduced(10, 4)
    for j in range(10):
        want = Fraction(1, 2 ** (j - 1) * factorial(j)) if j % 2 else Fraction(0)
        assert th.coeff(j, 0) == want


def test_theta_is_odd_and_vanishes_at_zero():
    th = theta_reduced(12, 10)
    th.check_odd()
    assert not th.rows[0]


def test_product_matches_sum_side():
    a = theta_reduced(9, 16)
    b = theta_series_oracle(9, 16)
    assert all(x.agrees(y) for x, y in zip(a.rows, b.rows))


def test_g_table_examples():
    assert g_table_entry(2, -1, 5) == QSeries.one(5)
    assert g_table_entry(4, 0, 5)[0] == Fraction(-1, 720)
    g20 = g_table_entry(2, 0, 5)
    assert g20 == eis_G(2, 5).scale(-2)
    assert g20[0] == Fraction(1, 12)


def test_theta_route_head_and_symmetry():
    kt = fkernel_via_theta(6, 6)
    kernel_structure_check(kt)
    assert kt.coeff(-1, 0) == QSeries.one(6)
    assert kt.coeff(0, -1) == QSeries.one(6)
    for (a, b) in kt.table:
        x, y = kt.coeff(a, b), kt.coeff(b, a)
        if x is None:
            assert y is None
        else:
            assert y is not None and x.agrees(y)


@pytest.mark.parametrize("K,qprec", [(4, 8), (8, 12), (12, 16), (16, 20)])
def test_two_routes_agree(K, qprec):
    kg = kernel_for_weight(K, qprec)
    kt = fkernel_via_theta(K - 1, qprec)
    kernel_structure_check(kt)
    assert kernels_agree(kg, kt)


def test_disagreement_is_detected():
    kg = fkernel_via_g(6, 2, 8)
    kt = fkernel_via_theta(5, 8)
    kg.g[4][0] = kg.g[4][0] + QSeries.from_dict({3: 1}, 8)
    assert not kernels_agree(kg, kt)
