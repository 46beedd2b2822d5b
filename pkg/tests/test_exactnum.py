from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thetaperiods.exactnum import (
    IrrationalBeyondBound,
    MismatchedField,
    QuadElem,
    conj,
    quad_arith,
    scalar_from_json,
    scalar_to_json,
    solve_quadratic,
    squarefree_decomposition,
)

from _strategies import fractions, quads


def test_norm_product():
    x = QuadElem(1, 1, 19)
    assert quad_arith(x, conj(x), "mul") == -18


def test_conjugate_roots_sum():
    assert QuadElem(10, 2, 19) + QuadElem(10, -2, 19) == 20


def test_zero_absorbs():
    assert QuadElem(0, 0, 19) * QuadElem(7, -3, 19) == 0


def test_mismatched_field():
    with pytest.raises(MismatchedField):
        QuadElem(1, 1, 19) + QuadElem(1, 1, 57)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        quad_arith(QuadElem(1, 1, 19), QuadElem(0, 0, 19), "div")


def test_quadratic_roots_of_tensor_determinant():
    r1, r2 = solve_quadratic(Fraction(1), Fraction(-20), Fraction(24))
    assert {r1, r2} == {QuadElem(10, 2, 19), QuadElem(10, -2, 19)}


def test_quadratic_rational_roots():
    assert set(solve_quadratic(Fraction(1), Fraction(0), Fraction(-1))) == {1, -1}
    r1, r2 = solve_quadratic(Fraction(1), Fraction(-2), Fraction(1))
    assert r1 == r2 == 1 and isinstance(r1, Fraction)


def test_squarefree_split():
    assert squarefree_decomposition(76) == (2, 19)
    assert squarefree_decomposition(228) == (2, 57)


def test_factoring_bound():
    big = (10**6 + 3) ** 2 * (10**6 + 33)  # two primes beyond the trial-division bound
    with pytest.raises(IrrationalBeyondBound):
        squarefree_decomposition(big, bound=10**3)


def test_json_round_trip():
    for x in (Fraction(-3, 7), QuadElem(Fraction(1, 2), -3, 19)):
        assert scalar_from_json(scalar_to_json(x)) == x
    assert scalar_to_json(QuadElem(10, 2, 19)) == {"a": "10/1", "b": "2/1", "D": 19}


@given(fractions, fractions, fractions)
def test_rational_ring_laws(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * (q + r) == p * q + p * r


@given(quads(), quads())
def test_conjugation_is_multiplicative(x, y):
    assert conj(x * y) == conj(x) * conj(y)
    assert conj(conj(x)) == x


@given(quads(), quads().filter(bool))
def test_division_inverts_multiplication(x, y):
    assert (x * y) / y == x


@given(fractions.filter(bool), fractions, fractions)
def test_roots_are_exact(c2, c1, c0):
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return
    for r in solve_quadratic(c2, c1, c0):
        assert c2 * r * r + c1 * r + c0 == 0
