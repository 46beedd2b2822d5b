import json
from fractions import Fraction
from functools import lru_cache

import pytest

from thetaperiods.arith import Character, sturm_precision
from thetaperiods.exactnum import QuadElem
from thetaperiods.extract import (
    Degenerate,
    RankTooHigh,
    UnsupportedLevel,
    _W_condition,
    assemble_matrices,
    block_span,
    cocycle_relation,
    det_a_lambda,
    dim_cusp_forms,
    extract_blocks,
    extract_eigenforms_safe,
    factor_rank_one,
    factor_with_oldforms,
    in_parity_space,
    is_multiplicative,
    oldform_records,
    parity_basis,
    phi_pairing,
    phi_tensor,
    reconstruct_block,
    solve_rstar,
    wspace_dimension,
)
from thetaperiods.fixtures import table_rows
from thetaperiods.genfun import cusp_part
from thetaperiods.polyslash import LaurentPoly, W_word, primitive_part, slash


def L(d):
    return LaurentPoly({int(k): Fraction(v) for k, v in d.items()})


@lru_cache(maxsize=None)
def blocks(N, k):
    return extract_eigenforms_safe(N, k, sturm_precision(N, k))


def test_parity_basis_examples():
    assert parity_basis(5, 6, 1, "ev").vectors == [L({6: 125, 0: -1}), L({4: 5, 2: -1})]
    assert parity_basis(5, 6, -1, "od").vectors == [L({5: 25, 1: -1})]
    assert parity_basis(5, 6, 1, "od").vectors == [L({5: 25, 1: 1}), L({3: 1})]
    assert parity_basis(2, 0, 1, "od").vectors == []
    with pytest.raises(UnsupportedLevel):
        parity_basis(4, 6, 1, "ev")


@pytest.mark.parametrize("N", [1, 2, 3, 5, 6, 7])
@pytest.mark.parametrize("w", [2, 4, 6, 8, 10])
def test_parity_basis_invariants(N, w):
    total = 0
    for eps in (1, -1):
        for par in ("ev", "od"):
            B = parity_basis(N, w, eps, par)
            total += len(B)
            for v in B.vectors:
                assert not (v + slash(v, W_word(N), w) * eps)
                assert primitive_part(v)[0] == 1
                assert all(n % 2 == (par == "od") for n in v.exponents())
            tops = [v.max_exp() for v in B.vectors]
            assert tops == sorted(set(tops), reverse=True)  # distinct tops: independent
    assert total == w + 1


def test_block_matrices_at_5_8():
    b = extract_blocks(5, 8, sturm_precision(5, 8))
    minus = b[Character.from_sign(5, -1)]
    S = minus.scaled()
    assert minus.shape() == (2, 1)
    ratio = S[0][0].coeffs[1] / S[1][0].coeffs[1]
    assert ratio == Fraction(-6, 65)
    assert S[1][0].scale(Fraction(-25, 3)).coeffs[:5] == [0, 1, -14, -48, 68]
    plus = b[Character.from_sign(5, 1)]
    basis, piv, mats = block_span(plus)
    assert piv == [1, 2] and len(mats) == 2


def test_zero_cusp_space():
    bl = assemble_matrices(cusp_part(2, 4, 8), 2, 4, 8)
    assert bl[1].is_zero() and bl[-1].is_zero()
    assert factor_rank_one(bl[1], Character.from_sign(2, 1)) == []


def test_quadratic_block_at_5_8():
    plus = extract_blocks(5, 8, sturm_precision(5, 8))[Character.from_sign(5, 1)]
    assert det_a_lambda(plus) == (Fraction(16, 39125), Fraction(-64, 7825), Fraction(384, 39125))
    recs = factor_rank_one(plus, Character.from_sign(5, 1))
    a2 = sorted((r.q[2] for r in recs), key=str)
    assert a2 == sorted([QuadElem(10, 2, 19), QuadElem(10, -2, 19)], key=str)
    f8 = next(r for r in recs if r.q[2].b > 0)
    assert f8.q[3] == QuadElem(10, -16, 19)


def test_odd_block_at_5_8():
    row = next(r for r in table_rows(5) if r.label == "Delta8-")
    (rec,) = blocks(5, 8)[Character.from_sign(5, -1)].records
    assert rec.tensor().equals(row.R)


def test_degenerate_at_7_6():
    res = blocks(7, 6)[Character.from_sign(7, -1)]
    assert res.status == "degenerate"
    assert res.shared_factor == L({3: 7, 1: -1})
    with pytest.raises(Degenerate):
        factor_rank_one(res.block, Character.from_sign(7, -1))


def test_rank_three_is_reported():
    b = extract_blocks(5, 12, sturm_precision(5, 12))[Character.from_sign(5, 1)]
    with pytest.raises(RankTooHigh) as err:
        factor_rank_one(b, Character.from_sign(5, 1))
    assert err.value.r == 3


def test_oldform_removal_at_5_12():
    qp = sturm_precision(5, 12)
    eps = Character.from_sign(5, 1)
    b = extract_blocks(5, 12, qp)[eps]
    (old,) = oldform_records(5, 12, eps, qp)
    # Delta(tau) + 5^6 Delta(5 tau)
    assert old.q.coeffs[:6] == [0, 1, -24, 252, -1472, 4830 + 15625]
    recs = factor_with_oldforms(b, eps, qp)
    assert len(recs) == 3 and reconstruct_block(b, recs)
    assert all(is_multiplicative(r.q) for r in recs)
    assert recs[1].D == 151 and recs[2].q.coeffs == recs[1].conjugate().q.coeffs


@pytest.mark.parametrize("N", [2, 3, 5])
def test_completeness(N):
    for k in range(4, 13, 2):
        count = 0
        for eps, res in blocks(N, k).items():
            recs = res.records
            if res.status == "rank-too-high":
                recs = factor_with_oldforms(res.block, eps, sturm_precision(N, k))
            count += len(recs)
        assert count == dim_cusp_forms(N, k), (N, k)


@pytest.mark.parametrize("N", [2, 3, 5])
def test_record_invariants(N):
    for k in range(4, 15, 2):
        for eps, res in blocks(N, k).items():
            s = eps(N)
            for r in res.records:
                assert r.q[1] == 1
                assert is_multiplicative(r.q)
                assert all(n % 2 == 0 for n in r.P.exponents())
                assert all(n % 2 == 1 for n in r.Q.exponents())
                assert in_parity_space(r.P, N, k - 2, s)
                assert in_parity_space(r.Q, N, k - 2, s)
                if r.D is None:
                    c, _ = primitive_part(r.P)
                    assert c == 1
                assert reconstruct_block(res.block, res.records)


def test_galois_equivariance():
    recs = blocks(5, 8)[Character.from_sign(5, 1)].records
    f, g = recs
    assert f.conjugate().q.coeffs == g.q.coeffs
    assert f.conjugate().tensor().equals(g.tensor())


def test_record_json():
    (rec,) = blocks(2, 8)[Character.from_sign(2, 1)].records
    doc = json.loads(rec.dumps())
    assert set(doc) == {"N", "k", "eps", "D", "q", "P", "Q"}
    assert doc["eps"] == {"2": 1} and doc["D"] is None
    assert doc["q"][:3] == ["0/1", "1/1", "-8/1"]
    assert doc["P"] == "8X^6-34X^4+17X^2-1"


def test_phi_examples():
    for N, label in ((2, "Delta8+"), (3, "Delta6-")):
        row = next(r for r in table_rows(N) if r.label == label)
        assert phi_tensor(N, row.R, row.k - 2, row.sign) == 1
    with pytest.raises(UnsupportedLevel):
        phi_pairing(5, L({0: 1}), L({1: 1}), 2, 1)


def _pairs_with_two_forms():
    for p in (2, 3):
        for k in range(8, 17, 2):
            for eps, res in blocks(p, k).items():
                if len(res.records) >= 2:
                    yield p, k, eps, res.records


def test_phi_cross_pairing_vanishes():
    found = 0
    for p, k, eps, recs in _pairs_with_two_forms():
        f, g = recs[:2]
        assert phi_pairing(p, f.P, g.Q, k - 2, eps(p)) == 0
        assert phi_pairing(p, g.P, f.Q, k - 2, eps(p)) == 0
        assert phi_pairing(p, f.P, f.Q, k - 2, eps(p)) == 1
        found += 1
    assert found


def test_rescaling_leaves_checks_alone():
    (rec,) = blocks(3, 8)[Character.from_sign(3, 1)].records
    for c in (Fraction(5), Fraction(-2, 7)):
        other = rec.rescaled(c)
        assert other.tensor().equals(rec.tensor())
        assert phi_tensor(3, other.tensor(), 6, 1) == phi_tensor(3, rec.tensor(), 6, 1)
        assert cocycle_relation(other.P, 3, 6, 1) and cocycle_relation(other.Q, 3, 6, 1)


def test_rstar_solutions_satisfy_relation():
    for eps in (1, -1):
        for par in ("ev", "od"):
            for v in parity_basis(5, 6, eps, par).vectors:
                sol = solve_rstar(v, 6, eps, par)
                assert not _W_condition(v, sol.particular, 6)
                if sol.kernel is not None:
                    assert not _W_condition(LaurentPoly(), sol.kernel, 6)


def test_rstar_kernel_direction():
    sol = solve_rstar(L({6: 125, 0: -1}), 6, 1, "ev")
    five = L({2: 5, 0: -1})
    cube = five * five * five
    c = cube.leading() / sol.kernel.leading()
    assert sol.kernel * c == cube
    assert solve_rstar(L({5: 25, 1: 1}), 6, 1, "od").kernel is None
    assert solve_rstar(L({6: 125, 0: 1}), 6, -1, "ev").kernel is None


@pytest.mark.parametrize("k", [4, 6, 8, 10, 12])
def test_wspace_dimension_counts(k):
    w = k - 2
    od = {e: wspace_dimension(w, e, "od") for e in (1, -1)}
    ev = {e: wspace_dimension(w, e, "ev") for e in (1, -1)}
    assert sum(od.values()) == dim_cusp_forms(5, k)
    for e in (1, -1):
        # the even periods of cusp forms have codimension one
        assert ev[e] == od[e] + 1
        res = extract_eigenforms_safe(5, k, sturm_precision(5, k))[Character.from_sign(5, e)]
        if res.status == "ok":
            assert len(res.records) == od[e]
