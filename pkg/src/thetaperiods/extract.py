"""Recovering Hecke eigenforms and period tensors from cuspidal slices.

The even-odd part of a cuspidal slice is written in the tensor bases
V^{ev,eps} x V^{od,eps}.  Each block is a matrix of q-series which is a sum of
rank-one scalar matrices times eigenforms; for blocks spanned by at most two
q-series the eigenforms and their tensors are solved for directly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, gcd

from .arith import Character, all_characters, divisors, is_squarefree, prime_factors
from .exactnum import QuadElem, common_field, conj, scalar_to_json, solve_quadratic
from .genfun import cusp_part, eigencomponent_cusp, bn_expand, eigencomponent
from .polyslash import (
    A_p_element,
    BiLaurent,
    GroupWord,
    LaurentPoly,
    T_inv_word,
    T_word,
    apply_group_ring,
    eps_free_words,
    pair_vw,
    primitive_part,
    render_poly,
    slash,
)
from .qseries import QSeries


class UnsupportedLevel(ValueError):
    pass


class SingularBasisChange(ArithmeticError):
    pass


class MixedBlockNonzero(ArithmeticError):
    """The slice has a component in V^{ev,e} x V^{od,-e}."""


class RankTooHigh(ValueError):
    def __init__(self, r: int):
        super().__init__(f"block spanned by {r} q-series; only r <= 2 is supported")
        self.r = r


class NotRankOne(ArithmeticError):
    pass


class Degenerate(ArithmeticError):
    """The block does not determine its eigenforms (e.g. too few rows or columns)."""


class NoSolution(ArithmeticError):
    pass


# -- small exact linear algebra ---------------------------------------------

def rref(rows: list[list], ncols: int):
    """Reduced row echelon form over Q or Q(sqrt D); returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], Fraction) else Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def mat_inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(M[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, piv = rref(aug, n)
    if piv != list(range(n)):
        raise SingularBasisChange("basis matrix is singular")
    return [row[n:] for row in red]


def nullspace(M: list[list], ncols: int) -> list[list]:
    red, piv = rref(M, ncols)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        out.append(v)
    return out


# -- parity bases -------------------------------------------------------------

@dataclass
class ParityBasis:
    N: int
    w: int
    eps: int
    parity: str
    vectors: list[LaurentPoly]

    def __len__(self):
        return len(self.vectors)


def parity_basis(N: int, w: int, eps: int, parity: str) -> ParityBasis:
    """Basis of Ker(1 + eps W_N) on V_w intersected with even or odd polynomials.

    X^n - eps (-1)^n N^{w/2-n} X^{w-n} for n < w/2, plus X^{w/2} when
    eps = -(-1)^{w/2}; each vector primitive and listed by descending degree.
    """
    if not is_squarefree(N):
        raise UnsupportedLevel("level must be squarefree")
    if w % 2 or w < 0:
        raise ValueError("w must be even and >= 0")
    want = 0 if parity == "ev" else 1
    vecs = []
    for n in range(0, w // 2):
        if n % 2 != want:
            continue
        c = Fraction(-eps * (-1) ** n) * Fraction(N) ** (w // 2 - n)
        vecs.append(primitive_part(LaurentPoly({n: 1, w - n: c}))[1])
    mid = w // 2
    if mid % 2 == want and eps == -((-1) ** mid):
        vecs.append(LaurentPoly({mid: 1}))
    vecs.sort(key=lambda v: -v.max_exp())
    return ParityBasis(N, w, eps, parity, vecs)


def in_parity_space(P: LaurentPoly, N: int, w: int, eps: int) -> bool:
    return not (P + slash(P, GroupWord(0, -1, N, 0, 1), w) * eps)


# -- block assembly -----------------------------------------------------------

@dataclass
class Block:
    """Even-odd slice restricted to V^{ev,s} x V^{od,s}: entries[i][j] for rows x cols."""

    N: int
    k: int
    sign: int
    rows: ParityBasis
    cols: ParityBasis
    entries: list[list[QSeries]]

    def shape(self):
        return len(self.rows), len(self.cols)

    def is_zero(self) -> bool:
        return all(not e for row in self.entries for e in row)

    def scaled(self) -> list[list[QSeries]]:
        f = Fraction(factorial(self.k - 2))
        return [[e.scale(f) for e in row] for row in self.entries]


def _coord_matrix(vectors: list[LaurentPoly], exps: list[int]) -> list[list[Fraction]]:
    """Columns = vectors, rows = monomials."""
    return [[v[e] if v[e] is not None else Fraction(0) for v in vectors] for e in exps]


def _coeff(P: LaurentPoly, e: int):
    return P.terms.get(e, Fraction(0))


def assemble_matrices(cusp: BiLaurent, N: int, k: int, qprec: int) -> dict[int, Block]:
    """Express the even-odd cusp part in the parity bases; returns the blocks for sign +1 and -1."""
    w = k - 2
    evod = cusp.even_odd()
    bx = {s: parity_basis(N, w, s, "ev") for s in (1, -1)}
    by = {s: parity_basis(N, w, s, "od") for s in (1, -1)}
    xb = bx[1].vectors + bx[-1].vectors
    yb = by[1].vectors + by[-1].vectors
    xe = list(range(0, w + 1, 2))
    ye = list(range(1, w + 1, 2))
    if len(xb) != len(xe) or len(yb) != len(ye):
        raise SingularBasisChange("parity bases have the wrong size")
    Ex = mat_inverse([[_coeff(v, e) for v in xb] for e in xe])
    Ey = mat_inverse([[_coeff(v, e) for v in yb] for e in ye])
    zero = QSeries.zero(qprec)
    C = [[evod.terms.get((i, j), zero) for j in ye] for i in xe]
    # A = Ex C Ey^T
    tmp = [[_lin([Ex[a][r] for r in range(len(xe))], [C[r][j] for r in range(len(xe))], qprec)
            for j in range(len(ye))] for a in range(len(xb))]
    A = [[_lin([Ey[b][c] for c in range(len(ye))], tmp[a], qprec) for b in range(len(yb))]
         for a in range(len(xb))]
    nx, ny = len(bx[1]), len(by[1])
    for a in range(len(xb)):
        for b in range(len(yb)):
            if (a < nx) != (b < ny) and A[a][b]:
                raise MixedBlockNonzero(f"weight {k}: mixed-sign entry ({a},{b})")
    out = {}
    out[1] = Block(N, k, 1, bx[1], by[1], [row[:ny] for row in A[:nx]])
    out[-1] = Block(N, k, -1, bx[-1], by[-1], [row[ny:] for row in A[nx:]])
    return out


def _lin(coeffs, series, qprec):
    acc = QSeries.zero(qprec)
    for c, s in zip(coeffs, series):
        if c and s:
            acc = acc + s.scale(c)
    return acc


# -- eigenform records ----------------------------------------------------------

@dataclass
class EigenformRecord:
    N: int
    k: int
    eps: Character
    q: QSeries
    P: LaurentPoly
    Q: LaurentPoly

    @property
    def D(self) -> int | None:
        vals = list(self.q.coeffs) + list(self.P.terms.values()) + list(self.Q.terms.values())
        return common_field(vals)

    def tensor(self) -> BiLaurent:
        return BiLaurent.from_product(self.P, self.Q)

    def rescaled(self, c) -> "EigenformRecord":
        return EigenformRecord(self.N, self.k, self.eps, self.q, self.P * c, self.Q * (1 / c))

    def conjugate(self) -> "EigenformRecord":
        return EigenformRecord(self.N, self.k, self.eps, self.q.map(conj),
                               self.P.map_coeffs(conj), self.Q.map_coeffs(conj))

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "eps": self.eps.as_dict(),
            "D": self.D,
            "q": [scalar_to_json(c) for c in self.q.coeffs],
            "P": render_poly(self.P, "X"),
            "Q": render_poly(self.Q, "Y"),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _is_rational(x) -> bool:
    return isinstance(x, Fraction) or (isinstance(x, QuadElem) and x.b == 0)


def _as_rational(x):
    return x.a if isinstance(x, QuadElem) else x


def normalize_tensor(P: LaurentPoly, Q: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """P integral primitive with positive leading coefficient (over Q), monic over Q(sqrt D)."""
    if all(_is_rational(c) for c in list(P.terms.values()) + list(Q.terms.values())):
        P = P.map_coeffs(_as_rational)
        Q = Q.map_coeffs(_as_rational)
        c, P0 = primitive_part(P)
        return P0, Q * c
    lead = P.leading()
    return P * (1 / lead), Q * lead


def _factor_scalar_rank_one(M: list[list]):
    """M = p q^T for a nonzero scalar matrix; raises NotRankOne otherwise."""
    i0 = next((i for i, row in enumerate(M) if any(row)), None)
    if i0 is None:
        raise NotRankOne("zero matrix")
    j0 = next(j for j, x in enumerate(M[i0]) if x)
    qv = list(M[i0])
    pv = [row[j0] / M[i0][j0] for row in M]
    for i, row in enumerate(M):
        for j, x in enumerate(row):
            if x != pv[i] * qv[j]:
                raise NotRankOne("matrix is not of rank one")
    return pv, qv


def _combine(basis: ParityBasis, coords) -> LaurentPoly:
    out = LaurentPoly()
    for v, c in zip(basis.vectors, coords):
        if c:
            out = out + v * c
    return out


def _entry_matrix(block: Block):
    entries = [e for row in block.scaled() for e in row]
    return entries


def block_span(block: Block) -> tuple[list[QSeries], list[int], list[list[list]]]:
    """Echelon basis F_i of the span of the (scaled) entries and the coefficient matrices M_i."""
    S = block.scaled()
    nr, nc = block.shape()
    flat = [S[i][j] for i in range(nr) for j in range(nc)]
    if not flat:
        return [], [], []
    prec = min(s.prec for s in flat)
    vecs = [list(s.coeffs[:prec]) for s in flat]
    red, piv = rref(vecs, prec)
    basis = [QSeries(r, prec) for r in red]
    # coordinates of each entry: read off at the pivot positions
    mats = [[[S[i][j][p] for j in range(nc)] for i in range(nr)] for p in piv]
    return basis, piv, mats


def factor_rank_one(block: Block, eps: Character) -> list[EigenformRecord]:
    basis, piv, mats = block_span(block)
    r = len(basis)
    if r == 0:
        return []
    if r >= 3:
        raise RankTooHigh(r)
    if piv[0] != 1 or (r == 2 and piv[1] != 2):
        raise Degenerate(f"echelon pivots {piv} are not at q^1, q^2")
    if r == 1:
        pv, qv = _factor_scalar_rank_one(mats[0])
        return [_record(block, eps, basis[0], pv, qv)]
    M1, M2 = mats
    lam = eigenvalues(M1, M2)
    l1, l2 = lam
    out = []
    for li, lo in ((l1, l2), (l2, l1)):
        Ri = [[(M2[i][j] - lo * M1[i][j]) / (li - lo) for j in range(len(M1[0]))] for i in range(len(M1))]
        pv, qv = _factor_scalar_rank_one(Ri)
        f = basis[0] + basis[1].map(lambda c, li=li: c * li)
        out.append(_record(block, eps, f, pv, qv))
    return out


def minors_polynomials(M1, M2) -> list[tuple]:
    """All 2x2 minors of a(lambda) = M2 - lambda M1 as (c2, c1, c0)."""
    nr, nc = len(M1), len(M1[0]) if M1 else 0
    out = []
    for i in range(nr):
        for i2 in range(i + 1, nr):
            for j in range(nc):
                for j2 in range(j + 1, nc):
                    # det [[b11 - l a11, b12 - l a12], [b21 - l a21, b22 - l a22]]
                    a11, a12, a21, a22 = M1[i][j], M1[i][j2], M1[i2][j], M1[i2][j2]
                    b11, b12, b21, b22 = M2[i][j], M2[i][j2], M2[i2][j], M2[i2][j2]
                    c2 = a11 * a22 - a12 * a21
                    c1 = -(a11 * b22 + b11 * a22 - a12 * b21 - b12 * a21)
                    c0 = b11 * b22 - b12 * b21
                    out.append((c2, c1, c0))
    return out


def eigenvalues(M1, M2):
    """Common roots of the 2x2 minors of M2 - lambda M1 (two of them, possibly conjugate)."""
    polys = [p for p in minors_polynomials(M1, M2) if any(p)]
    if not polys:
        raise Degenerate("no nonvanishing 2x2 minor: the eigenforms are not separated")
    ref = next((p for p in polys if p[0]), None)
    if ref is None:
        raise Degenerate("minors have degree < 2")
    for p in polys:
        if any(p[a] * ref[b] != p[b] * ref[a] for a in range(3) for b in range(3)):
            raise Degenerate("2x2 minors are not proportional")
    return solve_quadratic(*ref)


def _record(block: Block, eps: Character, f: QSeries, pv, qv) -> EigenformRecord:
    P = _combine(block.rows, pv)
    Q = _combine(block.cols, qv)
    P, Q = normalize_tensor(P, Q)
    return EigenformRecord(block.N, block.k, eps, f, P, Q)


def det_a_lambda(block: Block) -> tuple:
    """det(M2 - lambda M1) as (c2, c1, c0) for a square 2x2 block of rank 2."""
    _, _, mats = block_span(block)
    if len(mats) != 2 or block.shape() != (2, 2):
        raise Degenerate("needs a 2x2 block spanned by two series")
    return minors_polynomials(*mats)[0]


# -- top-level extraction ---------------------------------------------------------

def character_of_sign(N: int, s: int) -> Character:
    """The unique character with eps(N) = s, for prime N."""
    if len(prime_factors(N)) != 1:
        raise ValueError("sign determines the character only for prime N")
    return Character.from_sign(N, s)


def extract_blocks(N: int, k: int, qprec: int) -> dict[Character, Block]:
    """One block per character: from the full cusp part for prime N, from eigencomponents otherwise."""
    out = {}
    if len(prime_factors(N)) == 1:
        blocks = assemble_matrices(cusp_part(N, k, qprec), N, k, qprec)
        for s, b in blocks.items():
            out[character_of_sign(N, s)] = b
        return out
    comps = eigencomponent_all(N, k, qprec)
    for eps, cusp in comps.items():
        blocks = assemble_matrices(cusp, N, k, qprec)
        s = eps(N)
        if not blocks[-s].is_zero():
            raise MixedBlockNonzero(f"component {eps} leaks into sign {-s}")
        out[eps] = blocks[s]
    return out


def eigencomponent_all(N: int, k: int, qprec: int) -> dict[Character, BiLaurent]:
    return {eps: eigencomponent_cusp(N, eps, k, qprec) for eps in all_characters(N)}


def extract_eigenforms(N: int, k: int, qprec: int) -> dict[Character, list[EigenformRecord]]:
    return {eps: factor_rank_one(b, eps) for eps, b in extract_blocks(N, k, qprec).items()}


def factor_with_eigenvalues(block: Block, eps: Character, lams) -> list[EigenformRecord]:
    """Split a rank-two block once the two a_2 values are supplied from outside.

    This is what remains possible when the minors vanish identically: the
    eigenforms F_1 + lambda F_2 are still determined, and so is each R_i.
    """
    basis, piv, mats = block_span(block)
    if len(basis) != 2 or piv != [1, 2]:
        raise Degenerate(f"expected two series with pivots [1, 2], got {piv}")
    M1, M2 = mats
    l1, l2 = lams
    out = []
    for li, lo in ((l1, l2), (l2, l1)):
        Ri = [[(M2[i][j] - lo * M1[i][j]) / (li - lo) for j in range(len(M1[0]))] for i in range(len(M1))]
        pv, qv = _factor_scalar_rank_one(Ri)
        f = basis[0] + basis[1].map(lambda c, li=li: c * li)
        out.append(_record(block, eps, f, pv, qv))
    return out


@dataclass
class BlockResult:
    eps: Character
    block: Block
    records: list[EigenformRecord]
    status: str = "ok"  # ok | degenerate | rank-too-high | not-rank-one
    message: str = ""
    shared_factor: LaurentPoly | None = None

    def to_json(self) -> dict:
        out = {"eps": self.eps.as_dict(), "status": self.status, "message": self.message,
               "forms": [r.to_json() for r in self.records]}
        if self.shared_factor is not None:
            out["shared_factor"] = render_poly(self.shared_factor, "Y" if self.shared_factor.max_exp() % 2 else "X")
        return out


def shared_factor(block: Block) -> LaurentPoly | None:
    """When one side of the block is one-dimensional, every eigenform shares that factor."""
    if len(block.cols) == 1:
        return block.cols.vectors[0]
    if len(block.rows) == 1:
        return block.rows.vectors[0]
    return None


def extract_eigenforms_safe(N: int, k: int, qprec: int) -> dict[Character, BlockResult]:
    """Per-block extraction that reports failures instead of raising."""
    out = {}
    for eps, b in extract_blocks(N, k, qprec).items():
        try:
            out[eps] = BlockResult(eps, b, factor_rank_one(b, eps))
        except Degenerate as exc:
            out[eps] = BlockResult(eps, b, [], "degenerate", str(exc), shared_factor(b))
        except RankTooHigh as exc:
            out[eps] = BlockResult(eps, b, [], "rank-too-high", str(exc))
        except NotRankOne as exc:
            out[eps] = BlockResult(eps, b, [], "not-rank-one", str(exc))
    return out


def oldform_records(N: int, k: int, eps: Character, qprec: int) -> list[EigenformRecord]:
    """Lifts of the level-one eigenforms of weight k into the eps-block at prime level N.

    q-side: sum_{d|N} eps(d) d^{k/2} f(d tau); tensor side: (lambda x lambda)(R_f)
    divided by the Petersson ratio 2(p + eps(p) a_p p^{1-k/2} + 1).
    """
    from .eisenstein import oldform_psp_ratio
    from .polyslash import lambda_poly
    from .qseries import qs_dilate
    out = []
    for res in extract_eigenforms_safe(1, k, qprec).values():
        if res.status != "ok":
            raise Degenerate(f"level one, weight {k}: {res.status}")
        for f in res.records:
            q = QSeries.zero(qprec)
            for d in divisors(N):
                q = q + qs_dilate(f.q, d).scale(Fraction(eps(d) * d ** (k // 2)))
            ratio = oldform_psp_ratio(k, N, eps, {p: f.q[p] for p in prime_factors(N)})
            P = lambda_poly(f.P, N, eps, k)
            Q = lambda_poly(f.Q, N, eps, k) * (1 / ratio)
            P, Q = normalize_tensor(P, Q)
            out.append(EigenformRecord(N, k, eps, q, P, Q))
    return out


def subtract_records(block: Block, recs: list[EigenformRecord]) -> Block:
    """The block with the contributions R_f f of the given records removed."""
    inv = Fraction(1, factorial(block.k - 2))
    entries = [row[:] for row in block.entries]
    for rec in recs:
        pc = _coords(block.rows, rec.P)
        qc = _coords(block.cols, rec.Q)
        for i in range(len(entries)):
            for j in range(len(entries[i])):
                if pc[i] * qc[j]:
                    entries[i][j] = entries[i][j] - rec.q.truncate(entries[i][j].prec).scale(pc[i] * qc[j] * inv)
    return Block(block.N, block.k, block.sign, block.rows, block.cols, entries)


def factor_with_oldforms(block: Block, eps: Character, qprec: int) -> list[EigenformRecord]:
    """Remove the known level-one oldforms, then factor the remainder blindly.

    Used when a block at prime level is spanned by more than two series; the
    remainder must again have rank at most two.
    """
    old = oldform_records(block.N, block.k, eps, qprec)
    rest = subtract_records(block, old)
    return old + factor_rank_one(rest, eps)


def reconstruct_block(block: Block, recs: list[EigenformRecord]) -> bool:
    """sum_f R_f f over the records reproduces the scaled block entries."""
    S = block.scaled()
    nr, nc = block.shape()
    # coordinates of the tensors in the block bases
    acc = [[None] * nc for _ in range(nr)]
    for rec in recs:
        pc = _coords(block.rows, rec.P)
        qc = _coords(block.cols, rec.Q)
        for i in range(nr):
            for j in range(nc):
                term = rec.q.map(lambda c, s=pc[i] * qc[j]: c * s)
                acc[i][j] = term if acc[i][j] is None else acc[i][j] + term
    for i in range(nr):
        for j in range(nc):
            got = acc[i][j]
            if got is None:
                if S[i][j]:
                    return False
                continue
            diff = got - S[i][j]
            if any(diff.coeffs):
                return False
    return True


def _coords(basis: ParityBasis, P: LaurentPoly) -> list:
    """Coordinates of P in a parity basis (each basis vector has a distinct top monomial)."""
    coords = []
    rest = P
    for v in basis.vectors:
        top = v.max_exp()
        c = rest.terms.get(top, Fraction(0)) / v[top]
        coords.append(c)
        if c:
            rest = rest - v * c
    if rest:
        raise ValueError("polynomial is not in the span of the parity basis")
    return coords


def is_multiplicative(f: QSeries) -> bool:
    prec = f.prec
    for m in range(2, prec):
        for n in range(m + 1, prec):
            if m * n >= prec:
                break
            if gcd(m, n) == 1 and f[m] * f[n] != f[m * n]:
                return False
    return True


# -- dimensions -------------------------------------------------------------------

def dim_cusp_forms(N: int, k: int) -> int:
    """dim S_k(Gamma_0(N)) for squarefree N and even k >= 2."""
    ps = prime_factors(N)
    mu = 1
    nu2 = 1
    nu3 = 1
    for p in ps:
        mu *= p + 1
        nu2 *= 1 + (0 if p == 2 else (1 if p % 4 == 1 else -1))
        nu3 *= 1 + (0 if p == 3 else (1 if p % 3 == 1 else -1))
    c = 2 ** len(ps)
    g = 1 + Fraction(mu, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(c, 2)
    assert g.denominator == 1
    g = int(g)
    if k == 2:
        return g
    return (k - 1) * (g - 1) + (k // 2 - 1) * c + nu2 * (k // 4) + nu3 * (k // 3)


# -- pairings ---------------------------------------------------------------------

def phi_pairing(p: int, P: LaurentPoly, Q: LaurentPoly, w: int, eps: int):
    """(1/2p) (P|A_p, Q) with the eps-twisted action."""
    if p not in (2, 3):
        raise UnsupportedLevel("the pairing is defined for p = 2, 3")
    PA = apply_group_ring(P, A_p_element(p), w, eps)
    return pair_vw(PA, Q, w) / (2 * p)


def phi_tensor(p: int, B: BiLaurent, w: int, eps: int):
    """Phi extended linearly to a tensor sum c_ij X^i Y^j."""
    acc = Fraction(0)
    for (i, j), c in B.terms.items():
        acc = acc + c * phi_pairing(p, LaurentPoly({i: 1}), LaurentPoly({j: 1}), w, eps)
    return acc


def cocycle_relation(P: LaurentPoly, p: int, w: int, eps: int) -> bool:
    """sum_{j<2p} P|_{eps} U_p^j = 0 with the twisted action."""
    from .polyslash import cocycle_sum
    return not cocycle_sum(P, p, w, eps)


_A5 = GroupWord(2, -1, 5, -2, 0)


def _compose_affine(P: LaurentPoly) -> LaurentPoly:
    """P(2X - 1)."""
    out = LaurentPoly()
    for n, c in P.terms.items():
        out = out + LaurentPoly({i: Fraction(comb(n, i) * 2**i * (-1) ** (n - i)) for i in range(n + 1)}) * c
    return out


def _W_condition(r: LaurentPoly, rs: LaurentPoly, w: int) -> LaurentPoly:
    S = r - _compose_affine(rs)
    return S + slash(S, _A5, w)


@dataclass
class RStarSolution:
    particular: LaurentPoly
    kernel: LaurentPoly | None
    basis: ParityBasis
    matrix: list[list[Fraction]] | None = None  # r-coordinates -> r*-coordinates


def solve_rstar(r: LaurentPoly, w: int, eps: int, parity: str) -> RStarSolution:
    """Solve (r(X) - r*(2X-1))|(1+A) = 0 for r* in V^{parity,eps}_{w,5}."""
    basis = parity_basis(5, w, eps, parity)
    n = len(basis)
    base = _W_condition(r, LaurentPoly(), w)
    cols = [(_W_condition(LaurentPoly(), v, w)) for v in basis.vectors]
    exps = sorted(set(base.exponents()).union(*[set(c.exponents()) for c in cols]))
    # sum_i x_i cols_i = -base
    rows = [[c.terms.get(e, Fraction(0)) for c in cols] + [-base.terms.get(e, Fraction(0))] for e in exps]
    red, piv = rref(rows, n + 1)
    if n in piv:
        raise NoSolution("no r* satisfies the relation")
    x = [Fraction(0)] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    ker = nullspace([row[:n] for row in rows], n) if rows else [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    if len(ker) > 1:
        raise NoSolution("solution family has dimension > 1")
    kern = _combine(basis, ker[0]) if ker else None
    return RStarSolution(_combine(basis, x), kern, basis)


def rstar_matrix(w: int, eps: int, parity: str) -> tuple[list[list[Fraction]], list[Fraction] | None]:
    """The linear map r -> r* in basis coordinates (particular solution) plus the kernel coordinates."""
    basis = parity_basis(5, w, eps, parity)
    mat = []
    ker = None
    for v in basis.vectors:
        sol = solve_rstar(v, w, eps, parity)
        mat.append(_coords(basis, sol.particular))
        if sol.kernel is not None:
            ker = _coords(basis, sol.kernel)
    # columns = images of basis vectors
    return [list(col) for col in zip(*mat)], ker


def wspace_dimension(w: int, eps: int, parity: str) -> int:
    """dim of the space of pairs (r, r*) in V^{parity,eps}_{w,5} x V^{parity,eps}_{w,5} with the W-relation."""
    vecs = parity_basis(5, w, eps, parity).vectors
    empty = LaurentPoly()
    cols = [_W_condition(v, empty, w) for v in vecs] + [_W_condition(empty, v, w) for v in vecs]
    exps = sorted(set().union(*[set(c.exponents()) for c in cols])) if cols else []
    if not exps:
        return len(cols)
    return len(nullspace([[c.terms.get(e, Fraction(0)) for c in cols] for e in exps], len(cols)))


def _D_action(P: LaurentPoly, w: int) -> LaurentPoly:
    return slash(P, T_word(), w) - slash(P, T_inv_word(), w)


def hab5_raw(P: LaurentPoly, Q: LaurentPoly, w: int, eps: int, m=Fraction(0)) -> Fraction:
    """(P, Q*|(T - T^-1)) + (Q, P*|(T - T^-1)) for P even, Q odd; m moves P* along the kernel."""
    Ps = solve_rstar(P, w, eps, "ev")
    Qs = solve_rstar(Q, w, eps, "od")
    pstar = Ps.particular + (Ps.kernel * m if Ps.kernel is not None else LaurentPoly())
    qstar = Qs.particular + (Qs.kernel * m if Qs.kernel is not None else LaurentPoly())
    return pair_vw(P, _D_action(qstar, w), w) + pair_vw(Q, _D_action(pstar, w), w)


def hab5_normalized(P: LaurentPoly, Q: LaurentPoly, w: int, eps: int, m=Fraction(0)):
    """-Psi/2: equals 1 on a period tensor R_f."""
    return -hab5_raw(P, Q, w, eps, m) / 2


def hab5_check(f: EigenformRecord, g: EigenformRecord | None = None, ms=(0, 1, -3)) -> dict:
    w = f.k - 2
    e = f.eps(5)
    report = {}
    vals = [hab5_normalized(f.P, f.Q, w, e, Fraction(m)) for m in ms]
    report["self"] = vals[0]
    report["m_independent"] = all(v == vals[0] for v in vals)
    if g is not None:
        report["cross_fg"] = hab5_normalized(f.P, g.Q, w, e)
        report["cross_gf"] = hab5_normalized(g.P, f.Q, w, e)
    return report


# -- eigencomponent partition ----------------------------------------------------

def partition_check(N: int, kmax: int, qprec: int) -> dict:
    """Components sum to the full slice; each cuspidal component uses only its own sign.

    For every character eps and weight k the eps-component's cusp part is
    assembled into blocks: the block of the opposite sign must vanish and the
    own-sign block must be rebuilt exactly from its extracted eigenforms.  A
    block spanned by three or more series at prime level is first stripped of
    its level-one oldforms.
    """
    full = bn_expand(N, kmax, qprec)
    comps = {eps: eigencomponent(N, eps, kmax, qprec) for eps in all_characters(N)}
    report = {"N": N, "sum_ok": {}, "blocks": {}, "failures": []}
    for k, sl in full.items():
        total = None
        for eps, c in comps.items():
            total = c[k].body if total is None else total + c[k].body
        ok = total.equals(sl.body)
        report["sum_ok"][k] = ok
        if not ok:
            report["failures"].append(f"k={k}: components do not sum to the slice")
        if k < 4:
            continue
        for eps, c in comps.items():
            s = eps(N)
            key = f"k={k} eps={eps.label()}"
            cusp = eigencomponent_cusp(N, eps, k, qprec, c[k].body)
            blocks = assemble_matrices(cusp, N, k, qprec)
            pure = blocks[-s].is_zero()
            try:
                try:
                    recs = factor_rank_one(blocks[s], eps)
                    status = "ok"
                except RankTooHigh as exc:
                    if len(prime_factors(N)) != 1:
                        raise
                    recs = factor_with_oldforms(blocks[s], eps, qprec)
                    status = f"rank {exc.r}: level-one oldforms removed, remainder factored"
                rebuilt = reconstruct_block(blocks[s], recs)
            except (Degenerate, RankTooHigh, NotRankOne) as exc:
                recs, rebuilt, status = [], False, f"{type(exc).__name__}: {exc}"
            report["blocks"][key] = {"pure": pure, "rebuilt": rebuilt, "forms": len(recs), "status": status}
            if not (pure and rebuilt):
                report["failures"].append(key)
    return report
