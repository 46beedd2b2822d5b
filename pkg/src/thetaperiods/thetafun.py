"""The reduced Jacobi theta series and the Kronecker function F_tau(u, v).

Two independent constructions of F are provided.  The primary one reads the
Laurent coefficients off derivatives of Eisenstein series; the second divides
theta series directly and serves as an oracle for the first.

Both are exposed through the same shape: a table ``coeff(a, b)`` of q-series
for the coefficient of u^a v^b, with a, b >= -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .eisenstein import g_table_entry
from .qseries import QSeries, qs_dilate


class KernelStructureError(AssertionError):
    """A coefficient outside the (u^{k-1}+v^{k-1})(uv)^m pattern is nonzero."""


@dataclass
class ThetaSeries:
    """theta(u)/q^{1/8} as rows c[i] (QSeries in q) for the coefficient of u^i."""

    uprec: int
    qprec: int
    rows: list[QSeries]

    def coeff(self, i: int, n: int) -> Fraction:
        return self.rows[i][n]

    def check_odd(self) -> None:
        for i in range(0, self.uprec, 2):
            if self.rows[i]:
                raise KernelStructureError(f"theta has a nonzero u^{i} row")


def _egf_shift(row: list[int], sign: int) -> list[int]:
    """Multiply an EGF-encoded u-series (coefficient a_i / i!) by exp(sign*u)."""
    out = []
    for i in range(len(row)):
        acc = 0
        for j in range(i + 1):
            if row[j]:
                acc += comb(i, j) * row[j] * sign ** (i - j)
        out.append(acc)
    return out


def _triple_product(uprec: int, qprec: int) -> list[list[int]]:
    """prod_{n>=1} (1-q^n)(1-q^n e^u)(1-q^n e^{-u}) as A[n][i] with u^i q^n coefficient A/i!."""
    A = [[0] * uprec for _ in range(qprec)]
    A[0][0] = 1
    for m in range(1, qprec):
        for sign in (0, 1, -1):
            new = [list(r) for r in A]
            for n in range(m, qprec):
                src = A[n - m]
                if not any(src):
                    continue
                moved = src if sign == 0 else _egf_shift(src, sign)
                tgt = new[n]
                for i in range(uprec):
                    tgt[i] -= moved[i]
            A = new
    return A


def theta_reduced(uprec: int, qprec: int) -> ThetaSeries:
    """Expand e^{u/2} prod (1-q^n)(1-q^n e^u)(1-q^{n-1} e^{-u}) exactly.

    The n = 1 factor 1 - e^{-u} combines with e^{u/2} into 2 sinh(u/2).
    """
    if uprec < 1 or qprec < 1:
        raise ValueError("precisions must be >= 1")
    A = _triple_product(uprec, qprec)
    # 2 sinh(u/2) = sum_{j odd} u^j / (2^{j-1} j!)
    sinh2 = [Fraction(0)] * uprec
    for j in range(1, uprec, 2):
        sinh2[j] = Fraction(1, 2 ** (j - 1) * factorial(j))
    rows = []
    for i in range(uprec):
        coeffs = []
        for n in range(qprec):
            acc = Fraction(0)
            for j in range(1, i + 1, 2):
                a = A[n][i - j]
                if a:
                    acc += sinh2[j] * Fraction(a, factorial(i - j))
            coeffs.append(acc)
        rows.append(QSeries(coeffs, qprec))
    return ThetaSeries(uprec, qprec, rows)


def theta_series_oracle(uprec: int, qprec: int) -> ThetaSeries:
    """sum_{n>=0} (-1)^n q^{n(n+1)/2} 2 sinh((2n+1)u/2), the Jacobi triple product sum side."""
    rows = [[Fraction(0)] * qprec for _ in range(uprec)]
    n = 0
    while n * (n + 1) // 2 < qprec:
        e = n * (n + 1) // 2
        s = Fraction(2 * n + 1, 2)
        for j in range(1, uprec, 2):
            rows[j][e] += (-1) ** n * 2 * s**j / factorial(j)
        n += 1
    return ThetaSeries(uprec, qprec, [QSeries(r, qprec) for r in rows])


@dataclass
class FKernel:
    """Laurent coefficients of F_tau(u,v) = 1/u + 1/v + sum g[k][m](u^{k-1}+v^{k-1})(uv)^m."""

    kmax: int
    mmax: int
    qprec: int
    g: dict[int, dict[int, QSeries]] = field(default_factory=dict)

    def coeff(self, a: int, b: int) -> QSeries | None:
        """Coefficient of u^a v^b (None for a structural zero)."""
        if (a, b) in ((-1, 0), (0, -1)):
            return QSeries.one(self.qprec)
        if a < -1 or b < -1 or a == b or (a - b) % 2 == 0:
            return None
        if a < b:
            a, b = b, a
        if b == -1:
            return None
        k, m = a - b + 1, b
        row = self.g.get(k)
        if row is None or m not in row:
            raise KeyError(f"g[{k}][{m}] outside the computed table")
        return row[m]

    def dilate(self, d: int) -> "FKernel":
        return FKernel(self.kmax, self.mmax, self.qprec,
                       {k: {m: qs_dilate(s, d) for m, s in row.items()} for k, row in self.g.items()})

    def max_total_degree(self) -> int:
        return self.kmax - 1


def fkernel_via_g(kmax: int, mmax: int, qprec: int) -> FKernel:
    if kmax % 2:
        raise ValueError("kmax must be even")
    g = {}
    for k in range(2, kmax + 1, 2):
        g[k] = {m: g_table_entry(k, m, qprec) for m in range(0, mmax + 1) if k + 2 * m <= kmax + mmax}
    return FKernel(kmax, mmax, qprec, g)


def kernel_for_weight(K: int, qprec: int) -> FKernel:
    """The table needed for every slice of weight <= K."""
    return fkernel_via_g(K, (K - 2) // 2 if K > 2 else 0, qprec)


@dataclass
class ThetaKernel:
    """F_tau(u,v) as computed from theta quotients: table of u^a v^b coefficients, a + b <= dmax."""

    dmax: int
    qprec: int
    table: dict[tuple[int, int], QSeries]

    def coeff(self, a: int, b: int) -> QSeries | None:
        s = self.table.get((a, b))
        if s is None or not s:
            return None
        return s

    def dilate(self, d: int) -> "ThetaKernel":
        return ThetaKernel(self.dmax, self.qprec, {key: qs_dilate(s, d) for key, s in self.table.items()})

    def max_total_degree(self) -> int:
        return self.dmax


def fkernel_via_theta(dmax: int, qprec: int) -> ThetaKernel:
    """theta'(0) theta(u+v) / (theta(u) theta(v)) with every u^a v^b coefficient for a + b <= dmax.

    Writing theta(u) = u h(u) gives F = (1/u + 1/v) H(u,v) with
    H = h(0) h(u+v) / (h(u) h(v)), a genuine power series.
    """
    uprec = dmax + 3
    th = theta_reduced(uprec, qprec)
    h = [th.rows[i + 1] for i in range(uprec - 1)]  # h(u) = theta(u)/u
    c = h[0]
    # 1/h(u) as a u-series with q-series coefficients
    c_inv = c.inverse()
    inv = [c_inv]
    for n in range(1, dmax + 2):
        acc = QSeries.zero(qprec)
        for j in range(1, n + 1):
            if h[j]:
                acc = acc + h[j] * inv[n - j]
        inv.append(-(acc * c_inv))
    top = dmax + 1
    # G[a][j] = sum_i h_{i+j} C(i+j, i) inv_{a-i}
    G = {}
    for a in range(top + 1):
        for j in range(top + 1 - a):
            acc = QSeries.zero(qprec)
            for i in range(a + 1):
                if h[i + j] and inv[a - i]:
                    acc = acc + (h[i + j] * inv[a - i]).scale(Fraction(comb(i + j, i)))
            G[a, j] = acc
    H = {}
    for a in range(top + 1):
        for b in range(top + 1 - a):
            acc = QSeries.zero(qprec)
            for j in range(b + 1):
                if G[a, j] and inv[b - j]:
                    acc = acc + G[a, j] * inv[b - j]
            H[a, b] = acc * c
    table = {}
    for a in range(-1, dmax + 1):
        for b in range(-1, dmax + 1 - a):
            if a + b > dmax or (a == -1 and b == -1):
                continue
            s = QSeries.zero(qprec)
            if a + 1 <= top and (a + 1, b) in H:
                s = s + H[a + 1, b]
            if (a, b + 1) in H:
                s = s + H[a, b + 1]
            table[a, b] = s
    return ThetaKernel(dmax, qprec, table)


def kernel_structure_check(kern: ThetaKernel) -> None:
    """Only 1/u, 1/v and the (u^{k-1}+v^{k-1})(uv)^m monomials may appear."""
    for (a, b), s in kern.table.items():
        if not s:
            continue
        if (a, b) in ((-1, 0), (0, -1)):
            if not s.agrees(QSeries.one(s.prec)):
                raise KernelStructureError(f"head coefficient u^{a}v^{b} is not 1")
            continue
        if a == -1 or b == -1 or a == b or (a - b) % 2 == 0:
            raise KernelStructureError(f"unexpected monomial u^{a} v^{b}")
        if not kern.table.get((b, a), QSeries.zero(s.prec)).agrees(s):
            raise KernelStructureError(f"asymmetric coefficient at u^{a} v^{b}")


def kernels_agree(kg: FKernel, kt: ThetaKernel) -> bool:
    """Coefficientwise equality of the two routes for every a + b <= min degree."""
    d = min(kg.max_total_degree(), kt.max_total_degree())
    for a in range(-1, d + 2):
        for b in range(-1, d + 2):
            if a + b > d or (a, b) == (-1, -1):
                continue
            x = kg.coeff(a, b)
            y = kt.coeff(a, b)
            if x is None and y is None:
                continue
            if x is None:
                x = QSeries.zero(y.prec)
            if y is None:
                y = QSeries.zero(x.prec)
            if not x.agrees(y):
                return False
    return True
