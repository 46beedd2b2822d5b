"""Load the expected tables from ``data/tables.yaml`` into exact objects.

Expressions are parsed with sympy, rationalized, and converted to Fractions or
QuadElems; after that nothing downstream touches sympy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import sympy as sp
import yaml

from .exactnum import QuadElem
from .polyslash import BiLaurent, LaurentPoly
from .qseries import QSeries

X, Y, L = sp.symbols("X Y l")


class FixtureError(ValueError):
    pass


def _scalar(expr, D: int | None):
    """A sympy number in Q or Q(sqrt D) as Fraction / QuadElem."""
    expr = sp.expand(sp.radsimp(sp.sympify(expr)))
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    if D is None:
        raise FixtureError(f"irrational value {expr} without a field tag")
    s = sp.Symbol("s")
    poly = sp.Poly(sp.expand(expr.subs(sp.sqrt(D), s)), s)
    if poly.free_symbols - {s}:
        raise FixtureError(f"{expr} is not in Q(sqrt {D})")
    a = b = sp.Integer(0)
    for (e,), c in poly.terms():
        if e % 2:
            b += c * sp.Integer(D) ** (e // 2)
        else:
            a += c * sp.Integer(D) ** (e // 2)
    return QuadElem(Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)), D)


def parse_scalar(text, D: int | None = None):
    return _scalar(sp.sympify(text) if isinstance(text, str) else sp.Integer(text), D)


def parse_bivariate(text: str, D: int | None = None) -> BiLaurent:
    expr = sp.expand(sp.sympify(text, locals={"X": X, "Y": Y}))
    poly = sp.Poly(expr, X, Y)
    return BiLaurent({(i, j): _scalar(c, D) for (i, j), c in poly.terms()})


def parse_poly(text: str, var=X, D: int | None = None) -> LaurentPoly:
    expr = sp.expand(sp.sympify(text, locals={"X": X, "Y": Y}))
    poly = sp.Poly(expr, var)
    return LaurentPoly({e: _scalar(c, D) for (e,), c in poly.terms()})


def parse_qseries(coeffs, D: int | None = None) -> QSeries:
    """a_1, a_2, ... into a QSeries with a_0 = 0 (precision = len + 1)."""
    vals = [Fraction(0)] + [parse_scalar(c, D) for c in coeffs]
    return QSeries(vals, len(vals))


@dataclass
class TableRow:
    N: int
    label: str
    k: int
    eps: dict[int, int]
    R: BiLaurent
    q: QSeries
    D: int | None = None
    note: str | None = None
    old: dict | None = None
    degenerate: dict | None = None
    R_text: str = ""

    @property
    def sign(self) -> int:
        """eps(N), the sign that selects the Atkin-Lehner/parity block."""
        s = 1
        for v in self.eps.values():
            s *= v
        return s


@lru_cache(maxsize=1)
def raw() -> dict:
    text = resources.files("thetaperiods").joinpath("data/tables.yaml").read_text()
    return yaml.safe_load(text)


@lru_cache(maxsize=None)
def table_rows(N: int) -> tuple[TableRow, ...]:
    levels = raw()["levels"]
    if N not in levels:
        raise FixtureError(f"no stored table for level {N}")
    out = []
    for row in levels[N]:
        D = row.get("D")
        out.append(TableRow(
            N=N, label=row["label"], k=row["k"], eps={int(p): int(s) for p, s in row["eps"].items()},
            R=parse_bivariate(row["R"], D), q=parse_qseries(row["q"], D), D=D,
            note=row.get("note"), old=row.get("old"), degenerate=row.get("degenerate"), R_text=row["R"],
        ))
    return tuple(out)


def table_levels() -> list[int]:
    return sorted(raw()["levels"])


def lambda_coeffs(text: str) -> list[Fraction]:
    """Coefficients (c0, c1, c2, ...) of a polynomial in l."""
    poly = sp.Poly(sp.expand(sp.sympify(text, locals={"l": L})), L)
    top = poly.degree()
    return [_scalar(poly.coeff_monomial(L**i), None) for i in range(top + 1)]


def pipeline_5_8() -> dict:
    return raw()["pipeline_5_8"]


def oldform_data() -> dict:
    return raw()["oldforms_2_12"]


def wspace_data() -> dict:
    return raw()["wspace_5_8"]
