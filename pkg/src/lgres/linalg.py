"""Exact linear algebra over rationals or truncated q-series.

Rows are sparse dicts ``column -> coefficient``. A coefficient is zero when
``not c`` (a q-series with no determined nonzero coefficient counts as zero).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .rings.qseries import QSeries
from .rings.rational import norm


def inv(c):
    if isinstance(c, QSeries):
        return c.inverse()
    return norm(Fraction(1) / c)


def _axpy(row: dict, a, other: dict) -> None:
    """row -= a * other, in place."""
    for k, v in other.items():
        if k in row:
            s = row[k] - a * v
            if isinstance(s, Fraction) and s.denominator == 1:
                s = s.numerator
            if s:
                row[k] = s
            else:
                del row[k]
        else:
            s = -(a * v)
            if s:
                row[k] = s


def _scale(row: dict, a) -> dict:
    out = {}
    for k, v in row.items():
        s = norm(v * a) if not isinstance(v, QSeries) and not isinstance(a, QSeries) else v * a
        if s:
            out[k] = s
    return out


class RREF:
    """Incrementally built reduced row echelon form.

    The pivot of each row is its largest column under ``key``; rows are kept
    fully reduced against each other, so the result depends only on the row
    space and the column order.
    """

    def __init__(self, key=None):
        self.key = key
        self.pivots: dict = {}

    def reduce(self, row: dict) -> dict:
        row = {k: v for k, v in row.items() if v}
        for col in [c for c in row if c in self.pivots]:
            a = row.get(col)
            if a:
                _axpy(row, a, self.pivots[col])
        return row

    def add(self, row: dict) -> object | None:
        row = self.reduce(row)
        if not row:
            return None
        col = max(row, key=self.key) if self.key else max(row)
        row = _scale(row, inv(row[col]))
        row[col] = 1
        for prow in self.pivots.values():
            a = prow.get(col)
            if a:
                _axpy(prow, a, row)
        self.pivots[col] = row
        return col

    @property
    def rank(self) -> int:
        return len(self.pivots)


_RHS = ("__rhs__",)


def solve(rows: list[dict], rhs: list, key=None) -> dict | None:
    """One solution of ``rows . x = rhs`` (free unknowns set to 0), or None."""
    def k(c):
        if c == _RHS:
            return (0,)
        return (1, key(c) if key else c)

    ech = RREF(k)
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b:
            r[_RHS] = b
        ech.add(r)
    if _RHS in ech.pivots:
        return None
    return {col: r[_RHS] for col, r in ech.pivots.items() if _RHS in r}


def nullspace(rows: list[dict], columns: list, key=None) -> list[dict]:
    ech = RREF(key)
    for row in rows:
        ech.add(row)
    out = []
    for f in columns:
        if f in ech.pivots:
            continue
        v = {f: 1}
        for p, r in ech.pivots.items():
            a = r.get(f)
            if a:
                v[p] = -a
        out.append(v)
    return out


def perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def det(m: list[list]):
    """Leibniz determinant; entries only need + and * (polynomials are fine)."""
    n = len(m)
    total = None
    for p in permutations(range(n)):
        term = m[0][p[0]]
        for i in range(1, n):
            term = term * m[i][p[i]]
        if perm_sign(p) < 0:
            term = -term
        total = term if total is None else total + term
    return total


def frac_inverse(m: list[list]) -> list[list]:
    """Gauss-Jordan inverse of a nonsingular rational matrix."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [[norm(x) for x in row[n:]] for row in a]


def frac_det(m: list[list]):
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return norm(d)


def matmul(a: list[list], b: list[list]) -> list[list]:
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), 0) for j in range(len(b[0]))]
            for i in range(len(a))]


def transpose(a: list[list]) -> list[list]:
    return [list(r) for r in zip(*a)]
