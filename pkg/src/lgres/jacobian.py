"""Jacobian rings through a lifting matrix.

Given ``W`` and univariate targets ``p_i(x_i)`` lying in the Jacobian ideal,
a lifting matrix ``C = Ct / D`` with ``Ct . grad W = D . (p_1, ..., p_n)``
turns residues into coefficient extraction and normal forms into finite
linear algebra on monomials with ``e_i < deg p_i``. The default target is
``p_i = x_i^l``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm

from . import linalg
from .mf import monomials_upto
from .rings.mpoly import MPoly, grlex_key
from .rings.qseries import QSeries
from .rings.rational import is_scalar, norm


class LiftError(ArithmeticError):
    def __init__(self, message: str, rank: int | None = None, augmented_rank: int | None = None,
                 discrepancy=None):
        super().__init__(message)
        self.rank = rank
        self.augmented_rank = augmented_rank
        self.discrepancy = discrepancy

    @property
    def rank_deficit(self) -> int | None:
        if self.rank is None:
            return None
        return self.augmented_rank - self.rank


def _div(a, b):
    if isinstance(a, QSeries) or isinstance(b, QSeries):
        if not isinstance(b, QSeries):
            return a * norm(Fraction(1) / Fraction(b))
        return a / b
    return norm(Fraction(a) / Fraction(b))


def _univariate(p: MPoly, i: int) -> list:
    """Dense coefficient list of a polynomial in ``x_i`` alone."""
    if any(any(k for j, k in enumerate(e) if j != i) for e in p.terms):
        raise ValueError(f"target {p} is not univariate in {p.variables[i]}")
    deg = p.degree_in(i)
    coeffs = [0] * (deg + 1)
    for e, c in p.terms.items():
        coeffs[e[i]] = c
    return coeffs


class _Reducer:
    """Reduction modulo univariate targets ``p_i(x_i)``."""

    def __init__(self, targets: list[MPoly]):
        self.n = len(targets)
        self.dense = [_univariate(p, i) for i, p in enumerate(targets)]
        self.degrees = [len(c) - 1 for c in self.dense]
        self.pure = [all(not c for c in d[:-1]) for d in self.dense]
        self._powers: list[dict] = [{} for _ in range(self.n)]

    def power(self, i: int, e: int) -> dict:
        """``x_i^e mod p_i`` as ``{exponent: coeff}``."""
        d = self.degrees[i]
        if e < d:
            return {e: 1}
        if self.pure[i]:
            return {}
        cache = self._powers[i]
        if e not in cache:
            prev = self.power(i, e - 1)
            lead = self.dense[i][d]
            out: dict = {}
            for k, c in prev.items():
                if k + 1 < d:
                    out[k + 1] = out.get(k + 1, 0) + c
                else:
                    for j in range(d):
                        cj = self.dense[i][j]
                        if cj:
                            out[j] = out.get(j, 0) - c * _div(cj, lead)
            cache[e] = {k: v for k, v in out.items() if v}
        return cache[e]

    def reduce(self, f: MPoly) -> dict:
        out: dict = {}
        for e, c in f.terms.items():
            if all(k < d for k, d in zip(e, self.degrees)):
                out[e] = out[e] + c if e in out else c
                continue
            if any(k >= d and p for k, d, p in zip(e, self.degrees, self.pure)):
                continue
            parts = [[((k,), 1)] if k < self.degrees[i] else [((j,), v) for j, v in self.power(i, k).items()]
                     for i, k in enumerate(e)]
            combos = [((), c)]
            for part in parts:
                combos = [(ex + pe, cc * pc) for ex, cc in combos for pe, pc in part]
            for ex, cc in combos:
                out[ex] = out[ex] + cc if ex in out else cc
        return {e: c for e, c in out.items() if c}


@dataclass
class JacobianData:
    potential: MPoly
    gradient: list
    lift_C: list
    denominator: object
    power_exponent: int | None
    targets: list
    det_numerator: MPoly
    _reducer: _Reducer = field(repr=False, default=None)
    _basis: linalg.RREF | None = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.potential.nvars

    @property
    def variables(self) -> tuple:
        return self.potential.variables

    @property
    def reduction_basis(self) -> linalg.RREF:
        if self._basis is None:
            self._basis = self._build_basis()
        return self._basis

    def quotient_monomials(self) -> list[tuple]:
        degs = self._reducer.degrees
        out = [()]
        for d in degs:
            out = [e + (k,) for e in out for k in range(d)]
        return sorted(out, key=grlex_key, reverse=True)

    def _build_basis(self) -> linalg.RREF:
        ech = linalg.RREF(key=grlex_key)
        W = self.potential
        for m in self.quotient_monomials():
            mono = MPoly.monomial(W.variables, m, 1, W.laurent)
            for g in self.gradient:
                ech.add(self._reducer.reduce(mono * g))
        return ech


def _check_polynomial(W: MPoly) -> None:
    if any(W.laurent):
        raise ValueError("coefficient extraction needs a polynomial (non-Laurent) potential; use morse_trace")


def _default_targets(W: MPoly, l: int) -> list[MPoly]:
    return [MPoly.monomial(W.variables, tuple(l if j == i else 0 for j in range(W.nvars)), 1, W.laurent)
            for i in range(W.nvars)]


def _finish(W, grad, C, D, l, targets) -> JacobianData:
    det = linalg.det(C)
    return JacobianData(W, grad, C, D, l, targets, det, _Reducer(targets))


def verify_lift(W: MPoly, C: list, D, targets: list[MPoly]) -> list:
    """Residual ``(Ct . grad W)_i - D p_i`` per row (all zero for a valid lift)."""
    grad = [W.partial(j) for j in range(W.nvars)]
    out = []
    for i, row in enumerate(C):
        acc = W.zero()
        for c, g in zip(row, grad):
            acc = acc + c * g
        out.append(acc - targets[i] * D)
    return out


def jacobian_from_lift(W: MPoly, C: list, D, l: int | None = None, targets: list | None = None) -> JacobianData:
    """Accept an explicit lifting matrix after verifying it exactly."""
    _check_polynomial(W)
    if targets is None:
        targets = _default_targets(W, l)
    residual = verify_lift(W, C, D, targets)
    bad = [(i, r) for i, r in enumerate(residual) if r]
    if bad:
        raise LiftError(f"lifting identity fails in row(s) {[i for i, _ in bad]}", discrepancy=bad)
    grad = [W.partial(j) for j in range(W.nvars)]
    return _finish(W, grad, C, D, l, targets)


def solve_lift(W: MPoly, l: int | None = None, degree_bound: int = 2,
               targets: list | None = None) -> JacobianData:
    """Solve ``Ct . grad W = D p`` for polynomial ``Ct`` with entries of degree <= degree_bound."""
    _check_polynomial(W)
    if targets is None:
        if l is None:
            raise ValueError("give either l or explicit targets")
        targets = _default_targets(W, l)
    n = W.nvars
    grad = [W.partial(j) for j in range(n)]
    monos = monomials_upto(n, degree_bound)
    unknowns = [(j, m) for j in range(n) for m in monos]
    # equation rows indexed by output monomial, shared by every row of C
    eqs: dict = {}
    for k, (j, m) in enumerate(unknowns):
        prod = MPoly.monomial(W.variables, m, 1, W.laurent) * grad[j]
        for e, c in prod.terms.items():
            eqs.setdefault(e, {})[k] = c
    C = []
    for i in range(n):
        keys = set(eqs) | set(targets[i].terms)
        rows = [eqs.get(e, {}) for e in keys]
        rhs = [targets[i].coeff(e) for e in keys]
        sol = linalg.solve(rows, rhs)
        if sol is None:
            rank = linalg.RREF()
            for r in rows:
                rank.add(r)
            aug = linalg.RREF()
            for r, b in zip(rows, rhs):
                aug.add({**r, -1: b} if b else r)
            raise LiftError(
                f"no lift of {targets[i]} with entries of degree <= {degree_bound}",
                rank.rank, aug.rank,
            )
        row = []
        for j in range(n):
            terms = {m: sol[k] for k, (jj, m) in enumerate(unknowns) if jj == j and k in sol}
            row.append(MPoly(W.variables, terms, W.laurent))
        C.append(row)
    D = 1
    coeffs = [c for row in C for p in row for c in p.terms.values()]
    if coeffs and all(is_scalar(c) for c in coeffs):
        D = reduce(lcm, (Fraction(c).denominator for c in coeffs), 1)
        if D != 1:
            C = [[p.scalar_mul(D) for p in row] for row in C]
    return _finish(W, grad, C, D, l, targets)


def normal_form(f: MPoly, jd: JacobianData) -> MPoly:
    """Canonical representative of ``f`` in Jac(W); zero iff ``f`` lies in the ideal."""
    vec = jd.reduction_basis.reduce(jd._reducer.reduce(f))
    return MPoly(f.variables, vec, f.laurent)


def in_ideal(f: MPoly, jd: JacobianData) -> bool:
    return normal_form(f, jd).is_zero()


def _coeff_of_product(polys: list[MPoly], target: tuple):
    """Coefficient of one monomial in a product without forming the product."""
    *head, last = polys
    partial = {(0,) * len(target): 1}
    for p in head:
        nxt: dict = {}
        for e, c in partial.items():
            for e2, c2 in p.terms.items():
                ex = tuple(a + b for a, b in zip(e, e2))
                if all(a <= t for a, t in zip(ex, target)):
                    v = c * c2
                    nxt[ex] = nxt[ex] + v if ex in nxt else v
        partial = {e: c for e, c in nxt.items() if c}
    total = 0
    for e, c in partial.items():
        need = tuple(t - a for a, t in zip(e, target))
        d = last.coeff(need)
        if d:
            total = total + c * d
    return total


def residue_pair(f: MPoly, g: MPoly, jd: JacobianData):
    """Residue pairing by coefficient extraction against the lifting matrix."""
    red = jd._reducer
    top = tuple(d - 1 for d in red.degrees)
    scale = jd.denominator ** jd.n if jd.n else 1
    for i, d in enumerate(red.dense):
        scale = scale * d[-1]
    if all(red.pure):
        value = _coeff_of_product([f, g, jd.det_numerator], top)
    else:
        reduced = red.reduce(f * g * jd.det_numerator)
        value = reduced.get(top, 0)
    if isinstance(value, int) and value == 0:
        return 0
    return _div(value, scale)


def morse_trace(f: MPoly, critical_points) -> object:
    """``sum f(z) / Hess W(z)`` over caller-supplied ``(point, hessian_det)`` pairs."""
    total = 0
    for point, h in critical_points:
        if not h:
            raise ValueError(f"zero Hessian determinant at {point}: not a Morse critical point")
        total = total + _div(f.evaluate(point), h)
    return norm(total) if is_scalar(total) else total


def hessian(W: MPoly) -> list[list[MPoly]]:
    n = W.nvars
    return [[W.partial(i).partial(j) for j in range(n)] for i in range(n)]


def hessian_det(W: MPoly, point) -> object:
    H = [[h.evaluate(point) for h in row] for row in hessian(W)]
    if all(is_scalar(x) for row in H for x in row):
        return linalg.frac_det(H)
    return linalg.det(H)
