"""Sparse multivariate (optionally Laurent) polynomials.

Terms are stored as ``{exponent tuple: coefficient}``. Coefficients are exact
scalars (int / Fraction) or :class:`QSeries`; a polynomial over q-series may
freely mix the two since scalars embed in the series ring. A coefficient that
vanishes to working precision is dropped, so equality of two polynomials over
q-series means agreement to working precision.

Canonical order is graded lexicographic in the declared variable order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .qseries import QSeries
from .rational import is_scalar, norm, render_scalar


def is_coeff(x) -> bool:
    return is_scalar(x) or isinstance(x, QSeries)


def _cnorm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def grlex_key(e: tuple) -> tuple:
    return (sum(e), e)


class MPoly:
    __slots__ = ("variables", "laurent", "_terms")

    def __init__(self, variables: Sequence[str], terms: dict | None = None,
                 laurent: Sequence[bool] | None = None, *, _trusted: bool = False):
        self.variables = tuple(variables)
        n = len(self.variables)
        self.laurent = tuple(laurent) if laurent is not None else (False,) * n
        if len(self.laurent) != n:
            raise ValueError("one Laurent flag per variable is required")
        if _trusted:
            self._terms = terms
            return
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match {n} variables")
            for k, flag in zip(e, self.laurent):
                if k < 0 and not flag:
                    raise ValueError(f"negative exponent in {e} on a non-Laurent variable")
            if not is_coeff(c):
                raise TypeError(f"unsupported coefficient type {type(c).__name__}")
            c = _cnorm(c)
            if c:
                clean[e] = c
        self._terms = clean

    # -- constructors -------------------------------------------------------
    def _new(self, terms: dict) -> MPoly:
        return MPoly(self.variables, terms, self.laurent, _trusted=True)

    @classmethod
    def const(cls, variables, c, laurent=None) -> MPoly:
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c}, laurent)

    @classmethod
    def var(cls, variables, name: str, laurent=None) -> MPoly:
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): 1}, laurent)

    @classmethod
    def monomial(cls, variables, exps, c=1, laurent=None) -> MPoly:
        return cls(variables, {tuple(exps): c}, laurent)

    def zero(self) -> MPoly:
        return self._new({})

    def one(self) -> MPoly:
        return self._new({(0,) * len(self.variables): 1})

    # -- inspection ---------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> list:
        """Terms in canonical (graded lex, descending) order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def coeff(self, exps) -> object:
        exps = tuple(exps)
        if len(exps) != len(self.variables):
            raise ValueError("exponent vector length does not match the variable count")
        return self._terms.get(exps, 0)

    def constant_term(self):
        return self._terms.get((0,) * len(self.variables), 0)

    def has_series_coeffs(self) -> bool:
        return any(isinstance(c, QSeries) for c in self._terms.values())

    # -- arithmetic ---------------------------------------------------------
    def _lift(self, other) -> MPoly:
        if isinstance(other, MPoly):
            if other.variables != self.variables or other.laurent != self.laurent:
                raise ValueError(
                    f"mismatched variable sets {self.variables} vs {other.variables}"
                )
            return other
        if is_coeff(other):
            return MPoly.const(self.variables, other, self.laurent)
        raise TypeError(f"cannot combine MPoly with {type(other).__name__}")

    def __neg__(self) -> MPoly:
        return self._new({e: -c for e, c in self._terms.items()})

    def __add__(self, other) -> MPoly:
        if not (isinstance(other, MPoly) or is_coeff(other)):
            return NotImplemented
        other = self._lift(other)
        t = dict(self._terms)
        for e, c in other._terms.items():
            if e in t:
                s = _cnorm(t[e] + c)
                if s:
                    t[e] = s
                else:
                    del t[e]
            else:
                t[e] = c
        return self._new(t)

    __radd__ = __add__

    def __sub__(self, other) -> MPoly:
        if not (isinstance(other, MPoly) or is_coeff(other)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other) -> MPoly:
        return (-self) + other

    def scalar_mul(self, c) -> MPoly:
        if not is_coeff(c):
            raise TypeError("scalar_mul expects a coefficient")
        if is_scalar(c) and not c:
            return self.zero()
        out = {}
        for e, a in self._terms.items():
            p = _cnorm(a * c)
            if p:
                out[e] = p
        return self._new(out)

    def __mul__(self, other) -> MPoly:
        if is_coeff(other):
            return self.scalar_mul(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        other = self._lift(other)
        if len(self._terms) > len(other._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                p = ca * cb
                if e in out:
                    out[e] = out[e] + p
                else:
                    out[e] = p
        return self._new({e: _cnorm(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MPoly:
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("negative powers are only defined for monomials")
            (e, c), = self._terms.items()
            inv_c = 1 / (Fraction(c) if is_scalar(c) else c)
            return MPoly(self.variables, {tuple(-x for x in e): inv_c}, self.laurent) ** (-k)
        result = self.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def partial(self, i) -> MPoly:
        """Partial derivative in variable ``i`` (index or name)."""
        if isinstance(i, str):
            i = self.variables.index(i)
        if not 0 <= i < len(self.variables):
            raise IndexError(f"no variable with index {i}")
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = _cnorm(c * k)
        return self._new(out)

    def map_coeffs(self, fn) -> MPoly:
        out = {}
        for e, c in self._terms.items():
            c = _cnorm(fn(c))
            if c:
                out[e] = c
        return self._new(out)

    def truncate_series(self, n: int) -> MPoly:
        return self.map_coeffs(lambda c: c.truncate(n) if isinstance(c, QSeries) else c)

    def evaluate(self, point: Sequence) -> object:
        """Substitute a point (exact scalars) for all variables."""
        if len(point) != len(self.variables):
            raise ValueError("point dimension does not match the variable count")
        total = 0
        for e, c in self._terms.items():
            m = 1
            for z, k in zip(point, e):
                if k:
                    m = m * (Fraction(z) ** k)
            total = total + c * _cnorm(m)
        return _cnorm(total)

    def filter_terms(self, keep) -> MPoly:
        return self._new({e: c for e, c in self._terms.items() if keep(e)})

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            if other.variables != self.variables:
                return False
            return (self - other).is_zero()
        if is_coeff(other):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    # -- rendering ----------------------------------------------------------
    def _mono(self, e: tuple) -> str:
        parts = []
        for v, k in zip(self.variables, e):
            if k == 1:
                parts.append(v)
            elif k:
                parts.append(f"{v}^{k}")
        return "*".join(parts)

    def render(self, series_terms: int | None = None) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self.items():
            mono = self._mono(e)
            if isinstance(c, QSeries):
                s = f"({c.render(series_terms)})"
                pieces.append(f"{s}*{mono}" if mono else s)
            elif not mono:
                pieces.append(render_scalar(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{render_scalar(c)}*{mono}")
        out = pieces[0]
        for p in pieces[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"MPoly[{','.join(self.variables)}]({self.render(6)})"


def mpoly_arith(a: MPoly, b, op: str) -> MPoly:
    """Named polynomial operation; ``b`` is the exponent for pow, the variable for partial."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    if op == "partial":
        return a.partial(b)
    if op == "scalar_mul":
        return a.scalar_mul(b)
    raise ValueError(f"unknown polynomial operation {op!r}")


def coeff_extract(f: MPoly, monomial: Iterable[int]):
    return f.coeff(tuple(monomial))


def variables_poly(variables: Sequence[str], laurent=None) -> list[MPoly]:
    """The generators of the ring as polynomials."""
    return [MPoly.var(variables, v, laurent) for v in variables]
