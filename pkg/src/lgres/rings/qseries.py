"""Truncated formal Laurent series in q with exact rational coefficients.

A :class:`QSeries` is a sparse map ``exponent -> coefficient`` together with a
precision ``N``: every coefficient of ``q^m`` with ``m < N`` is known exactly
(absent means zero), nothing is known at or above ``N``. Every operation
returns the tightest precision that is still sound, so a coefficient that is
reported never changes when the inputs are recomputed to higher order.
"""

from __future__ import annotations

from fractions import Fraction

from ._convolve import convolve
from .rational import Scalar, is_scalar, norm, render_scalar, to_scalar


class PrecisionError(ArithmeticError):
    """The requested result has no determined coefficients."""


class QSeries:
    __slots__ = ("_terms", "prec")

    def __init__(self, terms: dict | None = None, prec: int = 0, *, _trusted: bool = False):
        if not isinstance(prec, int):
            raise TypeError("precision must be an integer")
        self.prec = prec
        if _trusted:
            self._terms = terms
            return
        clean = {}
        for e, c in (terms or {}).items():
            if not isinstance(e, int):
                raise TypeError("exponents must be integers")
            c = to_scalar(c)
            if c and e < prec:
                clean[e] = c
        self._terms = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c, prec: int) -> QSeries:
        return cls({0: c}, prec)

    @classmethod
    def gen(cls, prec: int) -> QSeries:
        """The series ``q`` known to order ``prec``."""
        return cls({1: 1}, prec)

    @classmethod
    def zero(cls, prec: int) -> QSeries:
        return cls({}, prec, _trusted=True)

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    @property
    def valuation(self) -> int | None:
        """Smallest exponent with a nonzero coefficient, ``None`` for the zero series."""
        return min(self._terms) if self._terms else None

    @property
    def rel_prec(self) -> int:
        v = self.valuation
        return self.prec - (self.prec if v is None else v)

    def _v(self) -> int:
        # zero series O(q^N) behaves like valuation N in precision bookkeeping
        return min(self._terms) if self._terms else self.prec

    def __getitem__(self, m: int) -> Scalar:
        if m >= self.prec:
            raise PrecisionError(f"coefficient of q^{m} is not determined (precision {self.prec})")
        return self._terms.get(m, 0)

    def coeff(self, m: int) -> Scalar:
        return self[m]

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> QSeries | None:
        if isinstance(other, QSeries):
            return other
        if is_scalar(other):
            return None
        return NotImplemented

    def __neg__(self) -> QSeries:
        return QSeries({e: -c for e, c in self._terms.items()}, self.prec, _trusted=True)

    def __pos__(self) -> QSeries:
        return self

    def __add__(self, other) -> QSeries:
        if is_scalar(other):
            if not other or self.prec <= 0:
                return self
            t = dict(self._terms)
            c = norm(t.get(0, 0) + other)
            if c:
                t[0] = c
            else:
                t.pop(0, None)
            return QSeries(t, self.prec, _trusted=True)
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        t = {e: c for e, c in self._terms.items() if e < prec}
        for e, c in other._terms.items():
            if e < prec:
                s = norm(t.get(e, 0) + c)
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        return QSeries(t, prec, _trusted=True)

    __radd__ = __add__

    def __sub__(self, other) -> QSeries:
        if is_scalar(other) or isinstance(other, QSeries):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> QSeries:
        return (-self) + other

    def __mul__(self, other) -> QSeries:
        if is_scalar(other):
            other = norm(other)
            if other == 1:
                return self
            if not other:
                return QSeries.zero(self.prec)
            return QSeries({e: norm(c * other) for e, c in self._terms.items()}, self.prec, _trusted=True)
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec + other._v(), other.prec + self._v())
        return QSeries(convolve(self._terms, other._terms, prec), prec, _trusted=True)

    __rmul__ = __mul__

    def shift(self, k: int) -> QSeries:
        """Multiply by ``q^k`` (k may be negative)."""
        return QSeries({e + k: c for e, c in self._terms.items()}, self.prec + k, _trusted=True)

    def inverse(self) -> QSeries:
        if not self._terms:
            raise ZeroDivisionError("division by a series with no determined nonzero coefficient")
        v = self.valuation
        rel = self.prec - v
        unit = [(e - v, c) for e, c in sorted(self._terms.items())]
        c0 = Fraction(unit[0][1])
        rest = unit[1:]
        inv = [Fraction(0)] * rel
        inv[0] = 1 / c0
        for m in range(1, rel):
            s = 0
            for k, c in rest:
                if k > m:
                    break
                s += c * inv[m - k]
            inv[m] = -s / c0
        terms = {m - v: norm(c) for m, c in enumerate(inv) if c}
        return QSeries(terms, rel - v, _trusted=True)

    def __truediv__(self, other) -> QSeries:
        if is_scalar(other):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, QSeries):
            return NotImplemented
        if not other._terms:
            raise ZeroDivisionError("division by a series with no determined nonzero coefficient")
        vb = other.valuation
        if self._terms:
            va = self.valuation
            prec = min(self.prec - vb, other.prec - 2 * vb + va)
            if prec <= va - vb:
                raise PrecisionError(
                    f"quotient has no determined coefficients (numerator O(q^{self.prec}), "
                    f"denominator valuation {vb}, precision {other.prec})"
                )
        inv = other.inverse()
        out = self * inv
        return out

    def __rtruediv__(self, other) -> QSeries:
        if is_scalar(other):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int) -> QSeries:
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return QSeries.constant(1, self.rel_prec if self._terms else self.prec)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, n: int) -> QSeries:
        prec = min(self.prec, n)
        return QSeries({e: c for e, c in self._terms.items() if e < prec}, prec, _trusted=True)

    def euler_derivative(self) -> QSeries:
        """Apply ``q d/dq``: ``c q^m -> m c q^m``."""
        return QSeries({e: e * c for e, c in self._terms.items() if e}, self.prec, _trusted=True)

    def subs_power(self, s: int) -> QSeries:
        """Substitute ``q -> q^s`` for a positive integer s."""
        if s < 1:
            raise ValueError("substitution power must be positive")
        return QSeries({e * s: c for e, c in self._terms.items()}, self.prec * s, _trusted=True)

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        """Exact structural equality (same precision, same coefficients)."""
        if isinstance(other, QSeries):
            return self.prec == other.prec and self._terms == other._terms
        if is_scalar(other):
            return not other and not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.prec, frozenset(self._terms.items())))

    def agrees(self, other, upto: int | None = None) -> bool:
        """Coefficientwise equality below the common precision (and below ``upto``)."""
        return self.first_difference(other, upto) is None

    def first_difference(self, other, upto: int | None = None) -> int | None:
        if is_scalar(other):
            other = QSeries.constant(other, self.prec)
        n = min(self.prec, other.prec)
        if upto is not None:
            n = min(n, upto)
        exps = sorted(e for e in set(self._terms) | set(other._terms) if e < n)
        for e in exps:
            if self._terms.get(e, 0) != other._terms.get(e, 0):
                return e
        return None

    # -- rendering ----------------------------------------------------------
    def render(self, max_terms: int | None = None) -> str:
        parts = []
        items = self.items()
        if max_terms is not None and len(items) > max_terms:
            items = items[:max_terms]
        for e, c in items:
            parts.append(_term(c, "q" if e == 1 else f"q^{e}" if e else ""))
        parts.append(f"O(q^{self.prec})")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"QSeries({self.render(8)})"


def _term(c: Scalar, mono: str) -> str:
    if not mono:
        return render_scalar(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{render_scalar(c)}*{mono}"


def series_arith(a: QSeries, b, op: str) -> QSeries:
    """Apply one named operation; ``b`` is the exponent for pow and the order for truncate."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** b
    if op == "truncate":
        return a.truncate(b)
    raise ValueError(f"unknown series operation {op!r}")


def euler_derivative(a: QSeries) -> QSeries:
    return a.euler_derivative()
