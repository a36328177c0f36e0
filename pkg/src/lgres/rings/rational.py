"""Exact rational scalars.

Scalars are plain ``int`` or :class:`fractions.Fraction`; a Fraction whose
denominator is 1 is collapsed to ``int`` so that integer-only workloads
(theta series, most test polynomials) never pay for Fraction arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _Rational
from typing import Union

Scalar = Union[int, Fraction]


def to_scalar(x) -> Scalar:
    """Coerce an exact number (int, Fraction, numerator/denominator string) to a Scalar."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, _Rational):
        return to_scalar(Fraction(x.numerator, x.denominator))
    if isinstance(x, str):
        return to_scalar(Fraction(x.strip()))
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def norm(c: Scalar) -> Scalar:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def render_scalar(c: Scalar) -> str:
    c = norm(c)
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"
