from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgres.rings import MPoly, QSeries, render_scalar, to_scalar
from lgres.rings._convolve import convolve

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def series(draw, min_prec=3, max_prec=25, unit=False):
    """A series known to a random precision plus a longer extension of the same data."""
    prec = draw(st.integers(min_prec, max_prec))
    v = 0 if unit else draw(st.integers(-2, 2))
    full = {e: draw(coeffs) for e in range(v, prec + 10)}
    if unit or draw(st.booleans()):
        full[v] = draw(coeffs.filter(bool))
    return QSeries(full, prec), QSeries(full, prec + 10)


def test_scalar_helpers():
    assert to_scalar("3/6") == Fraction(1, 2)
    assert to_scalar(Fraction(4, 2)) == 2 and isinstance(to_scalar(Fraction(4, 2)), int)
    assert render_scalar(Fraction(-3, 4)) == "-3/4"
    with pytest.raises(TypeError):
        to_scalar(0.5)


def test_geometric_inverse():
    one_minus_q = QSeries({0: 1, 1: -1}, 20)
    inv = one_minus_q.inverse()
    assert inv.prec == 20
    assert all(inv[m] == 1 for m in range(20))


def test_precision_rules():
    a = QSeries({1: 1, 2: 3}, 10)      # valuation 1
    b = QSeries({-1: 2}, 6)            # valuation -1
    assert (a + b).prec == 6
    assert (a * b).prec == min(10 - 1, 6 + 1)
    q = QSeries.gen(8)
    assert (q * q).prec == 9


def test_division_precision():
    num = QSeries({0: 1}, 2)
    den = QSeries({5: 1}, 6)
    quo = num / den
    assert quo == QSeries({-5: 1}, -4)
    with pytest.raises(ZeroDivisionError):
        num / QSeries.zero(10)


def test_euler_derivative_and_substitution():
    s = QSeries({1: 1, 3: -2}, 10)
    assert s.euler_derivative() == QSeries({1: 1, 3: -6}, 10)
    assert s.subs_power(3) == QSeries({3: 1, 9: -2}, 30)


def test_render():
    assert QSeries({0: 1, 2: Fraction(-1, 2)}, 5).render() == "1 - 1/2*q^2 + O(q^5)"
    assert QSeries.zero(3).render() == "O(q^3)"


@given(st.dictionaries(st.integers(-3, 40), st.integers(-10**6, 10**6)),
       st.dictionaries(st.integers(-3, 40), st.integers(-10**6, 10**6)), st.integers(0, 60))
def test_convolution_matches_schoolbook(a, b, n):
    a = {e: c for e, c in a.items() if c}
    b = {e: c for e, c in b.items() if c}
    ref: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            if i + j < n:
                ref[i + j] = ref.get(i + j, 0) + x * y
    assert convolve(a, b, n) == {e: c for e, c in ref.items() if c}


@settings(max_examples=60)
@given(series(), series())
def test_precision_soundness_ring_ops(fa, fb):
    (a, a_long), (b, b_long) = fa, fb
    for op in (lambda x, y: x + y, lambda x, y: x - y, lambda x, y: x * y):
        short, long = op(a, b), op(a_long, b_long)
        assert short.prec <= long.prec
        assert short.agrees(long)


@settings(max_examples=60)
@given(series(), series(unit=True))
def test_precision_soundness_division(fa, fb):
    (a, a_long), (b, b_long) = fa, fb
    short = a / b
    long = a_long / b_long
    assert short.agrees(long)
    assert (short * b).agrees(a, short.prec + b.valuation)


@settings(max_examples=40)
@given(series(unit=True))
def test_inverse_times_self_is_one(fa):
    a, _ = fa
    assert (a * a.inverse()).agrees(QSeries.constant(1, a.prec))


# -- polynomials ------------------------------------------------------------

VARS = ("x", "y", "z")


@st.composite
def polys(draw, variables=VARS, max_deg=3):
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_deg) for _ in variables]), coeffs, max_size=6))
    return MPoly(variables, terms)


def test_monomial_and_render():
    p = MPoly(VARS, {(2, 1, 0): 3, (0, 0, 3): Fraction(-1, 2)})
    assert p.render() == "3*x^2*y - 1/2*z^3"
    assert p.total_degree() == 3
    assert p.coeff((2, 1, 0)) == 3


def test_laurent_flags():
    p = MPoly(("y",), {(-1,): 1, (2,): 1}, (True,))
    assert (p * MPoly(("y",), {(1,): 1}, (True,))).terms == {(0,): 1, (3,): 1}
    with pytest.raises(ValueError):
        MPoly(("x",), {(-1,): 1})


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(polys(), polys(), st.integers(0, 2))
def test_partial_leibniz(a, b, i):
    assert (a * b).partial(i) == a.partial(i) * b + a * b.partial(i)


@given(polys(), st.lists(coeffs, min_size=3, max_size=3))
def test_evaluate_is_homomorphism(a, point):
    b = a * a + a
    assert b.evaluate(point) == a.evaluate(point) ** 2 + a.evaluate(point)


def test_series_coefficients():
    s = QSeries({0: 1, 1: 1}, 10)
    p = MPoly(("x",), {(1,): s})
    sq = p * p
    assert sq.coeff((2,)) == s * s
    assert sq.has_series_coeffs()
