from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgres.mirror333 import Mirror333Config, cubic_potential
from lgres.parser import Env, ParseError, parse_ast, parse_expression, parse_matrix
from lgres.rings import MPoly
from lgres.theta import canonical_series

XYZ = Env(variables=("x", "y", "z"))


def test_basic_expression():
    p = parse_expression("3*x^2*y - 1/2*z^3", XYZ)
    assert p.terms == {(2, 1, 0): 3, (0, 0, 3): Fraction(-1, 2)}


def test_precedence_and_unary_minus():
    assert parse_expression("-x^2", XYZ) == -(parse_expression("x", XYZ) ** 2)
    assert parse_expression("2*x + 3*y*z", XYZ) == parse_expression("(3*y)*z + x*2", XYZ)
    assert parse_expression("(x + y)^2", XYZ) == parse_expression("x^2 + 2*x*y + y^2", XYZ)


def test_whitespace_insensitive():
    assert parse_expression(" x ^ 2 *  y-1/2 ", XYZ) == parse_expression("x^2*y-1/2", XYZ)


@pytest.mark.parametrize("src, pos", [
    ("x^", 2),
    ("2x", 1),
    ("x + ", 4),
    ("(x + y", 6),
    ("x $ y", 2),
    ("1/0", 2),
    ("x^y", 2),
])
def test_syntax_errors_have_byte_positions(src, pos):
    with pytest.raises(ParseError) as err:
        parse_expression(src, XYZ)
    assert err.value.position == pos


def test_unknown_identifier():
    with pytest.raises(ParseError) as err:
        parse_expression("x + w", XYZ)
    assert "unknown identifier" in err.value.message and err.value.position == 4


def test_negative_exponents():
    with pytest.raises(ParseError):
        parse_expression("x^-1", XYZ)
    env = Env(variables=("x", "y"), laurent=("y",))
    assert parse_expression("y^-2*x", env).terms == {(1, -2): 1}


def test_named_series_builds_cubic_potential():
    env = Env(variables=("x", "y", "z"), series_names=("phi", "psi"), precision=200)
    W = parse_expression("phi*(x^3 - y^3 + z^3) + psi*x*y*z", env)
    phi = canonical_series("phi", 200)
    psi = canonical_series("psi", 200)
    assert W == cubic_potential(phi, psi)
    assert Mirror333Config(200).precision == 200


def test_parse_matrix():
    m = parse_matrix([["x", "0"], ["1", "y"]], XYZ)
    assert m[0][0] == parse_expression("x", XYZ) and m[0][1].is_zero()
    assert parse_matrix("x", XYZ)[0][0] == parse_expression("x", XYZ)


def test_ast_kinds():
    node = parse_ast("-x^2 + 1/3")
    assert node.kind == "add"
    assert node.children[0].kind == "neg"
    assert node.children[1].kind == "rational"


@st.composite
def polys(draw):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)),
        st.fractions(min_value=-20, max_value=20, max_denominator=9), max_size=8))
    return MPoly(("x", "y", "z"), terms)


@settings(max_examples=200)
@given(polys())
def test_round_trip(p):
    assert parse_expression(p.render(), XYZ) == p


@st.composite
def expressions(draw, depth=3):
    """Random expression text together with its value computed independently."""
    x, y, z = (MPoly.var(XYZ.variables, v) for v in XYZ.variables)
    leaves = [("x", x), ("y", y), ("z", z)]
    if depth == 0 or draw(st.booleans()):
        if draw(st.booleans()):
            name, val = draw(st.sampled_from(leaves))
            return name, val
        a, b = draw(st.integers(0, 30)), draw(st.integers(1, 9))
        return f"{a}/{b}", MPoly.const(XYZ.variables, Fraction(a, b))
    op = draw(st.sampled_from(["+", "-", "*", "^", "neg"]))
    sa, va = draw(expressions(depth=depth - 1))
    if op == "neg":
        return f"-({sa})", -va
    if op == "^":
        k = draw(st.integers(0, 3))
        return f"({sa})^{k}", va ** k
    sb, vb = draw(expressions(depth=depth - 1))
    val = va + vb if op == "+" else va - vb if op == "-" else va * vb
    return f"({sa}) {op} ({sb})", val


@settings(max_examples=100)
@given(expressions())
def test_random_expressions_evaluate_correctly(case):
    src, value = case
    assert parse_expression(src, XYZ) == value
