from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgres import jacobian as jac
from lgres.parser import Env, parse_expression
from lgres.rings import MPoly
from sampling import CATALOG, morse_instance, rand_poly

X = Env(variables=("x",))
XY = Env(variables=("x", "y"))


def P(src, env=X):
    return parse_expression(src, env)


def test_x_squared():
    jd = jac.solve_lift(P("x^2"), 2)
    assert jd.lift_C == [[P("x")]] and jd.denominator == 2
    assert jac.residue_pair(P("1"), P("1"), jd) == Fraction(1, 2)


def test_x_cubed():
    jd = jac.solve_lift(P("x^3"), 3)
    assert jd.denominator == 3
    assert jac.residue_pair(P("1"), P("x"), jd) == Fraction(1, 3)
    assert jac.residue_pair(P("1"), P("1"), jd) == 0
    assert jac.normal_form(P("x^2"), jd).is_zero()
    assert jac.normal_form(P("1 + x"), jd) == P("1 + x")


def test_sum_of_squares():
    jd = jac.solve_lift(P("x^2 + y^2", XY), 2)
    assert jd.lift_C == [[P("x", XY), P("0", XY)], [P("0", XY), P("y", XY)]]
    assert jd.denominator == 2
    assert jac.normal_form(P("x", XY), jd).is_zero()


def test_explicit_lift_is_verified():
    W = P("x^2")
    jd = jac.jacobian_from_lift(W, [[P("x")]], 2, 2)
    assert jd.det_numerator == P("x")
    with pytest.raises(jac.LiftError) as err:
        jac.jacobian_from_lift(W, [[P("x")]], 1, 2)
    assert err.value.discrepancy


def test_lift_failure_reports_rank_deficit():
    with pytest.raises(jac.LiftError) as err:
        jac.solve_lift(P("x^3 + y^3", XY), 1, 2)
    assert err.value.rank_deficit == 1


def test_laurent_potential_rejected():
    W = parse_expression("y + y^-1", Env(variables=("y",), laurent=("y",)))
    with pytest.raises(ValueError):
        jac.solve_lift(W, 2)


def test_morse_examples():
    W = P("1/3*x^3 - x")
    crit = [([1], 2), ([-1], -2)]
    assert jac.morse_trace(P("1"), crit) == 0
    assert jac.morse_trace(P("x"), crit) == 1
    jd = jac.solve_lift(W, targets=[P("x^2 - 1")])
    assert jac.residue_pair(P("x"), P("1"), jd) == 1
    assert jac.morse_trace(P("1"), [([0], 2)]) == jac.residue_pair(P("1"), P("1"), jac.solve_lift(P("x^2"), 2))
    with pytest.raises(ValueError):
        jac.morse_trace(P("1"), [([0], 0)])


def test_hessian_det():
    W = P("x^2*y + y^3", XY)
    assert jac.hessian_det(W, [1, 2]) == (2 * 2) * (6 * 2) - (2 * 1) ** 2


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_lift_identity_holds(name):
    variables, pairs, l = CATALOG[name]
    env = Env(variables=variables)
    W = parse_expression(" + ".join(f"({a})*({b})" for a, b in pairs), env)
    jd = jac.solve_lift(W, l)
    residual = jac.verify_lift(W, jd.lift_C, jd.denominator, jd.targets)
    assert all(r.is_zero() for r in residual)
    for g in jd.gradient:
        assert jac.normal_form(g, jd).is_zero()


def _catalog_jd(name):
    variables, pairs, l = CATALOG[name]
    env = Env(variables=variables)
    W = parse_expression(" + ".join(f"({a})*({b})" for a, b in pairs), env)
    return jac.solve_lift(W, l)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(sorted(CATALOG)))
def test_normal_form_properties(seed, name):
    rng = random.Random(seed)
    jd = _catalog_jd(name)
    v = jd.variables
    f, g, h = (rand_poly(rng, v, 4, 0.5) for _ in range(3))
    j = rng.randrange(len(v))
    nf = jac.normal_form(f, jd)
    assert jac.normal_form(nf, jd) == nf
    assert jac.normal_form(f + h * jd.gradient[j], jd) == nf
    assert jac.residue_pair(f, g, jd) == jac.residue_pair(g, f, jd)
    assert jac.residue_pair(f + h * jd.gradient[j], g, jd) == jac.residue_pair(f, g, jd)
    assert jac.residue_pair(h * jd.gradient[j], MPoly.const(v, 1), jd) == 0
    c = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
    assert jac.residue_pair(f.scalar_mul(c) + h, g, jd) == c * jac.residue_pair(f, g, jd) + jac.residue_pair(h, g, jd)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 2))
def test_residue_matches_morse_sum(seed, nvars):
    W, targets, crit, f = morse_instance(random.Random(seed), nvars)
    jd = jac.solve_lift(W, targets=targets)
    assert jac.residue_pair(f, MPoly.const(W.variables, 1), jd) == jac.morse_trace(f, crit)
    for point, h in crit:
        assert jac.hessian_det(W, point) == h
