from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgres import frobenius as fr

rats = st.fractions(min_value=-6, max_value=6, max_denominator=5).filter(bool)


# -- independent Clifford oracle on bitmasks ---------------------------------

def mask_product(a: int, b: int, d) -> tuple[int, Fraction]:
    """e_a e_b via reordering swaps counted with popcounts."""
    swaps = 0
    x = a >> 1
    while x:
        swaps += bin(x & b).count("1")
        x >>= 1
    c = Fraction(-1 if swaps % 2 else 1)
    for i in range(len(d)):
        if a & b & (1 << i):
            c *= d[i]
    return a ^ b, c


def to_mask(label: str) -> int:
    return 0 if label == "1" else sum(1 << (int(ch) - 1) for ch in label[1:])


def oracle_b(alpha: dict, n: int, d, order) -> Fraction:
    """B-invariant by direct expansion over bitmask basis, fooo signs."""
    deg = lambda m: bin(m).count("1")  # noqa: E731

    def m2(u: dict, v: dict) -> dict:
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                k, c = mask_product(a, b, d)
                s = -1 if deg(a) * (deg(b) + 1) % 2 else 1
                out[k] = out.get(k, 0) + s * c * x * y
        return {k: v for k, v in out.items() if v}

    gens = [{1 << i: Fraction(1)} for i in range(n)]
    acc = gens[order[0]]
    for i in order[1:]:
        acc = m2(gens[i], acc)
    total = Fraction(0)
    for b in range(1 << n):
        out = m2(alpha, m2({b: Fraction(1)}, acc))
        sgn = (-1) ** ((n - 1) * deg(b)) * (-1) ** deg(b)
        total += sgn * out.get(b, 0)
    inv = sum(1 for i in range(n) for j in range(i + 1, n) if order[i] > order[j])
    return (-1) ** (n * (n + 1) // 2 + 1) * (-1) ** inv * total


# -- structure ---------------------------------------------------------------

def test_small_clifford_relations():
    alg = fr.clifford_build(1, [Fraction(3, 2)])
    assert alg.mul({1: 1}, {1: 1}) == {0: Fraction(3, 2)}
    alg = fr.clifford_build(2, [1, 1])
    e1, e2 = {1: 1}, {2: 1}
    assert alg.mul(e1, e2) == fr.vscale(alg.mul(e2, e1), -1)
    assert alg.labels == ["1", "e1", "e2", "e12"]
    with pytest.raises(ValueError):
        fr.clifford_build(0, [])


@settings(max_examples=40)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.lists(rats, min_size=n, max_size=n),
                                                     st.lists(rats, min_size=n, max_size=n))))
def test_quadratic_form(dx):
    d, x = dx
    n = len(d)
    alg = fr.clifford_build(n, d)
    v = {k + 1: x[k] for k in range(n)}
    assert alg.mul(v, v) == fr._clean({0: sum(di * xi * xi for di, xi in zip(d, x))})


@settings(max_examples=20)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(rats, min_size=n, max_size=n)))
def test_structure_constants_match_oracle(d):
    n = len(d)
    alg = fr.clifford_build(n, d)
    masks = [to_mask(lab) for lab in alg.labels]
    for a in range(alg.dim):
        for b in range(alg.dim):
            k, c = mask_product(masks[a], masks[b], [Fraction(x) for x in d])
            assert alg.mul({a: 1}, {b: 1}) == {masks.index(k): c}
    assert not alg.frobenius_defect()


# -- Z-invariant ----------------------------------------------------------------

@pytest.mark.parametrize("n, d, z", [(1, [5], 10), (2, [2, 3], 24), (3, [1, 1, 1], 8)])
def test_z_examples(n, d, z):
    assert fr.z_invariant(fr.clifford_build(n, d)) == z


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(rats, min_size=n, max_size=n)))
def test_z_invariant_formula(d):
    expected = 2 ** len(d)
    for x in d:
        expected *= x
    assert fr.z_invariant(fr.clifford_build(len(d), d)) == expected


# -- Floer volume -----------------------------------------------------------------

@pytest.mark.parametrize("n, cup", [(1, 1), (2, 1), (3, -1), (4, -1)])
def test_volume_ratio(n, cup):
    alg = fr.clifford_build(n, [1] * n)
    gens = fr.generators(alg)
    assert fr.volume_ratio(alg, gens) == 1
    assert fr.volume_ratio(alg, gens, convention="cup") == cup


def test_volume_two_generators():
    alg = fr.clifford_build(2, [1, 1])
    gens = fr.generators(alg)
    assert fr.floer_volume(alg, gens) == {3: 1}


# -- congruence diagonalization --------------------------------------------------

def test_congruence_examples():
    A, d = fr.congruence_diagonalize([[2, 0], [0, 2]])
    assert d == [1, 1] and A == [[1, 0], [0, 1]]
    A, d = fr.congruence_diagonalize([[6, 0], [0, -4]])
    assert d == [3, -2]
    A, d = fr.congruence_diagonalize([[0, 1], [1, 0]])
    assert d[0] * d[1] == Fraction(-1, 4)
    with pytest.raises(ValueError):
        fr.congruence_diagonalize([[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        fr.congruence_diagonalize([[1, 2], [0, 1]])


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_congruence_random(rows):
    n = len(rows)
    H = [[rows[i][j] + rows[j][i] for j in range(n)] for i in range(n)]
    try:
        A, d = fr.congruence_diagonalize(H)
    except ValueError:
        from lgres.linalg import frac_det
        assert frac_det(H) == 0
        return
    prod = Fraction(1)
    for x in d:
        prod *= 2 * x
    from lgres.linalg import frac_det
    assert prod == frac_det(H)


# -- B-invariant -------------------------------------------------------------------

def test_b_one_generator():
    alg = fr.clifford_build(1, [3])
    assert fr.b_invariant_model({1: 1}, alg) == 6
    assert fr.b_invariant_model({1: 1}, alg) == oracle_b({1: Fraction(1)}, 1, [Fraction(3)], (0,))
    assert fr.b_invariant_model({0: 1}, alg) == 0


def _random_alpha(rng, alg):
    return fr._clean({k: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for k in range(alg.dim)})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 3))
def test_b_matches_oracle_and_permutation_invariant(seed, n):
    rng = random.Random(seed)
    d = [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)) for _ in range(n)]
    alg = fr.clifford_build(n, d)
    alpha = _random_alpha(rng, alg)
    masks = [to_mask(lab) for lab in alg.labels]
    alpha_m = {masks[k]: Fraction(c) for k, c in alpha.items()}
    base = fr.b_invariant_model(alpha, alg)
    for order in permutations(range(n)):
        assert fr.b_invariant_model(alpha, alg, order=order) == base
        assert oracle_b(alpha_m, n, d, order) == base


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 3))
def test_b_parity_vanishing(seed, n):
    rng = random.Random(seed)
    alg = fr.clifford_build(n, [rng.randint(1, 4) for _ in range(n)])
    for k in range(alg.dim):
        if alg.degrees[k] % 2 != n % 2:
            assert fr.b_invariant_model({k: Fraction(rng.randint(1, 5))}, alg) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 3))
def test_b_conjugation_invariance(seed, n):
    rng = random.Random(seed)
    alg = fr.clifford_build(n, [Fraction(rng.choice([-2, -1, 1, 3]), rng.randint(1, 2)) for _ in range(n)])
    even = [k for k in range(alg.dim) if alg.degrees[k] % 2 == 0]
    while True:
        p = fr._clean({k: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for k in even})
        try:
            q = fr.invert(alg, p)
            break
        except ValueError:
            continue
    assert alg.mul(q, p) == {alg.unit: 1}
    gens = [fr.conjugate(alg, g, p, q) for g in fr.generators(alg)]
    alpha = _random_alpha(rng, alg)
    assert fr.b_invariant_model(fr.conjugate(alg, alpha, p, q), alg, gens) == fr.b_invariant_model(alpha, alg)


def test_invert():
    alg = fr.clifford_build(2, [1, 1])
    v = {1: 1, 2: 1}                      # (e1 + e2)^2 = 2
    assert fr.invert(alg, v) == {1: Fraction(1, 2), 2: Fraction(1, 2)}
    with pytest.raises(ValueError):
        fr.invert(alg, {0: 1, 1: 1})      # (1 + e1)(1 - e1) = 0
