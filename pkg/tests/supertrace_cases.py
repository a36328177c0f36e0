"""Randomized supertrace identities, one checker per identity.

Each checker draws a fresh instance from ``rng`` and returns True when the
identity holds exactly (the delta-exact check holds modulo the Jacobian ideal).
"""

from __future__ import annotations

import random

from lgres import mf
from lgres.boundary_bulk import str_dq, tau
from lgres.jacobian import normal_form
from sampling import jacobian_for, random_koszul, random_morphism


def direct_str(f: mf.MFMorphism):
    """Tr(Phi00) - Tr(Phi11) read off the full matrix, parity ignored."""
    r0 = f.source.rank_even
    total = f.source.potential.zero()
    for i in range(f.source.rank):
        total = total + f.full[i][i] if i < r0 else total - f.full[i][i]
    return total


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def odd_supertrace_vanishes(rng: random.Random) -> bool:
    m, _ = random_koszul(rng)
    f = random_morphism(rng, m, 1)
    return mf.supertrace(f).is_zero() and direct_str(f).is_zero()


def additive(rng: random.Random) -> bool:
    m, _ = random_koszul(rng)
    f, g = random_morphism(rng, m, 0), random_morphism(rng, m, 0)
    s = mf.supertrace
    return s(f + g) == s(f) + s(g) and s(f) == direct_str(f)


def graded_cyclic(rng: random.Random) -> bool:
    name = rng.choice(["x2+y2", "x3+y3", "x3+y2", "x2y+y3"])
    X, _ = random_koszul(rng, name)
    Y, _ = random_koszul(rng, name)
    pa, pb = rng.randint(0, 1), rng.randint(0, 1)
    phi = random_morphism(rng, X, pa, target=Y)
    psi = random_morphism(rng, Y, pb, target=X)
    lhs = mf.supertrace(phi * psi)
    rhs = mf.supertrace(psi * phi)
    return lhs == (rhs.scalar_mul(_sign(pa * pb)))


def commutator_traceless(rng: random.Random) -> bool:
    m, _ = random_koszul(rng)
    f = random_morphism(rng, m, rng.randint(0, 1))
    g = random_morphism(rng, m, rng.randint(0, 1))
    return mf.supertrace(mf.commutator(f, g)).is_zero()


def commutator_rotation(rng: random.Random) -> bool:
    m, _ = random_koszul(rng)
    a, b, c = (random_morphism(rng, m, rng.randint(0, 1)) for _ in range(3))
    pa, pb, pc = a.parity, b.parity, c.parity
    br = mf.commutator
    s0 = mf.supertrace(br(a, b) * c)
    s1 = mf.supertrace(b * br(a, c)).scalar_mul(_sign(1 + pa * pb))
    s2 = mf.supertrace(br(c, a) * b).scalar_mul(_sign(pc * (pa + pb)))
    return s0 == s1 == s2


def parity_vanishing(rng: random.Random) -> bool:
    m, l = random_koszul(rng)
    n = m.potential.nvars
    f = random_morphism(rng, m, (n + 1) % 2)
    if not str_dq(f, range(n)).is_zero():
        return False
    return tau(f, jacobian_for(m, l)).value.is_zero()


def delta_exact_in_ideal(rng: random.Random) -> bool:
    m, l = random_koszul(rng)
    n = m.potential.nvars
    f = random_morphism(rng, m, (n + 1) % 2, degree=2)  # delta f then has parity n
    jd = jacobian_for(m, l)
    return normal_form(str_dq(mf.morphism_delta(f), range(n)), jd).is_zero()


def delta_adjoint(rng: random.Random) -> bool:
    m, _ = random_koszul(rng)
    a = random_morphism(rng, m, rng.randint(0, 1))
    b = random_morphism(rng, m, rng.randint(0, 1))
    d = mf.morphism_delta
    lhs = mf.supertrace(a * d(b))
    rhs = mf.supertrace(d(a) * b).scalar_mul(-_sign(a.parity))
    return lhs == rhs


CHECKS = {
    "odd supertrace vanishes": odd_supertrace_vanishes,
    "additivity": additive,
    "graded cyclicity": graded_cyclic,
    "commutators are traceless": commutator_traceless,
    "commutator rotation": commutator_rotation,
    "parity vanishing": parity_vanishing,
    "delta-exact is zero in Jac": delta_exact_in_ideal,
    "delta adjointness": delta_adjoint,
}


def run_suite(total: int = 500, seed: int = 0) -> dict:
    """Round-robin ``total`` instances over the checkers; returns per-item (passed, run)."""
    rng = random.Random(seed)
    names = list(CHECKS)
    out = {k: [0, 0] for k in names}
    for i in range(total):
        name = names[i % len(names)]
        ok = CHECKS[name](random.Random(rng.getrandbits(64)))
        out[name][0] += bool(ok)
        out[name][1] += 1
    return out
