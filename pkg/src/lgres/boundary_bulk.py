"""Boundary-bulk map, Kapustin-Li pairing and permutation invariance."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial

from .jacobian import JacobianData, normal_form, residue_pair
from .linalg import perm_sign
from .mf import MFMorphism, dQ, supertrace
from .rings.mpoly import MPoly


class PermutationInvarianceError(AssertionError):
    pass


@dataclass
class TopFormElement:
    """``value * dx_1 ^ ... ^ dx_n`` with the form left implicit in ``form_tag``."""

    value: MPoly
    form_tag: tuple

    def render(self) -> str:
        return f"({self.value.render()})*" + "^".join(f"d{v}" for v in self.form_tag)


def str_dq(f: MFMorphism, order) -> MPoly:
    """``Str(f o dQ_{order[0]} o ... o dQ_{order[-1]})``."""
    m = f.source
    out = f
    for i in order:
        out = out * dQ(m, i)
    return supertrace(out)


def _check_endo(f: MFMorphism) -> None:
    if f.source.rank_even != f.target.rank_even or f.source.rank_odd != f.target.rank_odd:
        raise ValueError("an endomorphism is required")


def antisymmetrized(f: MFMorphism, n: int) -> MPoly:
    """``(1/n!) Str(f (dQ)^{^n}) = (1/n!) sum_sigma sign(sigma) Str(f dQ_sigma)``."""
    total = f.source.potential.zero()
    for sigma in permutations(range(n)):
        s = str_dq(f, sigma)
        total = total + s if perm_sign(sigma) > 0 else total - s
    return total.scalar_mul(Fraction(1, factorial(n)))


def tau(f: MFMorphism, jd: JacobianData, check: bool = True) -> TopFormElement:
    """Boundary-bulk value ``(-1)^n (1/n!) Str(f (dQ)^{^n})`` in Jac(W)."""
    _check_endo(f)
    n = jd.n
    zero = TopFormElement(jd.potential.zero(), jd.variables)
    if (f.parity + n) % 2:
        return zero
    sign = -1 if n % 2 else 1
    single = normal_form(str_dq(f, range(n)).scalar_mul(sign), jd)
    if check and n > 1:
        full = normal_form(antisymmetrized(f, n).scalar_mul(sign), jd)
        if full != single:
            raise PermutationInvarianceError(
                f"antisymmetrized and single-product forms differ: {(full - single).render(4)}"
            )
    return TopFormElement(single, jd.variables)


def kl_pair(f: MFMorphism, g: MFMorphism, jd: JacobianData):
    """Kapustin-Li pairing: residue of ``Str(f g dQ_1 ... dQ_n)`` against ``grad W``."""
    if not g.target.same_as(f.source) or not f.target.same_as(g.source):
        raise ValueError("kl_pair needs g: Y -> X and f: X -> Y")
    n = jd.n
    if (f.parity + g.parity + n) % 2:
        return 0
    num = str_dq(f * g, range(n))
    return residue_pair(num, num.one(), jd)


@dataclass
class PermReport:
    holds: bool
    entries: list = field(default_factory=list)  # (sigma, sign, normal form of the twisted difference)

    def as_dict(self) -> dict:
        return {
            "holds": self.holds,
            "permutations": [
                {"sigma": list(s), "sign": g, "difference": d.render()} for s, g, d in self.entries
            ],
        }


def perm_check(f: MFMorphism, jd: JacobianData) -> PermReport:
    """``nf(Str(f dQ_sigma) - sign(sigma) Str(f dQ_id)) = 0`` for every permutation."""
    _check_endo(f)
    n = jd.n
    base = str_dq(f, range(n))
    entries = []
    ok = True
    for sigma in permutations(range(n)):
        sg = perm_sign(sigma)
        s = base if sigma == tuple(range(n)) else str_dq(f, sigma)
        diff = normal_form(s - base if sg > 0 else s + base, jd)
        ok = ok and diff.is_zero()
        entries.append((sigma, sg, diff))
    return PermReport(ok, entries)
