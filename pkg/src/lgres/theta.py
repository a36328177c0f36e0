"""Dirichlet characters, theta series and the weight-6 mirror identity.

The three canonical series of the cubic mirror are

    phi = sum_k (-1)^k (k + 1/2) q^((6k+3)^2)
    psi = sum_k (-1)^k (6k + 1)  q^((6k+1)^2)
    c_L = sum_k (-1)^k           q^((6k+1)^2)

(``appendixB`` signs; the ``theorem92`` convention negates phi and psi) and
they are halves of the theta series Theta_chi4(q^9), Theta_chi4~(q),
theta_chi12(q). The identity

    c_L^2 (phi q d/dq psi - psi q d/dq phi) = 8 phi (27 phi^3 - psi^3)

is, after multiplying by 24, A(q) = B(q) with

    A = theta_chi12^2 [Theta_chi4(q^9), Theta_chi4~(q)]_1
    B = 12 Theta_chi4(q^9) (27 Theta_chi4(q^9)^3 - Theta_chi4~(q)^3)

both in M_6(Gamma_0(576)), so agreement below q^577 proves it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .rings.qseries import QSeries
from .rings.rational import Scalar

STURM_BOUND = 577
LEVEL = 576
WEIGHT = 6

CONVENTIONS = ("appendixB", "theorem92")


@dataclass(frozen=True)
class DirichletChar:
    name: str
    modulus: int
    values: tuple

    def __call__(self, n: int) -> int:
        return self.values[n % self.modulus]

    @property
    def is_even(self) -> bool:
        return self(-1) == 1

    @property
    def is_odd(self) -> bool:
        return self(-1) == -1


def _char(name: str, modulus: int, table: dict) -> DirichletChar:
    return DirichletChar(name, modulus, tuple(table.get(r, 0) for r in range(modulus)))


CHI4 = _char("chi4", 4, {1: 1, 3: -1})
CHI4_TILDE = _char("chi4~", 12, {1: 1, 5: 1, 7: -1, 11: -1})
CHI12 = _char("chi12", 12, {1: 1, 5: -1, 7: -1, 11: 1})

CHARACTERS = {"chi4": CHI4, "chi4t": CHI4_TILDE, "chi4~": CHI4_TILDE, "chi12": CHI12}


@dataclass(frozen=True)
class ThetaSpec:
    """theta_chi (weight 1/2) or Theta_chi (weight 3/2), taken in q^s."""

    char: DirichletChar
    weight: str = "half"
    power: int = 1
    sturm_bound: int = STURM_BOUND

    def __post_init__(self):
        if self.weight not in ("half", "three_halves"):
            raise ValueError("weight must be 'half' or 'three_halves'")
        if self.power < 1:
            raise ValueError("substitution power must be >= 1")


def theta_series(spec: ThetaSpec, precision: int, one_sided: bool = False) -> QSeries:
    """Sum chi(n) [n] q^(s n^2) over all n (or n >= 1) with s n^2 < precision."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    s = spec.power
    m = isqrt((precision - 1) // s)
    terms: dict = {}
    lo = 1 if one_sided else -m
    for n in range(lo, m + 1):
        c = spec.char(n)
        if not c:
            continue
        if spec.weight == "three_halves":
            c *= n
        e = s * n * n
        terms[e] = terms.get(e, 0) + c
    return QSeries(terms, precision)


def _sign(k: int, convention: str) -> int:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    s = -1 if k % 2 else 1
    return s if convention == "appendixB" else -s


def _direct(which: str, precision: int, convention: str) -> QSeries:
    kmax = isqrt(max(precision, 1)) // 6 + 2
    terms: dict = {}
    for k in range(-kmax, kmax + 1):
        if which == "phi":
            e, c = (6 * k + 3) ** 2, _sign(k, convention) * (Fraction(2 * k + 1, 2))
        elif which == "psi":
            e, c = (6 * k + 1) ** 2, _sign(k, convention) * (6 * k + 1)
        elif which == "cl":
            e, c = (6 * k + 1) ** 2, -1 if k % 2 else 1
        else:
            raise ValueError(f"unknown canonical series {which!r}")
        if e < precision:
            terms[e] = terms.get(e, 0) + c
    return QSeries(terms, precision)


class ThetaRelationError(AssertionError):
    pass


def canonical_series(which: str, precision: int, convention: str = "appendixB") -> QSeries:
    """phi, psi or c_L by direct summation, cross-checked against the theta relations."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    out = _direct(which, precision, convention)
    if precision >= 50:
        flip = 1 if convention == "appendixB" or which == "cl" else -1
        ref = {
            "phi": ThetaSpec(CHI4, "three_halves", 9),
            "psi": ThetaSpec(CHI4_TILDE, "three_halves"),
            "cl": ThetaSpec(CHI12, "half"),
        }[which]
        if not (out * (2 * flip)).agrees(theta_series(ref, precision)):
            raise ThetaRelationError(f"{which} disagrees with its theta-series expression")
    return out


def rankin_cohen1(f: QSeries, k: Scalar, g: QSeries, l: Scalar) -> QSeries:
    """First Rankin-Cohen bracket k f (q d/dq g) - l g (q d/dq f)."""
    return f * g.euler_derivative() * k - g * f.euler_derivative() * l


# ---------------------------------------------------------------------------
# named series for expression environments
# ---------------------------------------------------------------------------

def named_series(name: str, precision: int, convention: str = "appendixB") -> QSeries:
    if name in ("phi", "psi", "cl"):
        return canonical_series(name, precision, convention)
    if name in ("dphi", "dpsi", "dcl"):
        return canonical_series(name[1:], precision, convention).euler_derivative()
    if name == "q":
        return QSeries.gen(precision)
    table = {
        "theta_chi12": ThetaSpec(CHI12, "half"),
        "theta_chi4": ThetaSpec(CHI4, "half"),
        "theta_chi4t": ThetaSpec(CHI4_TILDE, "half"),
        "Theta_chi4": ThetaSpec(CHI4, "three_halves"),
        "Theta_chi4t": ThetaSpec(CHI4_TILDE, "three_halves"),
        "Theta_chi12": ThetaSpec(CHI12, "three_halves"),
        "Theta_chi4_q9": ThetaSpec(CHI4, "three_halves", 9),
        "theta_chi4_q9": ThetaSpec(CHI4, "half", 9),
    }
    if name not in table:
        raise KeyError(name)
    return theta_series(table[name], precision)


NAMED_SERIES = (
    "phi", "psi", "cl", "dphi", "dpsi", "dcl", "q",
    "theta_chi12", "theta_chi4", "theta_chi4t", "Theta_chi4", "Theta_chi4t",
    "Theta_chi12", "Theta_chi4_q9", "theta_chi4_q9",
)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class MirrorReport:
    order: int
    convention: str
    holds: bool
    holds_to: int
    first_discrepancy: dict | None
    forms_agree: bool
    leading: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "convention": self.convention,
            "holds": self.holds,
            "holds_to": self.holds_to,
            "first_discrepancy": self.first_discrepancy,
            "forms_agree": self.forms_agree,
            "leading": self.leading,
            "wall_time": self.wall_time,
        }


def mirror_series_AB(precision: int) -> tuple[QSeries, QSeries]:
    """The theta-form sides A(q), B(q) to order ``precision``."""
    th12 = theta_series(ThetaSpec(CHI12, "half"), precision)
    t9 = theta_series(ThetaSpec(CHI4, "three_halves", 9), precision)
    tt = theta_series(ThetaSpec(CHI4_TILDE, "three_halves"), precision)
    k = Fraction(3, 2)
    a = (th12 * th12) * rankin_cohen1(t9, k, tt, k)
    b = t9 * (t9 ** 3 * 27 - tt ** 3) * 12
    return a.truncate(precision), b.truncate(precision)


def mirror_series_pc(precision: int, convention: str = "appendixB") -> tuple[QSeries, QSeries]:
    """The (phi, psi, c_L) sides of the identity to order ``precision``."""
    phi = canonical_series("phi", precision, convention)
    psi = canonical_series("psi", precision, convention)
    cl = canonical_series("cl", precision, convention)
    lhs = (cl * cl) * (phi * psi.euler_derivative() - psi * phi.euler_derivative())
    rhs = phi * (phi ** 3 * 27 - psi ** 3) * 8
    return lhs.truncate(precision), rhs.truncate(precision)


def _lead(s: QSeries) -> dict | None:
    v = s.valuation
    return None if v is None else {"exponent": v, "coefficient": str(s[v])}


def verify_mirror_identity(precision: int, convention: str = "appendixB") -> MirrorReport:
    """Compare A(q) and B(q) coefficientwise below q^precision."""
    if precision < 13:
        raise ValueError("order must be >= 13 (both sides start at q^12)")
    t0 = time.perf_counter()
    a, b = mirror_series_AB(precision)
    lhs, rhs = mirror_series_pc(precision, convention)
    n = min(a.prec, b.prec, precision)
    diff = a.first_difference(b, n)
    forms_agree = (lhs * 24).agrees(a, n) and (rhs * 24).agrees(b, n)
    pc_diff = lhs.first_difference(rhs, n)
    holds = diff is None and pc_diff is None and forms_agree
    first = None
    if diff is not None:
        first = {"exponent": diff, "A": str(a[diff]), "B": str(b[diff])}
    elif pc_diff is not None:
        first = {"exponent": pc_diff, "lhs": str(lhs[pc_diff]), "rhs": str(rhs[pc_diff])}
    holds_to = n if holds else (first["exponent"] if first else n)
    return MirrorReport(
        order=precision,
        convention=convention,
        holds=holds,
        holds_to=holds_to,
        first_discrepancy=first,
        forms_agree=forms_agree,
        leading={"A": _lead(a), "B": _lead(b)},
        wall_time=time.perf_counter() - t0,
    )


def theta_relations(precision: int, convention: str = "appendixB") -> dict:
    """Check 2 phi = Theta_chi4(q^9), 2 psi = Theta_chi4~(q), 2 c_L = theta_chi12(q)."""
    flip = 1 if convention == "appendixB" else -1
    out = {}
    pairs = {
        "phi": ThetaSpec(CHI4, "three_halves", 9),
        "psi": ThetaSpec(CHI4_TILDE, "three_halves"),
        "cl": ThetaSpec(CHI12, "half"),
    }
    for name, spec in pairs.items():
        f = 1 if name == "cl" else flip
        direct = _direct(name, precision, convention) * (2 * f)
        th = theta_series(spec, precision)
        out[name] = direct.first_difference(th)
    return out


def level_relations(precision: int) -> dict:
    """Compare the chi4 / chi4~ level relations coefficientwise.

    Reports the first discrepancy (None when the relation holds to
    ``precision``) for:
      theta_one_sided : th+_chi4~(q) = th+_chi4(q) + th+_chi4(q^9)  (n >= 1 sums)
      Theta_as_stated : Theta_chi4~(q) = Theta_chi4(q) + Theta_chi4(q^9)
      Theta_factor3   : Theta_chi4~(q) = Theta_chi4(q) + 3 Theta_chi4(q^9)
    """
    n = precision
    th_t = theta_series(ThetaSpec(CHI4_TILDE, "half"), n, one_sided=True)
    th_4 = theta_series(ThetaSpec(CHI4, "half"), n, one_sided=True)
    th_49 = theta_series(ThetaSpec(CHI4, "half", 9), n, one_sided=True)
    T_t = theta_series(ThetaSpec(CHI4_TILDE, "three_halves"), n)
    T_4 = theta_series(ThetaSpec(CHI4, "three_halves"), n)
    T_49 = theta_series(ThetaSpec(CHI4, "three_halves", 9), n)
    return {
        "theta_one_sided": th_t.first_difference(th_4 + th_49),
        "Theta_as_stated": T_t.first_difference(T_4 + T_49),
        "Theta_factor3": T_t.first_difference(T_4 + T_49 * 3),
    }
