"""Case study: the cubic potential W = phi (x^3 - y^3 + z^3) + psi xyz.

Builds W over truncated q-series, the Kodaira-Spencer image of the point
class ``(1/8) q dW/dq``, the explicit 3x3 lifting matrix with denominator
``D = 3 phi (27 phi^3 - psi^3)``, and the residue of the point class by two
routes (coefficient extraction against the lift, and the closed quotient).

Two versions of the explicit matrix are available. ``displayed`` is the
matrix as usually written; ``corrected`` negates its middle column. Only the
corrected one satisfies the lifting identity for this W (the displayed one
lifts against ``(dW/dx, -dW/dy, dW/dz)``), so residues computed through the
displayed matrix carry the opposite sign.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import linalg
from .jacobian import JacobianData, jacobian_from_lift, residue_pair, solve_lift, verify_lift
from .rings.mpoly import MPoly
from .rings.qseries import QSeries
from .theta import CONVENTIONS, canonical_series

VARIABLES = ("x", "y", "z")
PATHS = ("both", "coefficient_extraction", "closed_form")
VARIANTS = ("corrected", "displayed")
TOP = (3, 3, 3)


@dataclass
class Mirror333Config:
    precision: int = 300
    convention: str = "appendixB"
    residue_path: str = "both"
    lift: str = "corrected"

    def __post_init__(self):
        if self.precision < 30:
            raise ValueError("precision must be at least 30")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")
        if self.residue_path not in PATHS:
            raise ValueError(f"residue_path must be one of {PATHS}")
        if self.lift not in VARIANTS:
            raise ValueError(f"lift must be one of {VARIANTS}")


def _series(cfg: Mirror333Config):
    n = cfg.precision
    return (canonical_series("phi", n, cfg.convention), canonical_series("psi", n, cfg.convention),
            canonical_series("cl", n, cfg.convention))


def _mono(exps, c=1) -> MPoly:
    return MPoly.monomial(VARIABLES, exps, c)


def cubic_potential(phi, psi) -> MPoly:
    return _mono((3, 0, 0), phi) + _mono((0, 3, 0), -phi) + _mono((0, 0, 3), phi) + _mono((1, 1, 1), psi)


def build_potential_and_ks(cfg: Mirror333Config):
    """``(W, ks(1), ks(PD pt))`` at precision ``cfg.precision``."""
    phi, psi, _ = _series(cfg)
    W = cubic_potential(phi, psi)
    dphi = phi.euler_derivative() / 8
    dpsi = psi.euler_derivative() / 8
    ks_pt = _mono((3, 0, 0), dphi) + _mono((0, 3, 0), -dphi) + _mono((0, 0, 3), dphi) + _mono((1, 1, 1), dpsi)
    return W, MPoly.const(VARIABLES, 1), ks_pt


def lift_matrix(phi, psi, variant: str = "corrected"):
    """Numerator matrix and denominator ``D = 3 phi (27 phi^3 - psi^3)``."""
    a = phi ** 3 * 27 - psi ** 3
    b = phi * phi * psi * 9
    c = phi * psi * psi * 3
    d = psi ** 3
    m = [
        [_mono((2, 0, 0), a) - _mono((0, 1, 1), b), _mono((0, 0, 2), c), _mono((1, 0, 1), d)],
        [_mono((1, 1, 0), -d), _mono((0, 2, 0), a) + _mono((1, 0, 1), b), _mono((2, 0, 0), c)],
        [_mono((0, 2, 0), c), _mono((0, 1, 1), -d), _mono((0, 0, 2), a) - _mono((1, 1, 0), b)],
    ]
    if variant == "corrected":
        for row in m:
            row[1] = -row[1]
    elif variant != "displayed":
        raise ValueError(f"variant must be one of {VARIANTS}")
    return m, phi * a * 3


def displayed_det_numerator(phi, psi) -> MPoly:
    """``27 phi^3 A^2 x^2y^2z^2 + 9 phi^2 psi A^2 (-x^3y^3 + x^3z^3 - y^3z^3)``, ``A = 27 phi^3 - psi^3``."""
    a2 = (phi ** 3 * 27 - psi ** 3) ** 2
    u = phi ** 3 * a2 * 27
    v = phi * phi * psi * a2 * 9
    return _mono((2, 2, 2), u) + _mono((3, 3, 0), -v) + _mono((3, 0, 3), v) + _mono((0, 3, 3), -v)


def high_order_only(p: MPoly, l: int = 4) -> bool:
    """True when every monomial of ``p`` has some exponent >= l."""
    return all(any(k >= l for k in e) for e in p.terms)


@dataclass
class LiftReport:
    variant: str
    precision: int
    identity_holds: bool
    residual_rows: list
    det_matches_display: bool
    det_matches_negated_display: bool
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return {
            "variant": self.variant,
            "precision": self.precision,
            "identity_holds": self.identity_holds,
            "residual_rows": self.residual_rows,
            "det_matches_display": self.det_matches_display,
            "det_matches_negated_display": self.det_matches_negated_display,
        }


def check_lift(cfg: Mirror333Config, variant: str | None = None) -> LiftReport:
    """Verify ``Ct . grad W = D (x^4, y^4, z^4)`` and the low-order part of ``det Ct``."""
    t0 = time.perf_counter()
    variant = variant or cfg.lift
    phi, psi, _ = _series(cfg)
    W = cubic_potential(phi, psi)
    C, D = lift_matrix(phi, psi, variant)
    targets = [_mono((4, 0, 0)), _mono((0, 4, 0)), _mono((0, 0, 4))]
    residual = verify_lift(W, C, D, targets)
    det = linalg.det(C)
    shown = displayed_det_numerator(phi, psi)
    return LiftReport(
        variant=variant,
        precision=cfg.precision,
        identity_holds=all(r.is_zero() for r in residual),
        residual_rows=[r.render(3) for r in residual],
        det_matches_display=high_order_only(det - shown),
        det_matches_negated_display=high_order_only(det + shown),
        wall_time=time.perf_counter() - t0,
    )


def build_lift_C(cfg: Mirror333Config) -> JacobianData:
    """JacobianData from the explicit matrix; raises LiftError when the identity fails."""
    phi, psi, _ = _series(cfg)
    W = cubic_potential(phi, psi)
    C, D = lift_matrix(phi, psi, cfg.lift)
    return jacobian_from_lift(W, C, D, 4)


def solved_lift(cfg: Mirror333Config, degree_bound: int = 2) -> JacobianData:
    """An independently solved lift (generally a different matrix)."""
    phi, psi, _ = _series(cfg)
    return solve_lift(cubic_potential(phi, psi), 4, degree_bound)


def extraction_residue(f: MPoly, g: MPoly, C: list, D) -> QSeries:
    """Coefficient of x^3y^3z^3 in ``f g det Ct`` over ``D^3``; no lift verification."""
    from .jacobian import _coeff_of_product

    return _coeff_of_product([f, g, linalg.det(C)], TOP) / (D ** 3)


def closed_form_residue(cfg: Mirror333Config) -> QSeries:
    """``(phi q psi' - psi q phi') / (8 phi (27 phi^3 - psi^3))``."""
    phi, psi, _ = _series(cfg)
    num = phi * psi.euler_derivative() - psi * phi.euler_derivative()
    den = phi * (phi ** 3 * 27 - psi ** 3) * 8
    return num / den


@dataclass
class ResidueResult:
    extraction: QSeries | None
    closed_form: QSeries | None
    agree: bool | None
    agree_up_to_sign: bool | None
    sound_order: int

    def value(self) -> QSeries:
        return self.extraction if self.extraction is not None else self.closed_form


def residue_point_pairing(cfg: Mirror333Config, jd: JacobianData | None = None) -> ResidueResult:
    """``<ks(1), ks(PD pt)>_res`` by the configured path(s)."""
    ext = closed = None
    if cfg.residue_path in ("both", "coefficient_extraction"):
        W, one, ks_pt = build_potential_and_ks(cfg)
        if cfg.lift == "corrected":
            jd = jd or build_lift_C(cfg)
            ext = residue_pair(one, ks_pt, jd)
        else:
            phi, psi, _ = _series(cfg)
            C, D = lift_matrix(phi, psi, "displayed")
            ext = extraction_residue(one, ks_pt, C, D)
    if cfg.residue_path in ("both", "closed_form"):
        closed = closed_form_residue(cfg)
    present = [s for s in (ext, closed) if s is not None]
    sound = min(s.prec for s in present)
    agree = same_sign = None
    if ext is not None and closed is not None:
        agree = ext.first_difference(closed, sound) is None
        same_sign = agree or ext.first_difference(-closed, sound) is None
    return ResidueResult(ext, closed, agree, same_sign, sound)


@dataclass
class ConformalReport:
    precision: int
    convention: str
    lift: str
    residue_path: str
    holds: bool
    sound_order: int
    leading_residue_valuation: int | None
    paths_agree: bool | None
    paths_agree_up_to_sign: bool | None
    values: dict = field(default_factory=dict)          # path -> constant term of c_L^2 * residue
    first_discrepancy: dict | None = None
    timings: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "precision": self.precision,
            "convention": self.convention,
            "lift": self.lift,
            "residue_path": self.residue_path,
            "holds": self.holds,
            "sound_order": self.sound_order,
            "leading_residue_valuation": self.leading_residue_valuation,
            "paths_agree": self.paths_agree,
            "paths_agree_up_to_sign": self.paths_agree_up_to_sign,
            "values": self.values,
            "first_discrepancy": self.first_discrepancy,
            "timings": self.timings,
        }


def verify_conformal_factor(cfg: Mirror333Config) -> ConformalReport:
    """Check ``c_L^2 <ks(1), ks(PD pt)>_res = 1 + O(q^N')`` on every configured path."""
    t0 = time.perf_counter()
    res = residue_point_pairing(cfg)
    t1 = time.perf_counter()
    _, _, cl = _series(cfg)
    c2 = cl * cl
    one = QSeries.constant(1, 10 ** 9)
    products = {}
    if res.extraction is not None:
        products["coefficient_extraction"] = c2 * res.extraction
    if res.closed_form is not None:
        products["closed_form"] = c2 * res.closed_form
    sound = min(p.prec for p in products.values())
    holds = True
    first = None
    values = {}
    for name, p in products.items():
        values[name] = str(p.coeff(0)) if p.prec > 0 else None
        k = p.first_difference(one, sound)
        if k is not None:
            holds = False
            if first is None:
                first = {"path": name, "exponent": k, "coefficient": str(p.coeff(k))}
    if res.agree is False:
        holds = False
    lead = res.value().valuation
    return ConformalReport(
        precision=cfg.precision,
        convention=cfg.convention,
        lift=cfg.lift,
        residue_path=cfg.residue_path,
        holds=holds,
        sound_order=sound,
        leading_residue_valuation=lead,
        paths_agree=res.agree,
        paths_agree_up_to_sign=res.agree_up_to_sign,
        values=values,
        first_discrepancy=first,
        timings={"residue": round(t1 - t0, 6), "total": round(time.perf_counter() - t0, 6)},
    )
