"""Manifest-driven command line: ``lgres <task> --manifest file.json``.

Exit codes: 0 success (identity holds), 1 well-formed but false, 2 input or
parse error. Reports are JSON with sorted keys; only the ``timings`` field
varies between runs on identical input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from fractions import Fraction
from itertools import permutations

from . import boundary_bulk, frobenius, jacobian, mf, mirror333, theta
from .parser import Env, ParseError, parse_expression
from .rings.mpoly import MPoly
from .rings.qseries import PrecisionError, QSeries
from .rings.rational import render_scalar, to_scalar

TASKS = ("series", "mf-check", "kl", "residue", "theta-verify", "mirror333",
         "z-invariant", "b-invariant", "perm-check", "morse")

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class ManifestError(ValueError):
    def __init__(self, message: str, **where):
        super().__init__(message)
        self.where = where


# ---------------------------------------------------------------------------
# decoding helpers
# ---------------------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NON_EXPRESSION_KEYS = {"task", "version", "convention", "path", "lift", "m2_convention", "variables",
                        "laurent", "series", "alpha", "d", "critical_points"}


def infer_variables(manifest: dict, series_names=()) -> list[str]:
    """Identifiers used in expression fields, sorted, when none are declared."""
    found: set = set()

    def walk(v):
        if isinstance(v, str):
            found.update(_IDENT.findall(v))
        elif isinstance(v, list):
            for x in v:
                walk(x)
        elif isinstance(v, dict):
            for k, x in v.items():
                if k not in ("parity", "index", "degree"):
                    walk(x)

    for k, v in manifest.items():
        if k not in _NON_EXPRESSION_KEYS:
            walk(v)
    found -= set(series_names) | {"identity", "Q"}
    return sorted(found)


def render_value(v):
    if isinstance(v, QSeries):
        return v.render()
    if isinstance(v, MPoly):
        return v.render()
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return render_scalar(v)
    return v


class Decoder:
    """Turns manifest entries into library values, tracking source positions."""

    def __init__(self, manifest: dict, raw: str, path: str, order: int | None):
        self.m = manifest
        self.raw = raw
        self.path = path
        precision = order if order is not None else manifest.get("precision", manifest.get("order", 0))
        series = manifest.get("series", {})
        if isinstance(series, list):
            series = {"names": series}
        variables = manifest.get("variables")
        if variables is None:
            variables = infer_variables(manifest, series.get("names", ()))
        self.env = Env(
            variables=tuple(variables),
            laurent=tuple(manifest.get("laurent", ())),
            series_names=tuple(series.get("names", ())),
            precision=int(series.get("precision", precision) if order is None else order),
            convention=manifest.get("convention", "appendixB"),
        )

    def require(self, key: str):
        if key not in self.m:
            raise ManifestError(f"missing required key {key!r}", key=key)
        return self.m[key]

    def expr(self, src, key: str) -> MPoly:
        if isinstance(src, (int,)) and not isinstance(src, bool):
            src = str(src)
        if not isinstance(src, str):
            raise ManifestError(f"expression expected at {key}", key=key)
        try:
            return parse_expression(src, self.env)
        except ParseError as exc:
            line, col = self._locate(src, exc.position)
            raise ManifestError(exc.message, key=key, expression=src, position=exc.position,
                                line=line, column=col) from None

    def _locate(self, src: str, pos: int):
        needle = json.dumps(src)
        at = self.raw.find(needle)
        if at < 0:
            return None, None
        at += 1 + pos
        line = self.raw.count("\n", 0, at) + 1
        col = at - (self.raw.rfind("\n", 0, at) + 1) + 1
        return line, col

    def matrix(self, rows, key: str) -> list:
        if isinstance(rows, str):
            rows = [[rows]]
        return [[self.expr(s, f"{key}[{i}][{j}]") for j, s in enumerate(row)] for i, row in enumerate(rows)]

    def scalar(self, v, key: str):
        try:
            return to_scalar(v)
        except (TypeError, ValueError, ZeroDivisionError):
            raise ManifestError(f"exact scalar expected at {key}", key=key) from None

    def factorization(self) -> mf.MatrixFactorization:
        if "koszul" in self.m:
            pairs = [(self.expr(a, f"koszul[{i}][0]"), self.expr(b, f"koszul[{i}][1]"))
                     for i, (a, b) in enumerate(self.m["koszul"])]
            return mf.koszul_build(pairs)
        W = self.potential()
        q01 = self.matrix(self.require("Q01"), "Q01")
        q10 = self.matrix(self.require("Q10"), "Q10")
        shift = self.expr(self.m.get("shift", "0"), "shift").constant_term()
        r0, r1 = len(q01), len(q10)
        return mf.MatrixFactorization(r0, r1, q01, q10, W, shift)

    def potential(self) -> MPoly:
        key = "W" if "W" in self.m else "potential"
        return self.expr(self.require(key), key)

    def morphism(self, spec, m: mf.MatrixFactorization, key: str) -> mf.MFMorphism:
        if spec == "identity":
            return mf.identity(m)
        if spec == "Q":
            return mf.q_morphism(m)
        if "closed_basis" in spec:
            cb = spec["closed_basis"]
            basis = mf.closed_morphisms(m, m, int(cb["parity"]), int(cb.get("degree", 1)))
            idx = int(cb.get("index", 0))
            if not 0 <= idx < len(basis):
                raise ManifestError(f"closed basis has {len(basis)} elements", key=key)
            return basis[idx]
        parity = int(spec["parity"])
        a, b = spec["blocks"]
        return mf.MFMorphism(m, m, parity, (self.matrix(a, f"{key}.blocks[0]"), self.matrix(b, f"{key}.blocks[1]")))

    def jacobian(self, W: MPoly) -> jacobian.JacobianData:
        if "C" in self.m:
            C = self.matrix(self.m["C"], "C")
            D = self.expr(self.m.get("D", "1"), "D").constant_term()
            targets = [self.expr(t, f"targets[{i}]") for i, t in enumerate(self.m["targets"])] \
                if "targets" in self.m else None
            return jacobian.jacobian_from_lift(W, C, D, self.m.get("l"), targets)
        bound = int(self.m.get("degree_bound", 2))
        if "targets" in self.m:
            targets = [self.expr(t, f"targets[{i}]") for i, t in enumerate(self.m["targets"])]
            return jacobian.solve_lift(W, degree_bound=bound, targets=targets)
        return jacobian.solve_lift(W, int(self.require("l")), bound)


# ---------------------------------------------------------------------------
# tasks (thin adapters over the library)
# ---------------------------------------------------------------------------

def task_series(d: Decoder, args) -> dict:
    p = d.expr(d.require("expression"), "expression")
    if p.nvars and any(any(e) for e in p.terms):
        raise ManifestError("series task expects an expression without variables", key="expression")
    s = p.constant_term()
    if not isinstance(s, QSeries):
        s = QSeries.constant(s, d.env.precision)
    if d.m.get("euler_derivative"):
        s = s.euler_derivative()
    return {"result": {"series": s.render(), "valuation": s.valuation, "precision": s.prec},
            "holds": None, "sound_order": s.prec}


def task_mf_check(d: Decoder, args) -> dict:
    m = d.factorization()
    rep = mf.mf_validate(m)
    return {"result": {"rank_even": m.rank_even, "rank_odd": m.rank_odd,
                       "potential": m.potential.render(), "discrepancies": rep.render()},
            "holds": rep.valid}


def task_kl(d: Decoder, args) -> dict:
    m = d.factorization()
    jd = d.jacobian(m.potential)
    f = d.morphism(d.require("f"), m, "f")
    g = d.morphism(d.m.get("g", "identity"), m, "g")
    value = boundary_bulk.kl_pair(f, g, jd)
    out = {"kl": render_value(value), "tau_f": boundary_bulk.tau(f, jd).value.render()}
    holds = None
    if "expected" in d.m:
        expected = d.expr(d.m["expected"], "expected").constant_term()
        holds = value == expected
        out["expected"] = render_value(expected)
    return {"result": out, "holds": holds}


def task_residue(d: Decoder, args) -> dict:
    W = d.potential()
    jd = d.jacobian(W)
    f = d.expr(d.m.get("f", "1"), "f")
    g = d.expr(d.m.get("g", "1"), "g")
    value = jacobian.residue_pair(f, g, jd)
    out = {"residue": render_value(value), "denominator": render_value(jd.denominator),
           "det_numerator": jd.det_numerator.render(),
           "normal_form_f": jacobian.normal_form(f, jd).render()}
    holds = None
    if "expected" in d.m:
        expected = d.expr(d.m["expected"], "expected").constant_term()
        holds = value == expected
        out["expected"] = render_value(expected)
    return {"result": out, "holds": holds,
            "sound_order": value.prec if isinstance(value, QSeries) else None}


def task_theta_verify(d: Decoder, args) -> dict:
    order = args.order if args.order is not None else int(d.m.get("order", theta.STURM_BOUND + 1))
    conv = getattr(args, "convention", None) or d.m.get("convention", "appendixB")
    rep = theta.verify_mirror_identity(order, conv)
    result = {k: v for k, v in rep.as_dict().items() if k != "wall_time"}
    holds = rep.holds
    if d.m.get("relations"):
        rel = theta.theta_relations(order, conv)
        result["theta_relations"] = rel
        holds = holds and all(v is None for v in rel.values())
    return {"result": result, "holds": holds, "sound_order": rep.holds_to,
            "timings": {"verify": rep.wall_time}}


def task_mirror333(d: Decoder, args) -> dict:
    order = args.order if args.order is not None else int(d.m.get("order", 300))
    path = getattr(args, "path", None) or d.m.get("path", "both")
    path = {"closed": "closed_form", "extract": "coefficient_extraction"}.get(path, path)
    conv = getattr(args, "convention", None) or d.m.get("convention", "appendixB")
    cfg = mirror333.Mirror333Config(order, conv, path, d.m.get("lift", "corrected"))
    rep = mirror333.verify_conformal_factor(cfg)
    result = {k: v for k, v in rep.as_dict().items() if k != "timings"}
    if d.m.get("check_lift", True):
        result["lift_checks"] = {v: mirror333.check_lift(cfg, v).as_dict() for v in mirror333.VARIANTS}
    return {"result": result, "holds": rep.holds, "sound_order": rep.sound_order, "timings": rep.timings}


def _clifford(d: Decoder):
    n = int(d.require("n"))
    dv = [d.scalar(x, f"d[{i}]") for i, x in enumerate(d.require("d"))]
    return n, dv, frobenius.clifford_build(n, dv)


def task_z_invariant(d: Decoder, args) -> dict:
    n, dv, alg = _clifford(d)
    z = frobenius.z_invariant(alg)
    expected = 2 ** n
    for x in dv:
        expected *= x
    return {"result": {"z": render_value(z), "expected": render_value(expected),
                       "sign_mismatch": z == -expected and z != 0},
            "holds": z == expected}


def task_b_invariant(d: Decoder, args) -> dict:
    n, dv, alg = _clifford(d)
    env = Env(variables=tuple(alg.labels[1:]))
    src = d.require("alpha")
    try:
        p = parse_expression(src, env)
    except ParseError as exc:
        line, col = d._locate(src, exc.position)
        raise ManifestError(exc.message, key="alpha", expression=src, position=exc.position,
                            line=line, column=col) from None
    if p.total_degree() > 1:
        raise ManifestError("alpha must be a linear combination of basis labels", key="alpha")
    alpha = {}
    for e, c in p.terms.items():
        alpha[e.index(1) + 1 if any(e) else 0] = c
    conv = d.m.get("m2_convention", "fooo")
    values = {"".join(str(i + 1) for i in s): frobenius.b_invariant_model(alpha, alg, None, s, conv)
              for s in permutations(range(n))}
    base = values["".join(str(i + 1) for i in range(n))]
    return {"result": {"b": render_value(base), "by_order": {k: render_value(v) for k, v in values.items()}},
            "holds": all(v == base for v in values.values())}


def task_perm_check(d: Decoder, args) -> dict:
    m = d.factorization()
    jd = d.jacobian(m.potential)
    f = d.morphism(d.require("f"), m, "f")
    closed = mf.morphism_delta(f).is_zero()
    rep = boundary_bulk.perm_check(f, jd)
    result = rep.as_dict()
    result["closed"] = closed
    return {"result": result, "holds": rep.holds}


def task_morse(d: Decoder, args) -> dict:
    W = d.potential()
    f = d.expr(d.m.get("f", "1"), "f")
    pts = []
    for i, cp in enumerate(d.require("critical_points")):
        point = [d.scalar(x, f"critical_points[{i}].point") for x in cp["point"]]
        h = d.scalar(cp["hessian"], f"critical_points[{i}].hessian") if "hessian" in cp \
            else jacobian.hessian_det(W, point)
        pts.append((point, h))
    value = jacobian.morse_trace(f, pts)
    out = {"morse_trace": render_value(value)}
    holds = None
    if "targets" in d.m or "l" in d.m:
        jd = d.jacobian(W)
        res = jacobian.residue_pair(f, W.one(), jd)
        out["residue"] = render_value(res)
        holds = res == value
    return {"result": out, "holds": holds}


HANDLERS = {
    "series": task_series, "mf-check": task_mf_check, "kl": task_kl, "residue": task_residue,
    "theta-verify": task_theta_verify, "mirror333": task_mirror333, "z-invariant": task_z_invariant,
    "b-invariant": task_b_invariant, "perm-check": task_perm_check, "morse": task_morse,
}


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def _digest(manifest: dict, overrides: dict) -> str:
    blob = json.dumps({"manifest": manifest, "overrides": overrides}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def run_manifest(path: str | None, task: str | None = None, order: int | None = None,
                 path_flag: str | None = None, timings: bool = True,
                 convention: str | None = None) -> tuple[dict, int]:
    """Execute a manifest file (or the empty manifest when ``path`` is None)."""
    if path is None:
        return run_document({}, "{}", "<defaults>", task, order, path_flag, timings, convention)
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        return {"task": task, "error": {"message": str(exc), "file": path}}, EXIT_INPUT
    try:
        manifest = json.loads(raw)
    except json.JSONDecodeError as exc:
        return {"task": task, "error": {"message": exc.msg, "file": path, "line": exc.lineno,
                                        "column": exc.colno}}, EXIT_INPUT
    if not isinstance(manifest, dict):
        return {"task": task, "error": {"message": "manifest must be a JSON object", "file": path}}, EXIT_INPUT
    return run_document(manifest, raw, path, task, order, path_flag, timings, convention)


def run_document(manifest: dict, raw: str, path: str, task: str | None = None, order: int | None = None,
                 path_flag: str | None = None, timings: bool = True,
                 convention: str | None = None) -> tuple[dict, int]:
    """Execute an already-loaded manifest; returns (report, exit code)."""
    t0 = time.perf_counter()
    declared = manifest.get("task")
    task = task or declared
    report: dict = {"task": task}
    if task not in HANDLERS:
        report["error"] = {"message": f"unknown task {task!r}", "file": path}
        return report, EXIT_INPUT
    if declared is not None and declared != task:
        report["error"] = {"message": f"manifest declares task {declared!r}, not {task!r}", "file": path}
        return report, EXIT_INPUT
    overrides = {"order": order, "path": path_flag}
    if convention is not None:
        overrides["convention"] = convention
    report["inputs_digest"] = _digest(manifest, overrides)
    args = argparse.Namespace(order=order, path=path_flag, convention=convention)
    try:
        out = HANDLERS[task](Decoder(manifest, raw, path, order), args)
    except ManifestError as exc:
        report["error"] = {"message": str(exc), "file": path, **exc.where}
        return report, EXIT_INPUT
    except (ValueError, TypeError, KeyError, ZeroDivisionError, PrecisionError, jacobian.LiftError) as exc:
        report["error"] = {"message": f"{type(exc).__name__}: {exc}", "file": path}
        return report, EXIT_INPUT
    report["result"] = out["result"]
    report["holds"] = out.get("holds")
    report["sound_order"] = out.get("sound_order")
    if timings:
        report["timings"] = {**out.get("timings", {}), "total": round(time.perf_counter() - t0, 6)}
    code = EXIT_FALSE if out.get("holds") is False else EXIT_OK
    return report, code


def render_report(report: dict, as_json: bool = True) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
    lines = [f"task: {report.get('task')}"]
    if "error" in report:
        lines.append(f"error: {report['error'].get('message')}")
        where = {k: v for k, v in report["error"].items() if k != "message"}
        if where:
            lines.append("  at " + ", ".join(f"{k}={v}" for k, v in sorted(where.items())))
    else:
        lines.append(f"holds: {report.get('holds')}")
        if report.get("sound_order") is not None:
            lines.append(f"sound_order: {report['sound_order']}")
        for k, v in sorted(report.get("result", {}).items()):
            lines.append(f"{k}: {json.dumps(v, sort_keys=True, default=str)}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lgres", description="Exact Landau-Ginzburg residue and mirror-identity checks.")
    sub = ap.add_subparsers(dest="task", required=True)
    for task in TASKS:
        sp = sub.add_parser(task)
        sp.add_argument("--manifest", required=task not in ("theta-verify", "mirror333"),
                        help="JSON manifest describing the inputs")
        sp.add_argument("--order", type=int, default=None, help="override the manifest precision")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="as_json", action="store_true", default=True)
        fmt.add_argument("--text", dest="as_json", action="store_false")
        sp.add_argument("--no-timings", action="store_true", help="omit the timings field")
        if task == "mirror333":
            sp.add_argument("--path", choices=("both", "closed", "extract"), default=None)
        if task in ("theta-verify", "mirror333"):
            sp.add_argument("--convention", choices=theta.CONVENTIONS, default=None,
                            help="sign convention for phi and psi (default from manifest, else appendixB)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report, code = run_manifest(args.manifest, args.task, args.order, getattr(args, "path", None),
                                timings=not args.no_timings, convention=getattr(args, "convention", None))
    sys.stdout.write(render_report(report, args.as_json))
    return code


if __name__ == "__main__":
    sys.exit(main())
