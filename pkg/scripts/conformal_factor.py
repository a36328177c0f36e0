"""Conformal-factor check for the (3,3,3) cubic: c_L^2 <ks(1), ks(PD pt)>_res.

Runs both residue paths, both lift variants and both sign conventions, and
prints the lift-identity diagnostics for the explicit matrix.

Example::

    python3 scripts/conformal_factor.py --precision 300
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

from lgres.mirror333 import VARIANTS, Mirror333Config, check_lift, verify_conformal_factor
from lgres.theta import CONVENTIONS


@dataclass
class ConformalRunConfig:
    precision: int = 300
    conventions: list = field(default_factory=lambda: list(CONVENTIONS))
    lifts: list = field(default_factory=lambda: list(VARIANTS))
    lift_check_precision: int = 200


def run(cfg: ConformalRunConfig) -> dict:
    out = {"config": asdict(cfg), "lift_checks": {}, "runs": []}
    for variant in VARIANTS:
        rep = check_lift(Mirror333Config(cfg.lift_check_precision), variant)
        out["lift_checks"][variant] = rep.as_dict()
        print(f"lift {variant:9s}: identity={rep.identity_holds}  det=display:{rep.det_matches_display}"
              f"  det=-display:{rep.det_matches_negated_display}")
    for conv in cfg.conventions:
        for lift in cfg.lifts:
            rep = verify_conformal_factor(Mirror333Config(cfg.precision, conv, "both", lift))
            out["runs"].append(rep.as_dict())
            print(f"{conv:10s} lift={lift:9s} holds={rep.holds} sound_order={rep.sound_order} "
                  f"values={rep.values} agree={rep.paths_agree} agree_up_to_sign={rep.paths_agree_up_to_sign} "
                  f"t={rep.timings['total']:.2f}s")
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--precision", type=int, default=300)
    ap.add_argument("--json", type=str, default=None)
    args = ap.parse_args()
    out = run(ConformalRunConfig(precision=args.precision))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(out, fh, indent=2, sort_keys=True, default=str)


if __name__ == "__main__":
    main()
