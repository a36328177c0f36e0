"""Extended runs of the mirror q-series identity A(q) = B(q).

Example::

    python3 scripts/mirror_identity.py --orders 578 100000
    python3 scripts/mirror_identity.py --orders 1000000   # stretch run
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

from lgres.theta import CONVENTIONS, theta_relations, verify_mirror_identity


@dataclass
class MirrorRunConfig:
    orders: list = field(default_factory=lambda: [578, 10_000, 100_000])
    convention: str = "appendixB"
    relations_order: int = 10_000


def run(cfg: MirrorRunConfig) -> dict:
    out = {"config": asdict(cfg), "runs": []}
    for n in cfg.orders:
        rep = verify_mirror_identity(n, cfg.convention)
        row = rep.as_dict()
        out["runs"].append(row)
        print(f"N={n:>8d}  holds={rep.holds}  holds_to={rep.holds_to}  wall={rep.wall_time:.2f}s", flush=True)
    if cfg.relations_order:
        rel = theta_relations(cfg.relations_order, cfg.convention)
        out["theta_relations"] = rel
        print(f"theta relations to N={cfg.relations_order}: first discrepancies {rel}")
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--orders", type=int, nargs="+", default=MirrorRunConfig().orders)
    ap.add_argument("--convention", choices=CONVENTIONS, default="appendixB")
    ap.add_argument("--relations-order", type=int, default=10_000)
    ap.add_argument("--json", type=str, default=None, help="write the full report here")
    args = ap.parse_args()
    out = run(MirrorRunConfig(args.orders, args.convention, args.relations_order))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(out, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
