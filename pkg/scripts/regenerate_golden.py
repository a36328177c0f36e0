"""Regenerate golden CLI reports (timings omitted) for every manifest in manifests/."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from lgres.cli import render_report, run_manifest

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--manifests", type=Path, default=ROOT / "manifests")
    args = ap.parse_args()
    out_dir = args.manifests / "golden"
    out_dir.mkdir(exist_ok=True)
    for path in sorted(args.manifests.glob("*.json")):
        task = json.loads(path.read_text())["task"]
        report, code = run_manifest(str(path.relative_to(ROOT)), task, timings=False)
        text = render_report(report)
        (out_dir / path.name).write_text(text)
        (out_dir / (path.stem + ".exit")).write_text(f"{code}\n")
        print(f"{path.name:40s} exit={code}")


if __name__ == "__main__":
    main()
