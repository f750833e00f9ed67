#!/usr/bin/env python3
"""End-to-end demo on the sample inputs: questionnaire analysis to validation.

Runs every CLI subcommand against schemas/examples/ and drops all outputs into
a target directory (default ./demo-output). Handy as a smoke test and as a
template for wiring the tool into an actual QA-planning workflow.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from hdce.cli import main as hdce

EXAMPLES = Path(__file__).resolve().parent.parent / "schemas" / "examples"


def run(label: str, argv: list[str]) -> None:
    print(f"--- {label}: hdce {' '.join(argv)}")
    code = hdce(argv)
    if code != 0:
        sys.exit(f"{label} failed with exit code {code}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="demo-output")
    parser.add_argument("--seed", type=int, default=20240817)
    parser.add_argument("--samples", type=int, default=10000)
    args = parser.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model = str(EXAMPLES / "model.json")
    projects = str(EXAMPLES / "projects.json")
    rankings = str(EXAMPLES / "rankings.csv")
    seed = ["--seed", str(args.seed), "--samples", str(args.samples)]

    run("rank-analyze", ["rank-analyze", "--rankings", rankings, "--out", str(out / "ranking-analysis.json")])
    run("model-check", ["model-check", "--model", model, "--projects", projects,
                        "--require-quantified", "--out", str(out / "model-diagnostics.json")])
    run("simulate", ["simulate", "--model", model, "--projects", projects, "--project", "review-c",
                     "--kind", "dc", *seed, "--out", str(out / "review-c-ddif.json")])
    run("plan", ["plan", "--model", model, "--projects", projects, *seed,
                 "--out", str(out / "risk-chart.csv"), "--svg", str(out / "risk-chart.svg")])
    run("predict", ["predict", "--model", model, "--projects", projects, "--target", "review-next",
                    *seed, "--out", str(out / "prediction.json")])
    run("validate", ["validate", "--model", model, "--projects", projects, *seed,
                     "--out", str(out / "validation.json")])
    print(f"all outputs in {out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
