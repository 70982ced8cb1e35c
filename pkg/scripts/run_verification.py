"""Replay the acceptance-grade verification runs through the CLI and
collect the JSON reports in one directory.

Each job below is a plain `superharm` argument vector; running this
script is equivalent to invoking the CLI by hand for every row.  Exit
code is 0 when every job passes (window-limited twisted runs count as
acceptable and are flagged CAPPED), 1 otherwise.

Usage:
    python3 scripts/run_verification.py [--out-dir reports] [--jobs N]
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from superharm.cli import main as cli_main


@dataclass(frozen=True)
class Job:
    name: str
    argv: list


def job_table(jobs: int) -> list:
    rows = [
        Job("brackets-all-variants", ["check-brackets", "--jobs", str(jobs)]),
        Job("identities-all-variants", ["check-identities", "--jobs", str(jobs)]),
        Job("theorem1-gl23-grid", ["verify-theorem", "1", "--n", "2", "--m", "3",
                                   "--lmax", "4", "--jobs", str(jobs)]),
        Job("theorem1-gl21-grid", ["verify-theorem", "1", "--n", "2", "--m", "1",
                                   "--lmax", "4", "--jobs", str(jobs)]),
        Job("theorem3-even23-grid", ["verify-theorem", "3", "--n", "2", "--m", "3",
                                     "--kmax", "6", "--jobs", str(jobs)]),
        Job("theorem4-odd23-grid", ["verify-theorem", "4", "--n", "2", "--m", "3",
                                    "--kmax", "5", "--cap", "5", "--jobs", str(jobs)]),
        Job("basis-gl21-l1-lp1", ["harmonic-basis", "--scheme", "gl-natural",
                                  "--n", "2", "--m", "1", "--l", "1", "--lp", "1"]),
        Job("singular-gl23-l2-lp2", ["singular-vectors", "--scheme", "gl-natural",
                                     "--n", "2", "--m", "3", "--l", "2", "--lp", "2"]),
        Job("stabilizer-even21", ["stabilizer", "--scheme", "osp-even-natural",
                                  "--n", "2", "--m", "1"]),
    ]
    # twisted capped suite: the l + lp <= 0 corner of [-2, 2]^2, cap 6
    for l in range(-2, 3):
        for lp in range(-2, 3):
            if l + lp > 0:
                continue
            rows.append(Job(
                f"theorem2-tw4113-l{l}-lp{lp}-cap6",
                ["verify-theorem", "2", "--n", "4", "--m", "1",
                 "--n1", "1", "--n2", "3",
                 "--l", str(l), "--lp", str(lp), "--cap", "6"]))
    return rows


def run(out_dir: Path, jobs: int) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for job in job_table(jobs):
        path = out_dir / f"{job.name}.json"
        code = cli_main(job.argv + ["--format", "json", "--out", str(path)])
        status = {0: "PASS", 1: "FAIL", 2: "CONFIG-ERROR", 3: "CAPPED"}[code]
        print(f"{status:<12} {job.name:<34} -> {path}")
        if code in (1, 2):
            worst = 1
    return worst


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=Path("reports"))
    parser.add_argument("--jobs", type=int, default=1)
    return parser.parse_args(argv)


if __name__ == "__main__":
    args = parse_args()
    sys.exit(run(args.out_dir, args.jobs))
