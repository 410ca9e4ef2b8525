#!/usr/bin/env python3
"""Sweep equilibrium resource/expenditure bounds over a c0_inv grid.

Reproduces the bounds-versus-c0_inv experiment: n=4, D=40, sign valuations,
linear obtainment cost 1/c0_inv, no assignment costs.  Writes sweep.csv and
prints a per-point summary line.
"""
import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from costblotto.cli import cmd_sweep  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--spec", default=str(Path(__file__).resolve().parents[1]
                                          / "configs" / "sweep_figure.json"))
    ap.add_argument("--out", default="results")
    ap.add_argument("--jobs", type=int, default=None)
    args = ap.parse_args()

    t0 = time.perf_counter()
    out_path = cmd_sweep(args.spec, args.out, args.jobs)
    elapsed = time.perf_counter() - t0

    lines = out_path.read_text().splitlines()
    print(lines[0])
    for line in lines[1:]:
        print(line)
    print(f"# {len(lines) - 1} points in {elapsed:.1f}s -> {out_path}")


if __name__ == "__main__":
    main()
