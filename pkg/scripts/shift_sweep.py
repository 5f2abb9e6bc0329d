"""Single-window shift sweep at E=1, a=2: I_X - I_A against the future-window shift.

Writes sweep_shift.{csv,dat,svg} to the output directory and prints the
sign-change abscissae with their tolerance-halving stability.
"""
import argparse
import sys

from timelike.cli import main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/shift_sweep")
    ap.add_argument("--jobs", default="1")
    args = ap.parse_args()
    sys.exit(main(["sweep-shift", "--e", "1", "--a", "2", "--grid=-3:3:0.25", "--svg",
                   "--jobs", args.jobs, "--out", args.out]))
