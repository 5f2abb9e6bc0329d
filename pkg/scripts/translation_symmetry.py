"""Simultaneous shift of both windows: invariant integrals, growing Minkowski interaction volume."""
import sys

from timelike.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/symmetric"
    sys.exit(main(["sweep-symmetric", "--e", "1", "--a", "2", "--grid", "0:2:0.5", "--svg",
                   "--out", out]))
