"""Windowed excitation/de-excitation ratio F(E)/F(-E) against the Boltzmann factor exp(-2 pi E/a)."""
import argparse
import math

from timelike.kernels import DetectorParams
from timelike.response import detailed_balance_ratio


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--e", type=float, default=1.0)
    ap.add_argument("--a", type=float, default=2.0)
    ap.add_argument("--widths", default="0.5,1,2,4,6")
    args = ap.parse_args()
    params = DetectorParams(args.e, args.a)
    limit = math.exp(-2 * math.pi * args.e / args.a)
    print(f"Boltzmann limit exp(-2 pi E/a) = {limit:.6f}")
    for w in (float(v) for v in args.widths.split(",")):
        r = detailed_balance_ratio(params, w)
        print(f"width {w:5g}  ratio {r:.6f}  ratio/limit {r / limit:.4f}")


if __name__ == "__main__":
    main()
