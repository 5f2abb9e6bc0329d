"""Command-line entry point: ``timelike <subcommand> [flags]``.

Exit status: 0 on a completed computation (whatever the verdict), 1 when
``oracle-check`` fails its agreement gate, 2 for configuration errors and
3 for numerical failures.  Diagnostics name the stage that failed.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields
from pathlib import Path

from .config import ConfigError, Grid, load_config
from .entanglement import PerturbativeRegimeError
from .quadrature import ExtrapolationError, NonConvergenceError
from .sweeps import (plot_data, rows_to_csv, run_oracle_check,
                     run_response_ratio, run_sweep_shift, run_sweep_symmetric, run_verdict,
                     svg_line_chart, write_outputs)

EXIT_OK, EXIT_GATE, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _grid(text: str) -> Grid:
    try:
        return Grid.parse(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value config file")
    common.add_argument("--e", dest="gap", type=float, help="conformal energy gap E")
    common.add_argument("--a", dest="scaling", type=float, help="scaling constant a")
    common.add_argument("--shift", type=float, help="future-window shift x (verdict)")
    common.add_argument("--grid", type=_grid, help="sweep grid START:STOP:STEP")
    common.add_argument("--out", type=Path, help="output directory (default $TIMELIKE_OUT or ./results)")
    common.add_argument("--rel-tol", dest="rel_tol", type=float)
    common.add_argument("--abs-tol", dest="abs_tol", type=float)
    common.add_argument("--eps-ladder", dest="eps_ladder", type=_float_list,
                        help="comma-separated decreasing regulators for the oracle")
    common.add_argument("--widths", type=_float_list, help="window widths for response-ratio")
    common.add_argument("--e-list", dest="oracle_gaps", type=_float_list)
    common.add_argument("--a-list", dest="oracle_scalings", type=_float_list)
    common.add_argument("--jobs", type=int, help="worker processes for sweeps")
    common.add_argument("--svg", action="store_true", default=None, help="also write an SVG chart")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="timelike",
        description="Timelike vacuum entanglement between energy-scaled detectors.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verdict", parents=[common], help="entanglement verdict for one configuration")
    sub.add_parser("sweep-shift", parents=[common], help="shift only the future window")
    sub.add_parser("sweep-symmetric", parents=[common], help="shift both windows together")
    sub.add_parser("oracle-check", parents=[common], help="series vs eps-extrapolated direct I_A")
    sub.add_parser("response-ratio", parents=[common], help="windowed detailed-balance ratio")
    return parser


_OVERRIDE_KEYS = ("gap", "scaling", "shift", "grid", "out", "rel_tol", "abs_tol", "eps_ladder",
                  "widths", "oracle_gaps", "oracle_scalings", "jobs", "svg")


def _print_report(rep, stream):
    for name in ("i_x", "i_a_f", "i_a_p", "i_x_minus_i_a", "negativity_lowest_order",
                 "negativity_exact", "entangled", "error_estimate", "shift_x", "prefactor", "units"):
        print(f"{name}: {getattr(rep, name)}", file=stream)


def _cmd_verdict(cfg, stream):
    rep = run_verdict(cfg)
    _print_report(rep, stream)
    cols = ["shift_x", "i_x", "i_a_f", "i_a_p", "i_x_minus_i_a", "negativity_lowest_order",
            "negativity_exact", "entangled", "error_estimate", "prefactor"]
    vals = [getattr(rep, c) for c in cols]
    text = (f"# {rep.units}\n" + ",".join(cols) + "\n"
            + ",".join("true" if v is True else "false" if v is False else repr(float(v))
                       for v in vals) + "\n")
    write_outputs(cfg.out, {"verdict.csv": text})
    return EXIT_OK


def _cmd_sweep_shift(cfg, stream):
    sw = run_sweep_shift(cfg)
    xs = [r.sweep_value for r in sw.rows]
    ys = [r.i_x_minus_i_a for r in sw.rows]
    files = {"sweep_shift.csv": rows_to_csv(sw.rows),
             "sweep_shift.dat": plot_data(xs, ys, ("x", "I_X-I_A"))}
    if cfg.svg:
        files["sweep_shift.svg"] = svg_line_chart(xs, ys, "I_X - I_A vs future-window shift",
                                                  "x", "I_X - I_A")
    _print_rows(sw.rows, stream)
    write_outputs(cfg.out, files)
    print("# summary", file=stream)
    print(f"# i_a = {sw.rows[0].i_a!r}", file=stream)
    best = max(sw.rows, key=lambda r: r.i_x_minus_i_a)
    print(f"# max I_X - I_A = {best.i_x_minus_i_a!r} at x = {best.sweep_value!r}", file=stream)
    for r, rh, d in zip(sw.crossings, sw.crossings_halved, sw.crossing_shift):
        print(f"# sign change x* = {r:.6f} (halved tolerances {rh:.6f}, |diff| {d:.2e})", file=stream)
    if not sw.crossings:
        print("# no sign change on the grid", file=stream)
    return EXIT_OK


def _cmd_sweep_symmetric(cfg, stream):
    rows = run_sweep_symmetric(cfg)
    xs = [r.sweep_value for r in rows]
    files = {"sweep_symmetric.csv": rows_to_csv(rows),
             "sweep_symmetric.dat": plot_data(xs, [r.volume_ratio for r in rows],
                                              ("x", "volume_ratio"))}
    if cfg.svg:
        files["sweep_symmetric.svg"] = svg_line_chart(
            xs, [r.volume_ratio for r in rows], "Minkowski interaction volume ratio", "x", "ratio")
    _print_rows(rows, stream)
    write_outputs(cfg.out, files)
    return EXIT_OK


def _cmd_oracle_check(cfg, stream):
    rows = run_oracle_check(cfg)
    ok = all(r.passed for r in rows)
    for r in rows:
        print(f"E={r.gap:g} a={r.scaling:g} series={r.series:.10f} oracle={r.oracle:.10f} "
              f"rel_diff={r.rel_diff:.3e} {'PASS' if r.passed else 'FAIL'}", file=stream)
    write_outputs(cfg.out, {"oracle_check.csv": rows_to_csv(rows, "series vs eps-extrapolated oracle")})
    print(f"oracle-check: {'PASS' if ok else 'FAIL'} (gate rel < {cfg.oracle_tol:g})", file=stream)
    return EXIT_OK if ok else EXIT_GATE


def _cmd_response_ratio(cfg, stream):
    rows = run_response_ratio(cfg)
    for r in rows:
        print(f"width={r.width:g} ratio={r.ratio:.8f} limit={r.boltzmann_limit:.8f}", file=stream)
    write_outputs(cfg.out, {"response_ratio.csv": rows_to_csv(rows, "F(E)/F(-E) for centred Gaussian windows")})
    return EXIT_OK


def _print_rows(rows, stream):
    names = [f.name for f in fields(rows[0])]
    print(" ".join(f"{n:>14s}" for n in names), file=stream)
    for r in rows:
        cells = []
        for n in names:
            v = getattr(r, n)
            cells.append(f"{str(v):>14s}" if isinstance(v, bool) else f"{v:14.8g}")
        print(" ".join(cells), file=stream)


_COMMANDS = {
    "verdict": _cmd_verdict,
    "sweep-shift": _cmd_sweep_shift,
    "sweep-symmetric": _cmd_sweep_symmetric,
    "oracle-check": _cmd_oracle_check,
    "response-ratio": _cmd_response_ratio,
}


def main(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {k: getattr(args, k) for k in _OVERRIDE_KEYS}
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"timelike: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](cfg, stream)
    except (NonConvergenceError, FloatingPointError) as exc:
        print(f"timelike: numerical failure in {args.command} (quadrature): {exc}", file=sys.stderr)
    except ExtrapolationError as exc:
        print(f"timelike: numerical failure in {args.command} (eps extrapolation): {exc}",
              file=sys.stderr)
    except PerturbativeRegimeError as exc:
        print(f"timelike: numerical failure in {args.command} (state assembly): {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"timelike: numerical failure in {args.command}: {exc}", file=sys.stderr)
    return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
