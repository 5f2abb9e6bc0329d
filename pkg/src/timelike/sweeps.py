"""Parameter sweeps, oracle comparison and their file outputs.

Every runner computes all rows first and only then writes, so a numerical
failure never leaves partial files behind.  Files for one command are
staged in a temporary directory next to the target and moved into place.
"""
from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from scipy.optimize import brentq

from .config import Grid, RunConfig
from .entanglement import UNITS_NOTE, NegativityReport, verdict
from .kernels import DetectorParams
from .response import (ResponseSpec, compute_i_a_oracle, compute_i_a_series,
                       compute_i_x_shifted, detailed_balance_ratio)
from .windows import minkowski_interaction_volume

DEFAULT_SHIFT_GRID = Grid(-3.0, 3.0, 0.25)
DEFAULT_SYMMETRIC_GRID = Grid(0.0, 1.0, 0.5)


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    i_x: float
    i_a: float
    i_x_minus_i_a: float
    negativity_lowest_order: float
    entangled: bool
    error_estimate: float


@dataclass(frozen=True)
class SymmetricRow(SweepRow):
    minkowski_volume: float = math.nan
    volume_ratio: float = math.nan


# ---------------------------------------------------------------------------
# csv helpers
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows, header_note: str = UNITS_NOTE) -> str:
    buf = io.StringIO()
    buf.write(f"# {header_note}\n")
    names = [f.name for f in fields(rows[0])]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for r in rows:
        w.writerow([_fmt(getattr(r, n)) for n in names])
    return buf.getvalue()


def read_rows(path: str | os.PathLike, row_type=SweepRow) -> list:
    """Parse a CSV written by :func:`rows_to_csv` back into row objects."""
    types = {f.name: f.type for f in fields(row_type)}
    out = []
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    for rec in reader:
        kw = {}
        for k, v in rec.items():
            kw[k] = (v == "true") if types[k] in (bool, "bool") else float(v)
        out.append(row_type(**kw))
    return out


def write_outputs(out_dir: Path, files: dict[str, str]) -> list[Path]:
    """Write all files or none."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    staged = tempfile.mkdtemp(prefix=".staging-", dir=out_dir)
    paths = []
    try:
        for name, text in files.items():
            with open(os.path.join(staged, name), "w", newline="") as fh:
                fh.write(text)
        for name in files:
            target = out_dir / name
            os.replace(os.path.join(staged, name), target)
            paths.append(target)
    finally:
        for leftover in os.listdir(staged):
            os.remove(os.path.join(staged, leftover))
        os.rmdir(staged)
    return paths


def plot_data(xs, ys, labels=("x", "y")) -> str:
    lines = [f"# {labels[0]} {labels[1]}"]
    lines += [f"{x!r} {y!r}" for x, y in zip(xs, ys)]
    return "\n".join(lines) + "\n"


def svg_line_chart(xs, ys, title: str = "", xlabel: str = "x", ylabel: str = "y",
                   width: int = 480, height: int = 320) -> str:
    """Minimal standalone SVG polyline chart with a zero line."""
    pad = 48
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(min(ys), 0.0), max(max(ys), 0.0)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'<rect width="100%" height="100%" fill="white"/>\n'
        f'<line x1="{pad}" y1="{py(0):.2f}" x2="{width - pad}" y2="{py(0):.2f}" stroke="#999"/>\n'
        f'<polyline fill="none" stroke="#1f4e9c" stroke-width="2" points="{pts}"/>\n'
        f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>\n'
        f'<text x="{width / 2}" y="{height - 10}" text-anchor="middle" font-size="12">{xlabel}</text>\n'
        f'<text x="14" y="{height / 2}" font-size="12" transform="rotate(-90 14 {height / 2})"'
        f' text-anchor="middle">{ylabel}</text>\n'
        f'<text x="{pad}" y="{height - pad + 16}" font-size="10">{x0:g}</text>\n'
        f'<text x="{width - pad}" y="{height - pad + 16}" font-size="10" text-anchor="end">{x1:g}</text>\n'
        f'<text x="{pad - 4}" y="{py(y1):.2f}" font-size="10" text-anchor="end">{y1:.3g}</text>\n'
        f'<text x="{pad - 4}" y="{py(y0):.2f}" font-size="10" text-anchor="end">{y0:.3g}</text>\n'
        "</svg>\n")


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------

def _row_from_report(rep: NegativityReport, x: float) -> SweepRow:
    i_a = math.sqrt(rep.i_a_f * rep.i_a_p)
    return SweepRow(x, rep.i_x, i_a, rep.i_x - i_a, rep.negativity_lowest_order,
                    rep.entangled, rep.error_estimate)


def _verdict_task(args):
    spec, x, coupling, i_a = args
    return verdict(spec, x, coupling, i_a)


def _map(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _self_terms(spec: ResponseSpec):
    ia_f = compute_i_a_series(spec, "future")
    if spec.windows.future.width == spec.windows.past.width:
        return ia_f, ia_f
    return ia_f, compute_i_a_series(spec, "past")


def run_verdict(cfg: RunConfig) -> NegativityReport:
    return verdict(cfg.spec, cfg.shift, cfg.coupling)


@dataclass
class ShiftSweep:
    rows: list[SweepRow]
    crossings: list[float]
    crossings_halved: list[float]

    @property
    def crossing_shift(self) -> list[float]:
        return [abs(a - b) for a, b in zip(self.crossings, self.crossings_halved)]


def _crossings(spec: ResponseSpec, xs, diffs, i_a: float) -> list[float]:
    roots = []
    for (xa, da), (xb, db) in zip(zip(xs, diffs), zip(xs[1:], diffs[1:])):
        if da == 0:
            roots.append(xa)
        elif da * db < 0:
            roots.append(brentq(lambda x: float(compute_i_x_shifted(spec, x).value) - i_a,
                                xa, xb, xtol=1e-9))
    return roots


def run_sweep_shift(cfg: RunConfig) -> ShiftSweep:
    """Move only the future window; past window stays put."""
    spec = cfg.spec
    grid = cfg.grid or DEFAULT_SHIFT_GRID
    xs = grid.points()
    i_a = _self_terms(spec)
    reports = _map(_verdict_task, [(spec, x, cfg.coupling, i_a) for x in xs], cfg.jobs)
    rows = [_row_from_report(r, x) for r, x in zip(reports, xs)]
    ia_val = rows[0].i_a
    diffs = [r.i_x_minus_i_a for r in rows]
    roots = _crossings(spec, xs, diffs, ia_val)

    # same crossings with every quadrature tolerance halved
    half = ResponseSpec(spec.params, spec.windows, spec.settings.halved())
    ia_half = float(compute_i_a_series(half).value)
    roots_half = [brentq(lambda x: float(compute_i_x_shifted(half, x).value) - ia_half,
                         r - grid.step, r + grid.step, xtol=1e-9) for r in roots]
    return ShiftSweep(rows, roots, roots_half)


def run_sweep_symmetric(cfg: RunConfig) -> list[SymmetricRow]:
    """Move both windows together; also record the Minkowski interaction volume."""
    spec = cfg.spec
    grid = cfg.grid or DEFAULT_SYMMETRIC_GRID
    xs = grid.points()
    shifted = [spec.shifted(x) for x in xs]
    reports = _map(_verdict_task, [(s, 0.0, cfg.coupling, None) for s in shifted], cfg.jobs)
    v_ref = minkowski_interaction_volume(spec.windows.future, spec.params)
    out = []
    for x, s, rep in zip(xs, shifted, reports):
        base = _row_from_report(rep, x)
        vol = minkowski_interaction_volume(s.windows.future, spec.params)
        out.append(SymmetricRow(**asdict(base), minkowski_volume=vol, volume_ratio=vol / v_ref))
    return out


@dataclass(frozen=True)
class OracleRow:
    gap: float
    scaling: float
    series: float
    oracle: float
    rel_diff: float
    oracle_error: float
    passed: bool


def run_oracle_check(cfg: RunConfig) -> list[OracleRow]:
    gaps = cfg.oracle_gaps or (cfg.params.gap,)
    scalings = cfg.oracle_scalings or (cfg.params.scaling,)
    rows = []
    for E in gaps:
        for a in scalings:
            spec = ResponseSpec(DetectorParams(E, a, cfg.params.regulator), cfg.windows, cfg.quadrature)
            s = compute_i_a_series(spec)
            o = compute_i_a_oracle(spec, cfg.eps_ladder, order=cfg.eps_order)
            rel = abs(s.value - o.value) / abs(s.value)
            rows.append(OracleRow(E, a, float(s.value), float(o.value), float(rel),
                                  float(o.error_estimate), bool(rel < cfg.oracle_tol)))
    return rows


@dataclass(frozen=True)
class RatioRow:
    width: float
    ratio: float
    boltzmann_limit: float


def run_response_ratio(cfg: RunConfig) -> list[RatioRow]:
    limit = math.exp(-2 * math.pi * cfg.params.gap / cfg.params.scaling)
    return [RatioRow(w, detailed_balance_ratio(cfg.params, w, cfg.quadrature), limit)
            for w in cfg.widths]

