"""Run configuration: a flat ``key = value`` text format plus CLI overrides.

Grammar (one entry per line)::

    # comment                      blank lines and '#' comments are ignored
    gap = 1.0                      any key below, whitespace around '=' optional
    grid = -3:3:0.25               start:stop:step, stop inclusive
    eps_ladder = 0.2, 0.1, 0.05    comma-separated lists

Unknown keys, duplicate keys, lines without '=' and unparsable values are
errors.  Keys:

==================  =======  ==========================================
key                 type     meaning
==================  =======  ==========================================
gap                 float    conformal gap E (alias ``e``)
scaling             float    scaling constant a (alias ``a``)
regulator           float    i-eps regulator for the FF kernel
coupling            float    detector coupling used for the exact state
future_center       float    centre of chi_F
future_width        float    width of chi_F
past_center         float    centre of chi_P
past_width          float    width of chi_P
rel_tol, abs_tol    float    quadrature tolerances
max_depth           int      maximum bisection depth
base_order          int      Gauss-Legendre points per axis
shift               float    future-window shift for ``verdict``
grid                range    sweep grid ``start:stop:step``
widths              list     window widths for ``response-ratio``
eps_ladder          list     regulators for the oracle, decreasing
eps_order           int      extrapolation degree (default: ladder - 1)
oracle_gaps         list     E values for ``oracle-check``
oracle_scalings     list     a values for ``oracle-check``
oracle_tol          float    relative agreement gate for ``oracle-check``
out                 path     output directory
svg                 bool     also write an SVG chart
jobs                int      worker processes for sweeps
==================  =======  ==========================================
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .kernels import DEFAULT_REGULATOR, DetectorParams
from .quadrature import QuadratureSettings
from .response import DEFAULT_EPS_LADDER, ResponseSpec
from .windows import WindowFunction, WindowPair

OUT_ENV = "TIMELIKE_OUT"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError("grid bounds must be finite")
        if not self.step > 0:
            raise ConfigError("grid step must be positive")
        if self.stop < self.start:
            raise ConfigError("grid stop lies below start")

    def points(self) -> list[float]:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9))
        # index-based so values are reproducible, snapped to kill -0.0 and 1e-17 drift
        return [_snap(self.start + i * self.step) for i in range(n + 1)]

    @classmethod
    def parse(cls, text: str) -> "Grid":
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid must be start:stop:step, got {text!r}")
        try:
            return cls(*(float(p) for p in parts))
        except ValueError as exc:
            raise ConfigError(f"bad grid {text!r}: {exc}") from None

    def __str__(self):
        return f"{self.start!r}:{self.stop!r}:{self.step!r}"


def _snap(x: float) -> float:
    r = round(x, 12)
    return 0.0 if r == 0 else r


@dataclass(frozen=True)
class RunConfig:
    params: DetectorParams = DetectorParams()
    windows: WindowPair = WindowPair(WindowFunction(), WindowFunction())
    quadrature: QuadratureSettings = QuadratureSettings()
    shift: float = 0.0
    grid: Grid | None = None
    widths: tuple[float, ...] = (1.0, 2.0, 4.0)
    eps_ladder: tuple[float, ...] = DEFAULT_EPS_LADDER
    eps_order: int | None = None
    oracle_gaps: tuple[float, ...] | None = None
    oracle_scalings: tuple[float, ...] | None = None
    oracle_tol: float = 1e-3
    coupling: float = 1.0
    out: Path = field(default_factory=lambda: Path(os.environ.get(OUT_ENV, "results")))
    svg: bool = False
    jobs: int = 1

    @property
    def spec(self) -> ResponseSpec:
        return ResponseSpec(self.params, self.windows, self.quadrature)


_FLOAT = {"gap", "scaling", "regulator", "coupling", "future_center", "future_width",
          "past_center", "past_width", "rel_tol", "abs_tol", "shift", "oracle_tol"}
_INT = {"max_depth", "base_order", "eps_order", "jobs"}
_LIST = {"widths", "eps_ladder", "oracle_gaps", "oracle_scalings"}
_ALIASES = {"e": "gap", "a": "scaling"}
KEYS = _FLOAT | _INT | _LIST | {"grid", "out", "svg"}


def _parse_value(key: str, text: str):
    try:
        if key in _FLOAT:
            return float(text)
        if key in _INT:
            return int(text)
        if key in _LIST:
            return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"cannot parse {key} = {text!r}") from None
    if key == "grid":
        return Grid.parse(text)
    if key == "svg":
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"svg must be a boolean, got {text!r}")
    if key == "out":
        return Path(text)
    raise ConfigError(f"unknown key {key!r}")


def parse_config_text(text: str) -> dict:
    """Parse the key-value format into a dict of typed values."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key.lower(), key.lower())
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not val:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        values[key] = _parse_value(key, val)
    return values


def build_config(values: dict, base: RunConfig | None = None) -> RunConfig:
    """Apply a dict of typed values on top of ``base`` and validate."""
    cfg = base or RunConfig()
    p, fw, pw, q = cfg.params, cfg.windows.future, cfg.windows.past, cfg.quadrature
    try:
        params = DetectorParams(values.get("gap", p.gap), values.get("scaling", p.scaling),
                                values.get("regulator", p.regulator))
        if params.gap <= 0:
            raise ConfigError("gap must be positive")
        future = WindowFunction(values.get("future_center", fw.center),
                                values.get("future_width", fw.width))
        past = WindowFunction(values.get("past_center", pw.center),
                              values.get("past_width", pw.width))
        quad = QuadratureSettings(values.get("rel_tol", q.rel_tol), values.get("abs_tol", q.abs_tol),
                                  values.get("max_depth", q.max_depth),
                                  values.get("base_order", q.base_order))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    simple = {k: values[k] for k in ("shift", "grid", "widths", "eps_ladder", "eps_order",
                                     "oracle_gaps", "oracle_scalings", "oracle_tol",
                                     "coupling", "out", "svg", "jobs") if k in values}
    cfg = replace(cfg, params=params, windows=WindowPair(future, past), quadrature=quad, **simple)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    lad = cfg.eps_ladder
    if len(lad) < 2 or any(e <= 0 for e in lad) or any(b >= a for a, b in zip(lad, lad[1:])):
        raise ConfigError("eps_ladder must hold at least two positive, strictly decreasing values")
    if cfg.eps_order is not None and not 1 <= cfg.eps_order <= len(lad) - 1:
        raise ConfigError("eps_order must lie in 1 .. len(eps_ladder) - 1")
    if not cfg.widths or any(w <= 0 for w in cfg.widths):
        raise ConfigError("widths must be a non-empty list of positive numbers")
    if cfg.jobs < 1:
        raise ConfigError("jobs must be at least 1")
    if not cfg.oracle_tol > 0:
        raise ConfigError("oracle_tol must be positive")
    if not math.isfinite(cfg.shift):
        raise ConfigError("shift must be finite")
    for name in ("oracle_gaps", "oracle_scalings"):
        vals = getattr(cfg, name)
        if vals is not None and (not vals or any(v <= 0 for v in vals)):
            raise ConfigError(f"{name} must be positive")


def load_config(path: str | os.PathLike | None, overrides: dict | None = None) -> RunConfig:
    values = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        values = parse_config_text(text)
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return build_config(values)
