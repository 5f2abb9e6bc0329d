"""Detector switching windows in conformal time."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .kernels import DetectorParams
from .quadrature import QuadratureSettings, integrate_1d

# exp(-36) ~ 2.3e-16, below double-precision relative accuracy
DEFAULT_TAIL_TOL = math.exp(-36.0)


@dataclass(frozen=True)
class WindowFunction:
    """Gaussian window ``exp(-((eta - center)/width)^2)``."""

    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.width) and self.width > 0):
            raise ValueError(f"window width must be positive, got {self.width}")
        if not math.isfinite(self.center):
            raise ValueError("window center must be finite")

    def __call__(self, eta):
        return evaluate(self, eta)

    def shifted(self, x: float) -> "WindowFunction":
        return replace(self, center=self.center + x)

    def derivative(self, eta, order: int = 1):
        """First or second derivative in eta (used by small-argument series)."""
        u = (np.asarray(eta, dtype=float) - self.center) / self.width
        g = np.exp(-u * u)
        if order == 1:
            return -2.0 * u * g / self.width
        if order == 2:
            return (4.0 * u * u - 2.0) * g / self.width ** 2
        raise ValueError("only first and second derivatives are available")

    def support_interval(self, tail_tol: float = DEFAULT_TAIL_TOL) -> tuple[float, float]:
        return support_interval(self, tail_tol)

    def tilted_interval(self, scaling: float, tail_tol: float = DEFAULT_TAIL_TOL):
        """Interval outside which ``chi(eta) exp(a(eta - c))`` is below tail_tol of its peak."""
        # the tilted Gaussian is the same Gaussian re-centred at c + a w^2 / 2
        lo, hi = support_interval(self, tail_tol)
        offset = 0.5 * scaling * self.width ** 2
        return lo + offset, hi + offset


@dataclass(frozen=True)
class BumpWindow:
    """Compactly supported smooth bump ``exp(1 - 1/(1 - u^2))`` on |u| < 1."""

    center: float = 0.0
    half_width: float = 1.0

    def __call__(self, eta):
        u = (np.asarray(eta, dtype=float) - self.center) / self.half_width
        inside = np.abs(u) < 1
        safe = np.where(inside, u, 0.0)
        return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe * safe)), 0.0)

    def shifted(self, x: float) -> "BumpWindow":
        return replace(self, center=self.center + x)

    def support_interval(self, tail_tol: float = DEFAULT_TAIL_TOL):
        return self.center - self.half_width, self.center + self.half_width

    def tilted_interval(self, scaling: float, tail_tol: float = DEFAULT_TAIL_TOL):
        return self.support_interval()


@dataclass(frozen=True)
class WindowPair:
    future: WindowFunction
    past: WindowFunction

    @property
    def symmetric(self) -> bool:
        return self.future.center == self.past.center and self.future.width == self.past.width

    def shifted(self, x: float) -> "WindowPair":
        """Both windows translated by x in their conformal times."""
        return WindowPair(self.future.shifted(x), self.past.shifted(x))


def evaluate(w: WindowFunction, eta):
    u = (np.asarray(eta, dtype=float) - w.center) / w.width
    return np.exp(-u * u)


def support_interval(w: WindowFunction, tail_tol: float = DEFAULT_TAIL_TOL) -> tuple[float, float]:
    """``[center - r, center + r]`` where the window has fallen to tail_tol."""
    if not 0 < tail_tol < 1:
        raise ValueError("tail_tol must lie strictly between 0 and 1")
    r = w.width * math.sqrt(math.log(1.0 / tail_tol))
    return w.center - r, w.center + r


def minkowski_interaction_volume(w, params: DetectorParams,
                                 settings: QuadratureSettings | None = None) -> float:
    """Minkowski-time measure of a window, ``int chi(eta) exp(a eta) d eta``.

    Along ``t = exp(a eta)/a`` one has ``dt = exp(a eta) d eta``; the same
    value holds for the mirrored past trajectory.
    """
    settings = settings or QuadratureSettings(rel_tol=1e-12, abs_tol=1e-300)
    a = params.scaling
    lo, hi = w.tilted_interval(a)
    c = w.center
    # factor exp(a c) out so the integrand stays O(1)
    res = integrate_1d(lambda eta: w(eta) * np.exp(a * (eta - c)), lo, hi, settings)
    return float(res.value) * math.exp(a * c)
