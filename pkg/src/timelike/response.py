"""Windowed response integrals of the two detectors.

Two double integrals decide the entanglement question, both in reduced
form (the common factor a^2/16pi^2 dropped)::

    I_X = | int int chi_F(eta) chi_P(etab) e^{-iE(eta-etab)} cosh^-2(a(eta-etab)/2) |
    I_A = | int int chi(eta) chi(eta')   e^{-iE(eta-eta')} sinh^-2(a(eta-eta')/2 - i0) |

``I_X`` has a bounded kernel and is integrated directly.  ``I_A`` is split
with the partial-fraction expansion

    1/sinh^2(z) = sum_{k in Z} 1/(z - i pi k)^2,   z = a(eta-eta')/2,

into the coincidence pole (k = 0), which equals ``4/a^2`` times the
regularised response of a fixed-gap inertial detector, and the image poles
at ``a(eta-eta') = +-2 pi i k``, whose contributions are smooth.  The
inertial piece uses the grouped form in which every s-integrand is finite
at s = 0.  An independent check evaluates the regulated integral directly
at several finite eps and extrapolates to eps = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import zeta

from .kernels import DetectorParams, reduced_kernel_ff, reduced_kernel_fp
from .quadrature import (IntegralResult, QuadratureSettings, epsilon_extrapolate,
                         integrate_1d, integrate_2d, sum_series)
from .windows import WindowFunction, WindowPair

TWO_PI = 2.0 * math.pi
DEFAULT_EPS_LADDER = (0.2, 0.1, 0.05, 0.025)

# below this s the grouped inertial integrands switch to their Taylor series
SMALL_S = 1e-6


@dataclass(frozen=True)
class ResponseSpec:
    params: DetectorParams = DetectorParams()
    windows: WindowPair = WindowPair(WindowFunction(), WindowFunction())
    settings: QuadratureSettings = QuadratureSettings()

    def window(self, detector: str) -> WindowFunction:
        if detector == "future":
            return self.windows.future
        if detector == "past":
            return self.windows.past
        raise ValueError(f"detector must be 'future' or 'past', got {detector!r}")

    def shifted(self, x: float) -> "ResponseSpec":
        """Both windows translated by x."""
        return replace(self, windows=self.windows.shifted(x))

    def future_shifted(self, x: float) -> "ResponseSpec":
        return replace(self, windows=WindowPair(self.windows.future.shifted(x), self.windows.past))


@dataclass(frozen=True)
class ResponsePair:
    i_x: float
    i_a: float
    error_estimates: tuple[float, float]


def _modulus(res: IntegralResult) -> IntegralResult:
    return IntegralResult(abs(res.value), res.error_estimate, res.evaluations)


# ---------------------------------------------------------------------------
# future-past term
# ---------------------------------------------------------------------------

def fp_integral(future: WindowFunction, past: WindowFunction, params: DetectorParams,
                settings: QuadratureSettings, regulator: float = 0.0) -> IntegralResult:
    """Signed FP double integral ``int int chi_F chi_P e^{-iE(eta-etab)} cosh^-2(..)``."""
    E = params.gap

    def f(eta, etab):
        d = eta - etab
        return (future(eta) * past(etab) * np.exp(-1j * E * d)
                * reduced_kernel_fp(d, params, regulator))

    return integrate_2d(f, (future.support_interval(), past.support_interval()), settings)


def compute_i_x(spec: ResponseSpec) -> IntegralResult:
    return _modulus(fp_integral(spec.windows.future, spec.windows.past, spec.params, spec.settings))


def compute_i_x_shifted(spec: ResponseSpec, shift_x: float) -> IntegralResult:
    """I_X with only the future window moved by ``shift_x``."""
    return compute_i_x(spec.future_shifted(shift_x))


def cross_coherence(spec: ResponseSpec) -> IntegralResult:
    """Reduced overlap of the two single-excitation states.

    ``<A_P|A_F> = -(a^2/16pi^2) int int chi_F chi_P e^{-iE(eta+etab)} cosh^-2(a(eta-etab)/2)``;
    this returns the double integral.  It depends on the absolute window
    positions, unlike I_X and I_A.
    """
    fw, pw, params = spec.windows.future, spec.windows.past, spec.params
    E = params.gap

    def f(eta, etab):
        return (fw(eta) * pw(etab) * np.exp(-1j * E * (eta + etab))
                * reduced_kernel_fp(eta - etab, params, 0.0))

    return integrate_2d(f, (fw.support_interval(), pw.support_interval()), spec.settings)


# ---------------------------------------------------------------------------
# future-future term: inertial pole
# ---------------------------------------------------------------------------

def satz_integrands(window: WindowFunction, gap: float, s, eta):
    """The two grouped inertial integrands at (s, eta).

    Returns ``(chi(eta) chi(eta-s) (1 - cos(E s))/s^2,
    ((chi(eta) - chi(eta-s))/s)^2)``.  The second one is the symmetrised
    form of ``2 chi(eta)[chi(eta) - chi(eta-s)]/s^2``; both agree after
    integration over eta, but only the squared form is finite pointwise.
    """
    s = np.asarray(s, dtype=float)
    eta = np.asarray(eta, dtype=float)
    small = s < SMALL_S
    ss = np.where(small, 1.0, s)
    E = gap
    osc = np.where(small, 0.5 * E * E - (E ** 4) * s * s / 24.0,
                   2.0 * np.sin(0.5 * E * ss) ** 2 / (ss * ss))
    quot = np.where(small,
                    window.derivative(eta, 1) - 0.5 * s * window.derivative(eta, 2),
                    (window(eta) - window(eta - ss)) / ss)
    return window(eta) * window(eta - s) * osc, quot * quot


def satz_inertial(window: WindowFunction, gap: float,
                  settings: QuadratureSettings | None = None) -> IntegralResult:
    """Regularised windowed response of an inertial fixed-gap detector.

    With ``G(s) = int chi(eta) chi(eta - s) d eta`` this is the limit of
    ``int int chi chi e^{-iE(eta-eta')} (eta - eta' - i eps)^-2`` and equals

        pi E G(0) - 2 int_0^inf G_E(s) ds - 2 int_0^inf (G(0) - G(s))/s^2 ds,

    where ``G_E(s) = int chi(eta) chi(eta-s) (1 - cos Es)/s^2 d eta``.
    ``gap`` may be negative (de-excitation).
    """
    settings = settings or QuadratureSettings()
    lo, hi = window.support_interval()
    span = hi - lo  # G(s) is negligible beyond this lag

    g0 = integrate_1d(lambda eta: window(eta) ** 2, lo, hi, settings)
    first = math.pi * gap * g0.value

    osc = integrate_2d(lambda s, eta: satz_integrands(window, gap, s, eta)[0],
                       ((0.0, span), (lo, hi)), settings)
    sq = integrate_2d(lambda s, eta: satz_integrands(window, gap, s, eta)[1],
                      ((0.0, span), (lo, hi + span)), settings)
    # int_span^inf G(0)/s^2 ds, with G(s) ~ 0 there
    far = 2.0 * g0.value / span
    value = first - 2.0 * osc.value - sq.value - far
    err = (math.pi * abs(gap) + 2.0 / span) * g0.error_estimate + 2.0 * osc.error_estimate + sq.error_estimate
    return IntegralResult(float(value), float(err), g0.evaluations + osc.evaluations + sq.evaluations)


# ---------------------------------------------------------------------------
# future-future term: image poles
# ---------------------------------------------------------------------------

def image_kernel(k: int, x):
    """Sum of the k and -k image terms, ``4/(x - 2 pi i k)^2 + 4/(x + 2 pi i k)^2``, with x = a*delta."""
    c2 = (TWO_PI * k) ** 2
    x2 = np.asarray(x, dtype=float) ** 2
    return 8.0 * (x2 - c2) / (x2 + c2) ** 2


def image_sum(window: WindowFunction, gap: float, scaling: float,
              settings: QuadratureSettings | None = None) -> IntegralResult:
    """Sum over k >= 1 of the image-pole double integrals.

    Each term is a 2-D quadrature.  For large k the paired kernel expands as
    ``8/(c k)^2 * (-1 + 3y - 5y^2 ...)`` with ``y = (a delta)^2/(c k)^2`` and
    ``c = 2 pi``; the first two orders are summed analytically with Hurwitz
    zeta functions and ``|f(y) + 1 - 3y| <= 5 y^2`` bounds the rest, so the
    series stops once ``40 M4 zeta(6, K+1) / c^6`` is below tolerance.
    """
    settings = settings or QuadratureSettings()
    E, a = gap, scaling
    dom = (window.support_interval(), window.support_interval())

    def moment(power, phase=True):
        def f(eta, etap):
            d = eta - etap
            v = window(eta) * window(etap) * (a * d) ** power
            return v * np.exp(-1j * E * d) if phase else v
        return integrate_2d(f, dom, settings)

    m0, m2, m4 = moment(0), moment(2), moment(4, phase=False)
    c = TWO_PI
    m4_bound = abs(m4.value) + m4.error_estimate

    def term(k):
        def f(eta, etap):
            d = eta - etap
            return window(eta) * window(etap) * np.exp(-1j * E * d) * image_kernel(k, a * d)
        return integrate_2d(f, dom, settings)

    def tail_estimate(K):
        return (-8.0 * m0.value * zeta(2, K + 1) / c ** 2
                + 24.0 * m2.value * zeta(4, K + 1) / c ** 4)

    def tail_bound(K):
        return 40.0 * m4_bound * zeta(6, K + 1) / c ** 6

    scale = abs(m0.value) * 8.0 * zeta(2, 1) / c ** 2
    tol = max(settings.abs_tol, settings.rel_tol * scale)
    res = sum_series(term, tail_bound, tol, tail_estimate=tail_estimate, max_terms=10_000)
    moment_err = 8.0 * zeta(2, res.evaluations + 1) / c ** 2 * m0.error_estimate
    return IntegralResult(res.value, res.error_estimate + moment_err, res.evaluations)


def ff_integral_series(window: WindowFunction, gap: float, scaling: float,
                       settings: QuadratureSettings | None = None) -> IntegralResult:
    """Signed FF double integral from the inertial pole plus the image series."""
    settings = settings or QuadratureSettings()
    inertial = satz_inertial(window, gap, settings)
    images = image_sum(window, gap, scaling, settings)
    factor = 4.0 / scaling ** 2
    value = complex(factor * inertial.value + images.value)
    err = factor * inertial.error_estimate + images.error_estimate
    # the integrand is conjugate-symmetric under eta <-> eta', so the
    # integral is real; a larger imaginary part signals a quadrature fault
    if abs(value.imag) > err + 1e-12 * abs(value):
        raise FloatingPointError(f"FF self-term has imaginary part {value.imag:.3e}")
    return IntegralResult(value.real, float(err), inertial.evaluations + images.evaluations)


def compute_i_a_series(spec: ResponseSpec, detector: str = "future") -> IntegralResult:
    p = spec.params
    return _modulus(ff_integral_series(spec.window(detector), p.gap, p.scaling, spec.settings))


# ---------------------------------------------------------------------------
# independent check: direct quadrature at finite eps, extrapolated to 0
# ---------------------------------------------------------------------------

def ff_integral_direct(window: WindowFunction, params: DetectorParams, regulator: float,
                       settings: QuadratureSettings | None = None) -> IntegralResult:
    """The FF double integral at finite regulator by plain 2-D quadrature.

    Integrated in difference/mean coordinates ``(delta, sigma)`` (unit
    Jacobian) so that the near-singular ridge at ``delta = 0`` is aligned
    with the bisection grid.
    """
    settings = settings or QuadratureSettings()
    E = params.gap
    lo, hi = window.support_interval()
    r = 0.5 * (hi - lo)

    def f(delta, sigma):
        return (window(sigma + 0.5 * delta) * window(sigma - 0.5 * delta)
                * np.exp(-1j * E * delta) * reduced_kernel_ff(delta, params, regulator))

    return integrate_2d(f, ((-2.0 * r, 2.0 * r), (lo, hi)), settings)


def compute_i_a_oracle(spec: ResponseSpec, eps_ladder: Sequence[float] = DEFAULT_EPS_LADDER,
                       detector: str = "future", order: int | None = None) -> IntegralResult:
    """``lim_{eps->0}`` of the direct FF integral, by Richardson extrapolation in eps."""
    window = spec.window(detector)
    quad_err = []

    def g(eps):
        res = ff_integral_direct(window, spec.params, eps, spec.settings)
        quad_err.append(res.error_estimate)
        return res.value

    ext = epsilon_extrapolate(g, eps_ladder, order=order)
    # Neville weights amplify per-level quadrature noise by at most their 1-norm
    amp = _neville_weight_norm(eps_ladder, order)
    return IntegralResult(abs(ext.value), ext.error_estimate + amp * max(quad_err),
                          ext.evaluations)


def _neville_weight_norm(eps: Sequence[float], order: int | None) -> float:
    eps = list(eps)
    order = len(eps) - 1 if order is None else order
    pts = eps[-(order + 1):]
    total = 0.0
    for i, ei in enumerate(pts):
        w = 1.0
        for j, ej in enumerate(pts):
            if j != i:
                w *= ej / (ej - ei)
        total += abs(w)
    return total


# ---------------------------------------------------------------------------
# studies built on the integrals
# ---------------------------------------------------------------------------

def response_pair(spec: ResponseSpec) -> ResponsePair:
    ix = compute_i_x(spec)
    ia = compute_i_a_series(spec)
    return ResponsePair(float(ix.value), float(ia.value), (ix.error_estimate, ia.error_estimate))


def crossing_point(spec: ResponseSpec, bracket: tuple[float, float] = (0.0, 3.0),
                   xtol: float = 1e-7, i_a: float | None = None) -> float:
    """Future-window shift at which I_X(x) drops to I_A, found by bracketing root search."""
    if i_a is None:
        i_a = float(compute_i_a_series(spec).value)

    def gap_fn(x):
        return float(compute_i_x_shifted(spec, x).value) - i_a

    return brentq(gap_fn, *bracket, xtol=xtol)


def detailed_balance_ratio(params: DetectorParams, width: float,
                           settings: QuadratureSettings | None = None) -> float:
    """Windowed excitation/de-excitation ratio ``F(E)/F(-E)`` for a centred window.

    For a long window this approaches the Boltzmann factor ``exp(-2 pi E/a)``.
    """
    settings = settings or QuadratureSettings()
    w = WindowFunction(0.0, width)
    up = ff_integral_series(w, params.gap, params.scaling, settings)
    down = ff_integral_series(w, -params.gap, params.scaling, settings)
    return abs(up.value) / abs(down.value)
