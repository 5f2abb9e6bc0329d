"""Adaptive Gauss-Legendre quadrature, series summation and eps-extrapolation.

Every integral in the package goes through :func:`integrate_1d` or
:func:`integrate_2d`.  Both use a tensor Gauss-Legendre rule of
``base_order`` points per axis and estimate the local error by comparing a
region's rule value with the sum over its bisected children, so each leaf
of the refinement tree carries a value that is one level finer than the
rule that produced its error estimate.

Leaf values are accumulated with :func:`math.fsum`, which is correctly
rounded and therefore independent of summation order.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

# hard cap on refinement steps per call, independent of max_depth
MAX_SPLITS = 200_000


@dataclass(frozen=True)
class IntegralResult:
    """A quadrature or summation result with an a-posteriori error estimate."""

    value: complex | float
    error_estimate: float
    evaluations: int = 0

    def __post_init__(self):
        # keep plain Python scalars so results compare and print uniformly
        object.__setattr__(self, "error_estimate", float(self.error_estimate))
        object.__setattr__(self, "evaluations", int(self.evaluations))

    def __abs__(self):
        return abs(self.value)


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_depth: int = 20
    base_order: int = 15

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if self.base_order < 2:
            raise ValueError("base_order must be at least 2")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")

    def halved(self) -> "QuadratureSettings":
        return QuadratureSettings(self.rel_tol / 2, self.abs_tol / 2,
                                  self.max_depth, self.base_order)


class NonConvergenceError(RuntimeError):
    """Raised when a tolerance cannot be met; ``best`` holds the last estimate."""

    def __init__(self, message: str, best: IntegralResult | None = None):
        super().__init__(message)
        self.best = best


class ExtrapolationError(RuntimeError):
    """Raised when successive extrapolation corrections fail to shrink."""

    def __init__(self, message: str, table=None):
        super().__init__(message)
        self.table = table


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _fsum(values) -> complex | float:
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))
    return math.fsum(values.tolist())


# ---------------------------------------------------------------------------
# 2-D
# ---------------------------------------------------------------------------

def _children(rect):
    x0, x1, y0, y1 = rect
    xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    return [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]


def _tensor_rule(f, rects, n):
    """Rule values for a batch of rectangles from one vectorised call of f."""
    x, w = gauss_legendre(n)
    r = np.asarray(rects, dtype=float)
    hx = 0.5 * (r[:, 1] - r[:, 0])
    hy = 0.5 * (r[:, 3] - r[:, 2])
    cx = 0.5 * (r[:, 1] + r[:, 0])
    cy = 0.5 * (r[:, 3] + r[:, 2])
    X = cx[:, None, None] + hx[:, None, None] * x[None, :, None]
    Y = cy[:, None, None] + hy[:, None, None] * x[None, None, :]
    X, Y = np.broadcast_arrays(X, Y)
    vals = np.asarray(f(X, Y))
    if vals.shape != X.shape:
        vals = np.broadcast_to(vals, X.shape)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("integrand returned non-finite values")
    W = w[:, None] * w[None, :]
    sums = np.einsum("kij,ij->k", vals, W)
    return sums * hx * hy


def integrate_2d(f: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 domain: Sequence[Sequence[float]],
                 settings: QuadratureSettings | None = None) -> IntegralResult:
    """Integrate ``f(x, y)`` over the rectangle ``domain = ((x0, x1), (y0, y1))``.

    ``f`` must accept broadcastable float arrays and may return real or
    complex values.  Refinement proceeds on the region with the largest
    error estimate until the summed estimate falls below
    ``max(abs_tol, rel_tol * |value|)``.

    Raises
    ------
    NonConvergenceError
        If the worst region is already at ``max_depth`` (or the global split
        cap is hit) while the tolerance is unmet.
    """
    settings = settings or QuadratureSettings()
    (x0, x1), (y0, y1) = domain
    n = settings.base_order
    evals = 0

    def refine(rect, base):
        nonlocal evals
        kids = _children(rect)
        kid_vals = _tensor_rule(f, kids, n)
        evals += 4 * n * n
        refined = _fsum(kid_vals)
        return refined, abs(base - refined), kid_vals

    root = (x0, x1, y0, y1)
    base = _tensor_rule(f, [root], n)[0]
    evals += n * n
    refined, err, kid_vals = refine(root, base)

    # heap entries: (-err, seq, depth, rect, refined, err, child base values)
    seq = 0
    heap = [(-err, seq, 0, root, refined, err, kid_vals)]
    splits = 0

    def totals():
        return _fsum([e[4] for e in heap]), math.fsum(e[5] for e in heap)

    value, total_err = totals()
    while total_err > max(settings.abs_tol, settings.rel_tol * abs(value)):
        if heap[0][2] >= settings.max_depth or splits >= MAX_SPLITS:
            raise NonConvergenceError(
                f"2-D quadrature did not reach tolerance (estimate {total_err:.3e}, "
                f"depth {heap[0][2]})", IntegralResult(value, total_err, evals))
        _, _, depth, rect, pref, perr, kvals = heapq.heappop(heap)
        splits += 1
        new = [refine(kid, kv) for kid, kv in zip(_children(rect), kvals)]
        s = math.fsum(e for _, e, _ in new)
        # children inherit at most the parent's error budget
        scale = perr / s if s > perr else 1.0
        value -= pref
        total_err -= perr
        for kid, (kref, kerr, kkv) in zip(_children(rect), new):
            seq += 1
            e = kerr * scale
            heapq.heappush(heap, (-e, seq, depth + 1, kid, kref, e, kkv))
            value += kref
            total_err += e
        if splits % 512 == 0:
            value, total_err = totals()

    value, total_err = totals()
    return IntegralResult(value, total_err, evals)


# ---------------------------------------------------------------------------
# 1-D
# ---------------------------------------------------------------------------

def _line_rule(f, intervals, n):
    x, w = gauss_legendre(n)
    iv = np.asarray(intervals, dtype=float)
    h = 0.5 * (iv[:, 1] - iv[:, 0])
    c = 0.5 * (iv[:, 1] + iv[:, 0])
    X = c[:, None] + h[:, None] * x[None, :]
    vals = np.asarray(f(X))
    if vals.shape != X.shape:
        vals = np.broadcast_to(vals, X.shape)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("integrand returned non-finite values")
    return (vals @ w) * h


def integrate_1d(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                 settings: QuadratureSettings | None = None) -> IntegralResult:
    """Adaptive bisection counterpart of :func:`integrate_2d` on ``[a, b]``."""
    settings = settings or QuadratureSettings()
    n = settings.base_order
    evals = 0

    def refine(iv, base):
        nonlocal evals
        lo, hi = iv
        mid = 0.5 * (lo + hi)
        kids = [(lo, mid), (mid, hi)]
        kv = _line_rule(f, kids, n)
        evals += 2 * n
        r = _fsum(kv)
        return r, abs(base - r), kv

    base = _line_rule(f, [(a, b)], n)[0]
    evals += n
    r, e, kv = refine((a, b), base)
    heap = [(-e, 0, 0, (a, b), r, e, kv)]
    seq = 0
    value, total = r, e
    while total > max(settings.abs_tol, settings.rel_tol * abs(value)):
        if heap[0][2] >= settings.max_depth:
            raise NonConvergenceError(
                f"1-D quadrature did not reach tolerance (estimate {total:.3e})",
                IntegralResult(value, total, evals))
        _, _, depth, iv, _, perr, kv = heapq.heappop(heap)
        lo, hi = iv
        mid = 0.5 * (lo + hi)
        kids = [(lo, mid), (mid, hi)]
        new = [refine(k, v) for k, v in zip(kids, kv)]
        s = math.fsum(x[1] for x in new)
        scale = perr / s if s > perr else 1.0
        for k, (kr, ke, kkv) in zip(kids, new):
            seq += 1
            heapq.heappush(heap, (-ke * scale, seq, depth + 1, k, kr, ke * scale, kkv))
        value = _fsum([h[4] for h in heap])
        total = math.fsum(h[5] for h in heap)
    return IntegralResult(value, total, evals)


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

def sum_series(term: Callable[[int], complex | float | IntegralResult],
               tail_bound: Callable[[int], float], tol: float,
               tail_estimate: Callable[[int], complex | float] | None = None,
               max_terms: int = 10_000_000) -> IntegralResult:
    """Sum ``term(k)`` for k = 1, 2, ... until ``tail_bound(K) < tol``.

    ``tail_bound(K)`` must bound the remainder after K terms.  When
    ``tail_estimate`` is given its value at the stopping K is added to the
    partial sum, and ``tail_bound`` is then read as a bound on the remainder
    of that corrected sum.  A term may itself be an :class:`IntegralResult`,
    in which case its error estimate is accumulated as well.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    parts: list = []
    quad_err = []
    k = 0
    while True:
        k += 1
        if k > max_terms:
            best = IntegralResult(_fsum(parts) if parts else 0.0,
                                  float(tail_bound(k - 1)), k - 1)
            raise NonConvergenceError(f"series tail above {tol:g} after {max_terms} terms", best)
        t = term(k)
        if isinstance(t, IntegralResult):
            quad_err.append(t.error_estimate)
            t = t.value
        parts.append(t)
        bound = tail_bound(k)
        if bound < tol:
            break
    value = _fsum(parts)
    if tail_estimate is not None:
        value = value + tail_estimate(k)
    return IntegralResult(value, float(bound) + math.fsum(quad_err), k)


# ---------------------------------------------------------------------------
# eps -> 0 extrapolation
# ---------------------------------------------------------------------------

def neville_table(eps: Sequence[float], values: Sequence, power: int = 1) -> list[list]:
    """Neville table of polynomial extrapolants to zero in ``eps**power``.

    ``table[i][j]`` is the degree-j extrapolant built from ladder points
    ``i - j .. i``.
    """
    h = [e ** power for e in eps]
    table = [[values[0]]]
    for i in range(1, len(values)):
        row = [values[i]]
        for j in range(1, i + 1):
            hi, hlo = h[i], h[i - j]
            row.append(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) * hi / (hlo - hi))
        table.append(row)
    return table


def epsilon_extrapolate(g: Callable[[float], complex | float], eps_ladder: Sequence[float],
                        order: int | None = None, power: int = 1,
                        floor: float = 1e-13) -> IntegralResult:
    """Richardson extrapolation of ``g(eps)`` to ``eps = 0``.

    The model is a polynomial of degree ``order`` (default ``len - 1``) in
    ``eps**power``.  The error estimate is the difference between the two
    extrapolants of that degree built from the last two windows of the
    ladder, or the last correction if the ladder has no spare level.

    Raises :class:`ExtrapolationError` when the corrections along the last
    row of the table do not shrink monotonically (ignoring changes below
    ``floor`` times the value scale).
    """
    eps = [float(e) for e in eps_ladder]
    if len(eps) < 2:
        raise ValueError("eps_ladder needs at least two levels")
    if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("eps_ladder must be strictly decreasing and positive")
    order = len(eps) - 1 if order is None else order
    if not 1 <= order <= len(eps) - 1:
        raise ValueError("order must lie in 1 .. len(eps_ladder) - 1")
    values = [g(e) for e in eps]
    values = [v.value if isinstance(v, IntegralResult) else v for v in values]
    table = neville_table(eps, values, power)
    last = table[-1]
    corrections = [abs(last[j] - last[j - 1]) for j in range(1, order + 1)]
    scale = max(abs(v) for v in values)
    for c0, c1 in zip(corrections, corrections[1:]):
        # equal corrections (exact for some models) may differ by rounding
        if c1 > c0 * (1.0 + 1e-9) and c1 > floor * scale:
            raise ExtrapolationError(
                "extrapolation corrections do not decrease: "
                + ", ".join(f"{c:.3e}" for c in corrections), table)
    result = last[order]
    if len(eps) - 1 > order:
        err = abs(result - table[-2][order])
    else:
        err = corrections[-1]
    return IntegralResult(result,
                          float(err), len(eps))
