"""Perturbative two-detector state, its negativity and the entanglement verdict.

Basis order is |00>, |01>, |10>, |11> with the first label the past
detector and the second the future one.  To second order in the coupling
the state has the X-shaped sparsity

    [[N,      0,        0,        rho03],
     [0,      <AF|AF>,  rho12,    0    ],
     [0,      rho12*,   <AP|AP>,  0    ],
     [rho03*, 0,        0,        <X|X>]]

with ``rho03 = -<X|0>`` and ``rho12 = -<A_P|A_F>``.  For a free field Wick's
theorem fixes the fourth-order population,
``<X|X> = |<0|X>|^2 + |<A_P|A_F>|^2 + <A_F|A_F><A_P|A_P>``, which keeps the
state positive and stops the |00>,|11> block of the partial transpose from
producing a spurious negative eigenvalue.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kernels import DetectorParams
from .quadrature import IntegralResult
from .response import (ResponseSpec, compute_i_a_series, compute_i_x_shifted,
                        cross_coherence, fp_integral)

UNITS_NOTE = "reduced units: common prefactor coupling^2 a^2/(16 pi^2) dropped"


class PerturbativeRegimeError(ValueError):
    """Second-order inputs too large: the vacuum population would be negative."""


@dataclass(frozen=True)
class TwoDetectorState:
    diag: tuple[float, float, float, float]
    coherence_x: complex  # <00|rho|11>
    coherence_a: complex  # <01|rho|10>

    def matrix(self) -> np.ndarray:
        n, af, ap, xx = self.diag
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0], rho[1, 1], rho[2, 2], rho[3, 3] = n, af, ap, xx
        rho[0, 3] = self.coherence_x
        rho[3, 0] = self.coherence_x.conjugate()
        rho[1, 2] = self.coherence_a
        rho[2, 1] = self.coherence_a.conjugate()
        return rho

    @property
    def trace(self) -> float:
        return math.fsum(self.diag)


@dataclass(frozen=True)
class NegativityReport:
    i_x: float
    i_a_f: float
    i_a_p: float
    negativity_lowest_order: float
    negativity_exact: float
    entangled: bool
    error_estimate: float = 0.0
    shift_x: float = 0.0
    prefactor: float = 1.0
    units: str = field(default=UNITS_NOTE)

    @property
    def i_x_minus_i_a(self) -> float:
        """I_X minus the geometric mean of the two self-terms."""
        return self.i_x - math.sqrt(self.i_a_f * self.i_a_p)


def assemble_state(x_overlap: complex, a_f: float, a_p: float, cross: complex = 0j) -> TwoDetectorState:
    """Build the state from ``<0|X>``, ``<A_F|A_F>``, ``<A_P|A_P>``, ``<A_P|A_F>``.

    Inputs are the physical second-order amplitudes (prefactor included).
    """
    if a_f < 0 or a_p < 0:
        raise ValueError("excitation norms must be non-negative")
    x_overlap, cross = complex(x_overlap), complex(cross)
    xx = abs(x_overlap) ** 2 + abs(cross) ** 2 + a_f * a_p
    n = 1.0 - math.fsum((xx, a_f, a_p))
    if n < 0:
        raise PerturbativeRegimeError(
            f"vacuum population {n:.3g} < 0; reduce the coupling or the window size")
    return TwoDetectorState((n, float(a_f), float(a_p), xx),
                            -x_overlap.conjugate(), -cross)


def negativity_lowest_order(i_x: float, i_a_f: float, i_a_p: float) -> float:
    if i_x < 0 or i_a_f < 0 or i_a_p < 0:
        raise ValueError("inputs are moduli and must be non-negative")
    return i_x - math.sqrt(i_a_f * i_a_p)


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose on the second (future) qubit."""
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def negativity_eig(state: TwoDetectorState | np.ndarray) -> float:
    """Sum of |negative eigenvalues| of the partial transpose, by a full eigensolve."""
    rho = state.matrix() if isinstance(state, TwoDetectorState) else np.asarray(state)
    ev = np.linalg.eigvalsh(partial_transpose(rho))
    return float(-ev[ev < 0].sum())


def _block_min_eig(p: float, q: float, off: complex) -> float:
    # smaller eigenvalue of [[p, off], [off*, q]], cancellation-free
    mean, half = 0.5 * (p + q), 0.5 * (p - q)
    root = math.hypot(half, abs(off))
    if mean <= 0:
        return mean - root
    return (p * q - abs(off) ** 2) / (mean + root)


def negativity_exact(state: TwoDetectorState) -> float:
    """Negativity from the closed-form eigenvalues of the X-state partial transpose.

    The partial transpose swaps the two coherences between the
    {|00>,|11>} and {|01>,|10>} blocks, so each block is 2x2.
    """
    n, af, ap, xx = state.diag
    lam = (_block_min_eig(n, xx, state.coherence_a), _block_min_eig(af, ap, state.coherence_x))
    return float(-sum(v for v in lam if v < 0))


def verdict(spec: ResponseSpec, shift_x: float = 0.0, coupling: float = 1.0,
            i_a: tuple[IntegralResult, IntegralResult] | None = None) -> NegativityReport:
    """Entanglement report with the future window moved by ``shift_x``.

    ``i_a`` may carry precomputed (future, past) self-terms; they are
    invariant under window translation, so sweeps compute them once.
    """
    shifted = spec.future_shifted(shift_x)
    ix = fp_integral(shifted.windows.future, shifted.windows.past, spec.params, spec.settings)
    if i_a is None:
        ia_f = compute_i_a_series(spec, "future")
        ia_p = ia_f if spec.windows.future.width == spec.windows.past.width \
            else compute_i_a_series(spec, "past")
    else:
        ia_f, ia_p = i_a
    cross = cross_coherence(shifted)

    i_x = abs(ix.value)
    n_lo = negativity_lowest_order(i_x, ia_f.value, ia_p.value)
    p = coupling ** 2 * spec.params.prefactor
    # <0|X> = -p * IXc, <A|A> = p * I_A, <A_P|A_F> = -p * cross
    state = assemble_state(-p * complex(ix.value), p * ia_f.value, p * ia_p.value,
                           -p * complex(cross.value))
    n_ex = negativity_exact(state) / p
    err = ix.error_estimate + 0.5 * (ia_f.error_estimate + ia_p.error_estimate)
    return NegativityReport(i_x, float(ia_f.value), float(ia_p.value), n_lo, n_ex,
                            n_lo > 0, float(err), shift_x, p)
