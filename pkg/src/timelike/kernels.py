"""Regularised vacuum two-point functions along the conformal trajectories.

The future detector sits at ``t = exp(a*eta)/a`` and the past one at
``t = -exp(a*eta_bar)/a``, both at the spatial origin.  Along these paths
the massless Wightman function is

    FF:  -a^2 exp(-a(eta+eta')) / (16 pi^2 sinh^2(a(eta-eta')/2 - i eps))
    FP:  -a^2 exp(-a(eta+eta_bar)) / (16 pi^2 cosh^2(a(eta-eta_bar)/2 - i eps))

The detector coupling contributes ``exp(a(eta+eta'))``, which cancels the
exponential prefactor, so every windowed integral only needs the *reduced*
kernels ``sinh^-2`` and ``cosh^-2`` of the conformal-time difference.

Units are reduced throughout (hbar = c = k_B = 1, coupling 1);
:func:`temperature_of_scaling` is the only place physical constants enter.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import constants

DEFAULT_REGULATOR = 1e-6

# |Re z| above which 1/sinh^2 and 1/cosh^2 switch to the exp(-2z) form
_OVERFLOW_SWITCH = 20.0


class KernelKind(enum.Enum):
    FUTURE_FUTURE = "FF"
    FUTURE_PAST = "FP"


class Region(enum.Enum):
    F = "F"
    P = "P"


@dataclass(frozen=True)
class DetectorParams:
    """Conformal gap ``gap`` (E), scaling constant ``scaling`` (a), regulator eps.

    ``regulator = 0`` is accepted so the bounded FP kernel can be evaluated
    at the limit; the FF kernel rejects it.
    """

    gap: float = 1.0
    scaling: float = 2.0
    regulator: float = DEFAULT_REGULATOR

    def __post_init__(self):
        if not math.isfinite(self.gap) or self.gap < 0:
            raise ValueError(f"gap must be a finite non-negative number, got {self.gap}")
        if not math.isfinite(self.scaling) or self.scaling <= 0:
            raise ValueError(f"scaling must be positive, got {self.scaling}")
        if not math.isfinite(self.regulator) or self.regulator < 0:
            raise ValueError(f"regulator must be non-negative, got {self.regulator}")

    def with_regulator(self, eps: float) -> "DetectorParams":
        return DetectorParams(self.gap, self.scaling, eps)

    @property
    def prefactor(self) -> float:
        """The dropped common factor a^2 / (16 pi^2)."""
        return self.scaling ** 2 / (16 * math.pi ** 2)


@dataclass(frozen=True)
class KernelSample:
    value: complex
    kind: KernelKind
    regulator: float


def inv_sinh2(z):
    """1/sinh(z)^2 for complex z, overflow-safe for large |Re z|."""
    z = np.asarray(z, dtype=complex)
    zz = np.where(z.real < 0, -z, z)
    big = zz.real > _OVERFLOW_SWITCH
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        direct = 1.0 / np.sinh(np.where(big, 1.0, zz)) ** 2
        q = np.exp(-2.0 * np.where(big, zz, _OVERFLOW_SWITCH))
        tail = 4.0 * q / (1.0 - q) ** 2
    out = np.where(big, tail, direct)
    return out[()] if out.ndim == 0 else out


def inv_cosh2(z):
    """1/cosh(z)^2 for complex z, overflow-safe for large |Re z|."""
    z = np.asarray(z, dtype=complex)
    zz = np.where(z.real < 0, -z, z)
    big = zz.real > _OVERFLOW_SWITCH
    with np.errstate(over="ignore"):
        direct = 1.0 / np.cosh(np.where(big, 0.0, zz)) ** 2
        q = np.exp(-2.0 * np.where(big, zz, _OVERFLOW_SWITCH))
        tail = 4.0 * q / (1.0 + q) ** 2
    out = np.where(big, tail, direct)
    return out[()] if out.ndim == 0 else out


def reduced_kernel_ff(delta, params: DetectorParams, regulator: float | None = None):
    """``sinh^-2(a*delta/2 - i*eps)``; singular at ``delta = 0`` as eps -> 0."""
    eps = params.regulator if regulator is None else regulator
    if not eps > 0:
        raise ValueError("the future-future kernel needs a positive regulator")
    return inv_sinh2(0.5 * params.scaling * np.asarray(delta, dtype=float) - 1j * eps)


def reduced_kernel_fp(delta, params: DetectorParams, regulator: float | None = None):
    """``cosh^-2(a*delta/2 - i*eps)``; bounded by 1 in modulus at eps = 0."""
    eps = params.regulator if regulator is None else regulator
    return inv_cosh2(0.5 * params.scaling * np.asarray(delta, dtype=float) - 1j * eps)


def unreduced_wightman(kind: KernelKind, eta, eta_other, params: DetectorParams):
    """Full two-point function including ``-a^2 exp(-a(eta+eta'))/(16 pi^2)``."""
    eta = np.asarray(eta, dtype=float)
    eta_other = np.asarray(eta_other, dtype=float)
    delta = eta - eta_other
    if kind is KernelKind.FUTURE_FUTURE:
        reduced = reduced_kernel_ff(delta, params)
    else:
        reduced = reduced_kernel_fp(delta, params)
    return -params.prefactor * np.exp(-params.scaling * (eta + eta_other)) * reduced


def wightman_sample(kind: KernelKind, eta: float, eta_other: float,
                    params: DetectorParams) -> KernelSample:
    return KernelSample(complex(unreduced_wightman(kind, eta, eta_other, params)),
                        kind, params.regulator)


def conformal_to_minkowski(eta, params: DetectorParams, region: Region = Region.F):
    t = np.exp(params.scaling * np.asarray(eta, dtype=float)) / params.scaling
    return t if region is Region.F else -t


def minkowski_to_conformal(t, params: DetectorParams):
    """Inverse of :func:`conformal_to_minkowski`; the sign of t selects F or P."""
    t = np.asarray(t, dtype=float)
    if np.any(t == 0):
        raise ValueError("t = 0 is the light-cone vertex and has no conformal time")
    return np.log(params.scaling * np.abs(t)) / params.scaling


def temperature_of_scaling(value: float, direction: str = "to_kelvin") -> float:
    """Convert between the gap-scaling rate and the response temperature.

    The scaling rate is quoted as an ordinary frequency ``a / (2 pi)`` in Hz,
    so ``T = hbar * a / (2 pi k_B) = hbar * f / k_B``.

    direction : ``"to_kelvin"`` (value in Hz) or ``"to_frequency"`` (value in K).
    """
    if not (math.isfinite(value) and value > 0):
        raise ValueError("temperature and scaling rate must be positive")
    if direction == "to_kelvin":
        return constants.hbar * value / constants.k
    if direction == "to_frequency":
        return constants.k * value / constants.hbar
    raise ValueError(f"unknown direction {direction!r}")
