"""Timelike vacuum entanglement between a past and a future detector."""
from .kernels import (DetectorParams, KernelKind, Region, conformal_to_minkowski,
                      minkowski_to_conformal, reduced_kernel_ff, reduced_kernel_fp,
                      temperature_of_scaling, unreduced_wightman)
from .windows import WindowFunction, WindowPair, minkowski_interaction_volume, support_interval
from .quadrature import (IntegralResult, QuadratureSettings, epsilon_extrapolate, integrate_1d,
                         integrate_2d, sum_series)
from .response import (ResponseSpec, compute_i_a_oracle, compute_i_a_series, compute_i_x,
                       compute_i_x_shifted, crossing_point, detailed_balance_ratio, satz_inertial)
from .entanglement import (NegativityReport, TwoDetectorState, assemble_state,
                           negativity_exact, negativity_lowest_order, verdict)

__version__ = "0.1.0"
