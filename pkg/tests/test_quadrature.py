import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import zeta

from timelike.quadrature import (ExtrapolationError, IntegralResult, NonConvergenceError,
                                 QuadratureSettings, epsilon_extrapolate, gauss_legendre,
                                 integrate_1d, integrate_2d, neville_table, sum_series)

TIGHT = QuadratureSettings(rel_tol=1e-12, abs_tol=1e-14)
BOX = ((-6.0, 6.0), (-6.0, 6.0))


def test_gaussian_product():
    r = integrate_2d(lambda x, y: np.exp(-x * x - y * y), BOX, TIGHT)
    assert abs(r.value - math.pi) / math.pi < 1e-10
    assert r.error_estimate >= 0 and r.evaluations > 0


@pytest.mark.parametrize("E", [0.5, 1.0, 2.0])
def test_gaussian_with_phase(E):
    r = integrate_2d(lambda x, y: np.exp(-x * x - y * y - 1j * E * (x - y)), BOX, TIGHT)
    ref = math.pi * math.exp(-E * E / 2)
    assert abs(r.value - ref) / ref < 1e-10


def test_zero_integrand():
    r = integrate_2d(lambda x, y: np.zeros_like(x), BOX)
    assert r.value == 0 and r.error_estimate == 0


def test_one_dimensional_gaussian():
    r = integrate_1d(lambda x: np.exp(-x * x), -7, 7, TIGHT)
    assert r.value == pytest.approx(math.sqrt(math.pi), rel=1e-13)


@given(st.integers(2, 12), st.data())
def test_polynomial_exactness(n, data):
    deg = 2 * n - 1
    cx = data.draw(st.lists(st.floats(-1, 1), min_size=deg + 1, max_size=deg + 1))
    cy = data.draw(st.lists(st.floats(-1, 1), min_size=deg + 1, max_size=deg + 1))
    px, py = np.polynomial.Polynomial(cx), np.polynomial.Polynomial(cy)
    x0, x1, y0, y1 = -0.7, 1.3, -1.1, 0.4
    exact = (px.integ()(x1) - px.integ()(x0)) * (py.integ()(y1) - py.integ()(y0))
    # one Gauss rule per cell is exact, so the parent/child delta is rounding only
    s = QuadratureSettings(rel_tol=1e-10, abs_tol=1e-10, base_order=n)
    r = integrate_2d(lambda x, y: px(x) * py(y), ((x0, x1), (y0, y1)), s)
    scale = (np.abs(cx).sum() + 1) * (np.abs(cy).sum() + 1) * 4
    assert abs(r.value - exact) <= 1e-13 * scale


@pytest.mark.parametrize("n", [2, 5, 15, 30])
def test_gauss_nodes_exact_for_top_degree(n):
    x, w = gauss_legendre(n)
    deg = 2 * n - 2  # even top degree; odd ones vanish trivially
    assert math.fsum(w * x ** deg) == pytest.approx(2 / (deg + 1), rel=1e-13)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_gauss_rule_not_exact_beyond_design_degree(n):
    x, w = gauss_legendre(n)
    assert math.fsum(w * x ** (2 * n)) != pytest.approx(2 / (2 * n + 1), rel=1e-6)


def test_bit_reproducible():
    f = lambda x, y: np.exp(-x * x - 2 * y * y) * np.cos(3 * x * y)
    a = integrate_2d(f, BOX, TIGHT)
    b = integrate_2d(f, BOX, TIGHT)
    assert a == b


def test_error_estimate_never_increases_with_refinement():
    # tighter tolerance = the same deterministic refinement sequence run further
    f = lambda x, y: 1.0 / (1e-2 + x * x + y * y)
    errs = []
    for tol in (1e-3, 1e-5, 1e-7, 1e-9):
        errs.append(integrate_2d(f, ((-1, 1), (-1, 1)),
                                 QuadratureSettings(rel_tol=tol, abs_tol=1e-300)).error_estimate)
    assert all(b <= a for a, b in zip(errs, errs[1:]))


def test_nonconvergence_carries_best_estimate():
    f = lambda x, y: 1.0 / (1e-12 + x * x + y * y)
    s = QuadratureSettings(rel_tol=1e-12, abs_tol=1e-300, max_depth=3)
    with pytest.raises(NonConvergenceError) as exc:
        integrate_2d(f, ((-1, 1), (-1, 1)), s)
    assert isinstance(exc.value.best, IntegralResult)
    assert exc.value.best.value > 0


def test_settings_validation():
    for bad in (dict(rel_tol=0), dict(abs_tol=-1), dict(base_order=1), dict(max_depth=0)):
        with pytest.raises(ValueError):
            QuadratureSettings(**bad)
    h = QuadratureSettings().halved()
    assert h.rel_tol == 5e-9 and h.abs_tol == 5e-13


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

def test_basel():
    r = sum_series(lambda k: 1.0 / k ** 2, lambda K: 1.0 / K, 1e-6)
    assert abs(r.value - math.pi ** 2 / 6) < 1e-6
    assert r.error_estimate < 1e-6


def test_zeta_four():
    r = sum_series(lambda k: 1.0 / k ** 4, lambda K: 1.0 / (3 * K ** 3), 1e-12)
    assert r.value == pytest.approx(math.pi ** 4 / 90, abs=1e-12)


def test_tail_estimate_is_added():
    r = sum_series(lambda k: 1.0 / k ** 2, lambda K: zeta(4, K + 1), 1e-12,
                   tail_estimate=lambda K: zeta(2, K + 1))
    assert r.value == pytest.approx(math.pi ** 2 / 6, abs=1e-12)
    assert r.evaluations < 10_000


def test_alternating_against_long_partial_sum():
    k = np.arange(1, 1_000_001, dtype=float)
    ref = math.fsum((-1.0) ** (k + 1) / k ** 2.5)
    # ref has remainder <= (1e6+1)^-2.5 ~ 1e-15
    r = sum_series(lambda j: (-1) ** (j + 1) / j ** 2.5, lambda K: (K + 1) ** -2.5, 1e-8)
    assert abs(r.value - ref) < 1e-8


def test_series_hard_cap():
    with pytest.raises(NonConvergenceError) as exc:
        sum_series(lambda k: 1.0 / k, lambda K: 1.0, 1e-3, max_terms=50)
    assert exc.value.best.evaluations == 50


def test_series_accumulates_term_errors():
    r = sum_series(lambda k: IntegralResult(2.0 ** -k, 1e-10, 1), lambda K: 2.0 ** -K, 1e-6)
    assert r.error_estimate >= r.evaluations * 1e-10


# ---------------------------------------------------------------------------
# extrapolation
# ---------------------------------------------------------------------------

def test_linear_model_exact():
    r = epsilon_extrapolate(lambda e: 1.0 + e, [0.2, 0.1], order=1)
    assert r.value == pytest.approx(1.0, abs=1e-15)


def test_quadratic_model_in_eps_squared():
    r = epsilon_extrapolate(lambda e: 1.0 + 3 * e * e, [0.1, 0.05, 0.025], power=2)
    assert abs(r.value - 1.0) < 1e-12


@given(st.floats(-5, 5), st.floats(1, 5), st.sampled_from([-1, 1]), st.floats(-1, 1))
def test_polynomial_models_reproduced(c0, c1, sign, c2):
    # asymptotic regime: the eps term dominates eps^2 across the ladder
    c1 *= sign
    r = epsilon_extrapolate(lambda e: c0 + c1 * e + c2 * e * e, [0.4, 0.2, 0.1, 0.05])
    assert r.value == pytest.approx(c0, abs=1e-9 * (1 + abs(c1) + abs(c2)))


def test_pre_asymptotic_ladder_rejected():
    # eps and eps^2 terms cancel on the ladder, so corrections grow
    with pytest.raises(ExtrapolationError):
        epsilon_extrapolate(lambda e: 0.125 * e - e * e, [0.4, 0.2, 0.1, 0.05])


def test_neville_table_shape():
    t = neville_table([0.3, 0.2, 0.1], [1.3, 1.2, 1.1])
    assert [len(r) for r in t] == [1, 2, 3]
    assert t[2][2] == pytest.approx(1.0)


def test_non_monotone_corrections_rejected():
    # converged-looking small-eps values, but a wild first level
    vals = {0.4: 3.0, 0.2: 1.0, 0.1: 1.001, 0.05: 1.0}
    with pytest.raises(ExtrapolationError) as exc:
        epsilon_extrapolate(vals.__getitem__, list(vals))
    assert len(exc.value.table) == 4


@pytest.mark.parametrize("ladder,order", [([0.1], None), ([0.1, 0.2], None), ([0.2, 0.0], None),
                                          ([0.2, 0.1], 2), ([0.2, 0.1], 0)])
def test_ladder_validation(ladder, order):
    with pytest.raises(ValueError):
        epsilon_extrapolate(lambda e: e, ladder, order=order)
