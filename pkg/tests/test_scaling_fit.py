from typing import NamedTuple

import numpy as np
import pytest

from lossy_toric.scaling_fit import (InsufficientDataError, ScalingFit, fit_boundary, fit_scaling)


class Row(NamedTuple):
    p_loss: float
    p_com: float
    L: int
    trials: int
    p_fail: float
    stderr: float


def ansatz_rows(p_t, nu, a, b, p_loss=0.0, sizes=(8, 12, 16), span=0.02, n=11, trials=10_000,
                rng=None):
    rows = []
    for L in sizes:
        for p in np.linspace(p_t - span, p_t + span, n):
            y = a + b * (p - p_t) * L ** (1 / nu)
            se = np.sqrt(max(y * (1 - y), 0.0) / trials)
            if rng is not None:
                y = rng.binomial(trials, y) / trials
            rows.append(Row(p_loss, float(p), L, trials, float(y), float(se)))
    return rows


@pytest.mark.parametrize("seed", range(50))
def test_noiseless_recovery(seed):
    rng = np.random.default_rng(seed)
    p_t, nu = rng.uniform(0.03, 0.12), rng.uniform(0.8, 2.5)
    a, b = rng.uniform(0.2, 0.4), rng.uniform(0.5, 2.0)
    span = 0.1 / (b * 16 ** (1 / nu))
    fit = fit_scaling(ansatz_rows(p_t, nu, a, b, span=span), window=None)
    assert fit.converged
    assert abs(fit.p_t - p_t) < 1e-6 and abs(fit.nu0 - nu) < 1e-6
    assert abs(fit.a - a) < 1e-6 and abs(fit.b - b) < 1e-6


def test_spec_noiseless_example():
    fit = fit_scaling(ansatz_rows(0.10, 1.5, 0.1, 1.0, span=0.015), window=None)
    assert max(abs(fit.p_t - 0.10), abs(fit.nu0 - 1.5), abs(fit.a - 0.1), abs(fit.b - 1.0)) < 1e-6


def test_binomial_replicates_recover_parameters():
    rng = np.random.default_rng(0)
    for _ in range(100):
        fit = fit_scaling(ansatz_rows(0.10, 1.5, 0.1, 1.0, span=0.015, trials=10_000, rng=rng))
        assert fit.converged
        assert abs(fit.p_t - 0.10) <= 0.003 and abs(fit.nu0 - 1.5) <= 0.2


def test_window_drops_far_points():
    rows = ansatz_rows(0.1, 1.5, 0.5, 1.0, span=0.05)
    fit = fit_scaling(rows, window=0.15)
    assert fit.n_points < len(rows)
    assert fit.p_t == pytest.approx(0.1, abs=1e-6)


def test_insufficient_data():
    rows = ansatz_rows(0.1, 1.5, 0.3, 2.0, sizes=(8,))
    with pytest.raises(InsufficientDataError):
        fit_scaling(rows)
    with pytest.raises(InsufficientDataError):
        fit_scaling([r for r in ansatz_rows(0.1, 1.5, 0.3, 2.0, n=2)])
    with pytest.raises(InsufficientDataError):
        fit_scaling([])


def test_out_of_range_rates_rejected():
    with pytest.raises(ValueError):
        fit_scaling(ansatz_rows(0.1, 1.5, 0.3, 2.0, span=0.05))


def test_mixed_p_loss_rejected():
    rows = ansatz_rows(0.1, 1.5, 0.3, 2.0) + ansatz_rows(0.1, 1.5, 0.3, 2.0, p_loss=0.1)
    with pytest.raises(ValueError):
        fit_scaling(rows)


def test_non_universal_flag():
    fit = fit_scaling(ansatz_rows(0.02, 1.5, 0.3, 2.0, p_loss=0.45, span=0.005))
    assert fit.non_universal
    assert not fit_scaling(ansatz_rows(0.02, 1.5, 0.3, 2.0, p_loss=0.4, span=0.005)).non_universal


def _fit(p_loss, p_t, converged=True):
    return ScalingFit(p_loss, p_t, 1.5, 0.3, 1.0, 0.0, converged)


def test_boundary_quadratic_exact():
    c = (0.104, -0.1, -0.216)
    fits = [_fit(x, c[0] + c[1] * x + c[2] * x * x) for x in (0, 0.1, 0.2, 0.3, 0.4)]
    curve = fit_boundary(fits)
    assert np.allclose(curve.coefficients, c, atol=1e-12)
    assert curve(curve.intercept) == pytest.approx(0, abs=1e-12)
    assert curve.intercept == pytest.approx(0.5, abs=1e-9)


def test_boundary_three_exact_points():
    c = (0.1, -0.05, -0.2)
    curve = fit_boundary([_fit(x, c[0] + c[1] * x + c[2] * x * x) for x in (0.0, 0.2, 0.4)])
    assert np.allclose(curve.coefficients, c, atol=1e-12)


def test_boundary_ignores_unconverged_and_high_loss():
    fits = [_fit(x, 0.1 - 0.2 * x) for x in (0, 0.1, 0.2)] + [_fit(0.3, 5.0, converged=False),
                                                            _fit(0.45, -3.0)]
    curve = fit_boundary(fits)
    assert curve.intercept == pytest.approx(0.5, abs=1e-9)
    assert len(curve.points) == 3
    with pytest.raises(InsufficientDataError):
        fit_boundary(fits[:2])


def test_as_dict_keys():
    assert set(_fit(0, 0.1).as_dict()) == {"p_loss", "p_t", "nu0", "a", "b", "residual_ss", "converged"}
