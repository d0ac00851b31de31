from __future__ import annotations

import numpy as np
import pytest

from vqeforge.errors import NumericError
from vqeforge.optimize import (
    NelderMeadSettings,
    OptimizerConfig,
    SpsaSettings,
    minimize,
    nelder_mead_minimize,
    spsa_minimize,
)


def quadratic(theta):
    return float(np.sum(np.asarray(theta) ** 2))


def test_spsa_quadratic():
    trace = spsa_minimize(quadratic, [1.0, 1.0], OptimizerConfig(max_iterations=200))
    assert trace.best_cost < 1e-2
    assert trace.iterations == 200


def test_spsa_noisy_quadratic():
    best = []
    for seed in range(10):
        noise = np.random.default_rng(100 + seed)
        trace = spsa_minimize(lambda t: quadratic(t) + noise.normal(0, 0.05), [1.0, 1.0], OptimizerConfig(200, seed=seed))
        best.append(quadratic(trace.final_theta))
    assert np.median(best) < 0.1


def test_spsa_two_evaluations_per_iteration():
    trace = spsa_minimize(quadratic, np.ones(7), OptimizerConfig(max_iterations=25))
    assert set(trace.evaluations_per_iteration().values()) == {2}
    assert len(trace.evaluations_per_iteration()) == 25


def test_spsa_calibration_uses_extra_evaluations():
    trace = spsa_minimize(quadratic, [1.0, -1.0], OptimizerConfig(10, spsa=SpsaSettings(a=None)))
    assert sum(e.iteration == -1 for e in trace.evaluations) == 5
    assert set(trace.evaluations_per_iteration().values()) == {2}


def test_spsa_smoothing_averages_last_iterates():
    cfg = OptimizerConfig(50, spsa=SpsaSettings(smoothing_window=10))
    trace = spsa_minimize(quadratic, [0.5, 0.5], cfg)
    assert quadratic(trace.final_theta) < 0.05


def test_spsa_deterministic_per_seed():
    a = spsa_minimize(quadratic, [1.0, 2.0], OptimizerConfig(30, seed=4))
    b = spsa_minimize(quadratic, [1.0, 2.0], OptimizerConfig(30, seed=4))
    assert np.array_equal(a.final_theta, b.final_theta)
    assert a.to_csv() == b.to_csv()


def test_settings_validation():
    with pytest.raises(ValueError):
        SpsaSettings(a=-1)
    with pytest.raises(ValueError):
        SpsaSettings(c=0)
    with pytest.raises(ValueError):
        SpsaSettings(alpha=1.5)
    with pytest.raises(ValueError):
        OptimizerConfig(max_iterations=-1)


def test_nelder_mead_1d():
    trace = nelder_mead_minimize(lambda t: (t[0] - 3) ** 2, [0.0], OptimizerConfig(500))
    assert abs(trace.final_theta[0] - 3) < 1e-4
    assert trace.converged


def test_nelder_mead_rosenbrock():
    def rosen(t):
        return (1 - t[0]) ** 2 + 100 * (t[1] - t[0] ** 2) ** 2

    trace = nelder_mead_minimize(rosen, [-1.2, 1.0], OptimizerConfig(500))
    assert trace.best_cost < 1e-3
    assert trace.iterations <= 500


def test_nelder_mead_constant_function():
    trace = nelder_mead_minimize(lambda t: 1.0, [0.3, -0.2], OptimizerConfig(20, nelder_mead=NelderMeadSettings(tolerance=0)))
    assert trace.iterations == 20
    assert np.array_equal(trace.final_theta, [0.3, -0.2])


def test_cost_return_shapes():
    class Est:
        value, std_error = 2.0, 0.1

    trace = minimize("spsa", lambda t: Est(), [0.0], OptimizerConfig(1))
    assert trace.evaluations[0].std_error == 0.1
    trace = minimize("spsa", lambda t: (1.0, 0.5), [0.0], OptimizerConfig(1))
    assert trace.evaluations[0].cost == 1.0


def test_non_finite_cost_raises():
    with pytest.raises(NumericError):
        minimize("nelder-mead", lambda t: float("nan"), [0.0], OptimizerConfig(5))


def test_unknown_optimizer():
    with pytest.raises(ValueError):
        minimize("bfgs", quadratic, [0.0])


def test_trace_csv():
    trace = spsa_minimize(quadratic, [1.0], OptimizerConfig(3))
    lines = trace.to_csv().splitlines()
    assert lines[0] == "evaluation,iteration,cost,std_error"
    assert len(lines) == 1 + 6
    assert np.all(np.diff(trace.best_so_far()) <= 0)
