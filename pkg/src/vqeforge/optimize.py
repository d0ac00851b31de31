"""Derivative-free optimisers for noisy cost functions.

Cost callables may return a float, a ``(value, std_error)`` pair, or any
object with ``value`` and ``std_error`` attributes (such as
:class:`vqeforge.estimator.EnergyEstimate`).
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError
from .statevec import make_rng

CALIBRATION_PROBES = 2
TARGET_FIRST_STEP = 2 * math.pi / 10


@dataclass(frozen=True)
class SpsaSettings:
    """Gain schedule ``a_k = a / (k + 1 + A)**alpha``, ``c_k = c / (k + 1)**gamma``.

    ``a=None`` calibrates ``a`` from a short gradient-magnitude probe at the
    start point, which overshoots when the start sits near a stationary
    point; the fixed default is safer for small random starts.
    ``A=None`` uses a tenth of the iteration budget.
    """

    a: float | None = 0.6
    c: float = 0.05
    A: float | None = None
    alpha: float = 0.602
    gamma: float = 0.101
    smoothing_window: int = 0

    def __post_init__(self) -> None:
        if self.a is not None and self.a <= 0:
            raise ValueError("SPSA a must be > 0")
        if self.c <= 0:
            raise ValueError("SPSA c must be > 0")
        if not (0 < self.alpha <= 1 and 0 < self.gamma <= 1):
            raise ValueError("SPSA alpha and gamma must lie in (0, 1]")


@dataclass(frozen=True)
class NelderMeadSettings:
    initial_scale: float = 0.1
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    tolerance: float = 1e-8


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 200
    spsa: SpsaSettings = field(default_factory=SpsaSettings)
    nelder_mead: NelderMeadSettings = field(default_factory=NelderMeadSettings)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")


@dataclass(frozen=True)
class Evaluation:
    iteration: int
    theta: np.ndarray
    cost: float
    std_error: float = 0.0


@dataclass
class OptimizationTrace:
    """Every cost evaluation plus the best point seen.

    ``iteration`` is -1 for evaluations made before the main loop (start
    point, calibration probes).
    """

    method: str
    evaluations: list[Evaluation] = field(default_factory=list)
    iterations: int = 0
    final_theta: np.ndarray | None = None
    converged: bool = False

    def record(self, iteration: int, theta: np.ndarray, cost: float, std_error: float) -> None:
        self.evaluations.append(Evaluation(iteration, np.array(theta, dtype=float), cost, std_error))

    @property
    def best(self) -> Evaluation:
        if not self.evaluations:
            raise ValueError("trace is empty")
        return min(self.evaluations, key=lambda e: e.cost)

    @property
    def best_theta(self) -> np.ndarray:
        return self.best.theta

    @property
    def best_cost(self) -> float:
        return self.best.cost

    def best_so_far(self) -> np.ndarray:
        return np.minimum.accumulate([e.cost for e in self.evaluations])

    def evaluations_per_iteration(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.evaluations:
            if e.iteration >= 0:
                out[e.iteration] = out.get(e.iteration, 0) + 1
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["evaluation", "iteration", "cost", "std_error"])
        for k, e in enumerate(self.evaluations):
            writer.writerow([k, e.iteration, repr(e.cost), repr(e.std_error)])
        return buf.getvalue()


def _evaluate(f: Callable, theta: np.ndarray, iteration: int) -> tuple[float, float]:
    out = f(theta)
    if hasattr(out, "value"):
        value, err = out.value, getattr(out, "std_error", 0.0)
    elif isinstance(out, tuple):
        value, err = out
    else:
        value, err = out, 0.0
    value, err = float(value), float(err)
    if not math.isfinite(value):
        raise NumericError(f"cost function returned {value} at iteration {iteration}, theta={theta.tolist()}")
    return value, err


def _calibrate_a(f, theta, settings: SpsaSettings, A: float, rng, trace) -> float:
    value, err = _evaluate(f, theta, -1)
    trace.record(-1, theta, value, err)
    magnitude = 0.0
    for _ in range(CALIBRATION_PROBES):
        delta = rng.choice([-1.0, 1.0], size=theta.size)
        plus = theta + settings.c * delta
        minus = theta - settings.c * delta
        fp, ep = _evaluate(f, plus, -1)
        fm, em = _evaluate(f, minus, -1)
        trace.record(-1, plus, fp, ep)
        trace.record(-1, minus, fm, em)
        magnitude += abs(fp - fm) / (2 * settings.c)
    magnitude /= CALIBRATION_PROBES
    if magnitude < 1e-12:
        return TARGET_FIRST_STEP
    return TARGET_FIRST_STEP * (A + 1) ** settings.alpha / magnitude


def spsa_minimize(f: Callable, theta0: Sequence[float], config: OptimizerConfig | None = None) -> OptimizationTrace:
    """Simultaneous-perturbation stochastic approximation.

    Each iteration evaluates ``f`` exactly twice, at ``theta +/- c_k delta``
    with one Rademacher vector ``delta`` shared by all coordinates.
    """
    config = config or OptimizerConfig()
    s = config.spsa
    theta = np.array(theta0, dtype=float).ravel()
    if theta.size < 1:
        raise ValueError("need at least one parameter")
    rng = make_rng(config.seed)
    trace = OptimizationTrace("spsa")
    A = s.A if s.A is not None else config.max_iterations / 10
    a = s.a if s.a is not None else _calibrate_a(f, theta, s, A, rng, trace)

    history = [theta.copy()]
    for k in range(config.max_iterations):
        ak = a / (k + 1 + A) ** s.alpha
        ck = s.c / (k + 1) ** s.gamma
        delta = rng.choice([-1.0, 1.0], size=theta.size)
        plus = theta + ck * delta
        minus = theta - ck * delta
        fp, ep = _evaluate(f, plus, k)
        fm, em = _evaluate(f, minus, k)
        trace.record(k, plus, fp, ep)
        trace.record(k, minus, fm, em)
        gradient = (fp - fm) / (2 * ck) * delta
        theta = theta - ak * gradient
        history.append(theta.copy())
        trace.iterations = k + 1

    window = s.smoothing_window
    if window > 1:
        trace.final_theta = np.mean(history[-window:], axis=0)
    else:
        trace.final_theta = theta
    return trace


def nelder_mead_minimize(
    f: Callable, theta0: Sequence[float], config: OptimizerConfig | None = None
) -> OptimizationTrace:
    """Downhill simplex with reflection, expansion, contraction and shrink.

    Stops when both the spread of simplex vertices and the spread of their
    costs fall below ``tolerance``, or after ``max_iterations``.
    """
    config = config or OptimizerConfig()
    s = config.nelder_mead
    x0 = np.array(theta0, dtype=float).ravel()
    if x0.size < 1:
        raise ValueError("need at least one parameter")
    trace = OptimizationTrace("nelder-mead")
    dim = x0.size

    def cost(x, it):
        value, err = _evaluate(f, x, it)
        trace.record(it, x, value, err)
        return value

    simplex = [x0.copy()]
    for i in range(dim):
        v = x0.copy()
        v[i] += s.initial_scale
        simplex.append(v)
    values = [cost(v, -1) for v in simplex]

    for it in range(config.max_iterations):
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        spread_x = max(np.max(np.abs(v - simplex[0])) for v in simplex[1:])
        spread_f = values[-1] - values[0]
        if spread_x < s.tolerance and spread_f < s.tolerance:
            trace.converged = True
            break
        trace.iterations = it + 1

        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        xr = centroid + s.reflection * (centroid - worst)
        fr = cost(xr, it)
        if fr < values[0]:
            xe = centroid + s.expansion * (xr - centroid)
            fe = cost(xe, it)
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[-1]:
            xc = centroid + s.contraction * (xr - centroid)
            fc = cost(xc, it)
            accept = fc <= fr
        else:
            xc = centroid + s.contraction * (worst - centroid)
            fc = cost(xc, it)
            accept = fc < values[-1]
        if accept:
            simplex[-1], values[-1] = xc, fc
            continue
        best = simplex[0]
        for i in range(1, len(simplex)):
            simplex[i] = best + s.shrink * (simplex[i] - best)
            values[i] = cost(simplex[i], it)

    order = np.argsort(values, kind="stable")
    trace.final_theta = simplex[order[0]].copy()
    return trace


OPTIMIZERS = {"spsa": spsa_minimize, "nelder-mead": nelder_mead_minimize}


def minimize(
    method: str, f: Callable, theta0: Sequence[float], config: OptimizerConfig | None = None
) -> OptimizationTrace:
    try:
        fn = OPTIMIZERS[method]
    except KeyError:
        raise ValueError(f"unknown optimizer {method!r}; choose from {sorted(OPTIMIZERS)}") from None
    return fn(f, theta0, config)


__all__ = [
    "Evaluation",
    "NelderMeadSettings",
    "OPTIMIZERS",
    "OptimizationTrace",
    "OptimizerConfig",
    "SpsaSettings",
    "minimize",
    "nelder_mead_minimize",
    "spsa_minimize",
]
