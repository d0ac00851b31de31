"""MaxCut as an Ising ground-state problem, QAOA circuits and brute-force oracles."""

from __future__ import annotations

import os
from collections.abc import Sequence
from dataclasses import dataclass, field
from math import pi
from pathlib import Path

import numpy as np

from .ansatz import HeuristicAnsatzSpec, heuristic_circuit
from .errors import InputFormatError
from .estimator import estimate
from .optimize import OptimizationTrace, OptimizerConfig, minimize
from .pauli import PauliSum, PauliTerm
from .statevec import Circuit, QuantumState, bitstring, pauli_exponential, rotation, run, sample_bitstrings
from .vqe import initial_parameters

BRUTE_FORCE_LIMIT = 24
OPTIMUM_TOLERANCE = 1e-9

# Four nodes, unit weights: a square 0-1-2-3 with the chord 0-2. The
# alternating cut {0,2} | {1,3} severs four of the five edges.
DEMO_EDGES = ((0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (2, 3, 1.0))


@dataclass(frozen=True)
class WeightedGraph:
    n_nodes: int
    edges: tuple[tuple[int, int, float], ...] = ()

    def __post_init__(self) -> None:
        if self.n_nodes < 1:
            raise ValueError("graph needs at least one node")
        seen = set()
        clean = []
        for i, j, w in self.edges:
            i, j, w = int(i), int(j), float(w)
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if i > j:
                i, j = j, i
            if not 0 <= i < j < self.n_nodes:
                raise ValueError(f"edge ({i}, {j}) out of range for {self.n_nodes} nodes")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            if not w > 0:
                raise ValueError(f"edge ({i}, {j}) has non-positive weight {w}")
            seen.add((i, j))
            clean.append((i, j, w))
        object.__setattr__(self, "edges", tuple(clean))

    @property
    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges)


def demo_graph() -> WeightedGraph:
    return WeightedGraph(4, DEMO_EDGES)


def parse_graph(text: str, source: str | None = None) -> WeightedGraph:
    """Edge-list text, one ``<i> <j> <w>`` per line; node count is the largest index + 1."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputFormatError(f"expected '<i> <j> <w>', got {line!r}", lineno, source)
        try:
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise InputFormatError(f"bad edge {line!r}", lineno, source) from None
        if i < 0 or j < 0:
            raise InputFormatError(f"negative node index in {line!r}", lineno, source)
        edges.append((i, j, w))
    if not edges:
        raise InputFormatError("graph file has no edges", None, source)
    n = max(max(i, j) for i, j, _ in edges) + 1
    try:
        return WeightedGraph(n, tuple(edges))
    except ValueError as exc:
        raise InputFormatError(str(exc), None, source) from None


def read_graph(path: str | os.PathLike) -> WeightedGraph:
    path = Path(path)
    return parse_graph(path.read_text(), source=str(path))


def format_graph(g: WeightedGraph) -> str:
    return "".join(f"{i} {j} {w!r}\n" for i, j, w in g.edges)


def encode_maxcut(g: WeightedGraph) -> tuple[PauliSum, float]:
    """Ising form ``H_C = sum w_ij Z_i Z_j`` and the total weight.

    The cut of a basis state follows as ``(total_weight - <H_C>) / 2``.
    """
    terms = []
    for i, j, w in g.edges:
        ops = ["I"] * g.n_nodes
        ops[i] = ops[j] = "Z"
        terms.append(PauliTerm("".join(ops), w))
    return PauliSum(g.n_nodes, tuple(terms)), g.total_weight


def cut_value(g: WeightedGraph, bits: str | Sequence[int]) -> float:
    x = [int(b) for b in bits]
    return sum(w for i, j, w in g.edges if x[i] != x[j])


def all_cut_values(g: WeightedGraph) -> np.ndarray:
    """Cut value of every assignment, indexed like state-vector amplitudes."""
    n = g.n_nodes
    idx = np.arange(2**n, dtype=np.int64)
    values = np.zeros(2**n)
    for i, j, w in g.edges:
        xi = (idx >> (n - 1 - i)) & 1
        xj = (idx >> (n - 1 - j)) & 1
        values += w * (xi * (1 - xj) + xj * (1 - xi))
    return values


def brute_force_maxcut(g: WeightedGraph) -> tuple[float, set[str]]:
    """Exhaustive maximum cut and every assignment attaining it."""
    if g.n_nodes > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{g.n_nodes} nodes exceeds the brute-force limit of {BRUTE_FORCE_LIMIT}")
    values = all_cut_values(g)
    best = float(values.max())
    winners = np.flatnonzero(values >= best - OPTIMUM_TOLERANCE)
    return best, {bitstring(int(k), g.n_nodes) for k in winners}


@dataclass(frozen=True)
class QaoaSchedule:
    beta: tuple[float, ...]
    gamma: tuple[float, ...]

    def __post_init__(self) -> None:
        beta = tuple(float(b) for b in self.beta)
        gamma = tuple(float(c) for c in self.gamma)
        if len(beta) != len(gamma):
            raise ValueError(f"beta has {len(beta)} entries, gamma {len(gamma)}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)

    @property
    def depth(self) -> int:
        return len(self.beta)

    @classmethod
    def from_vector(cls, params: Sequence[float]) -> QaoaSchedule:
        params = list(params)
        if len(params) % 2:
            raise ValueError("QAOA parameter vector must hold beta and gamma halves")
        d = len(params) // 2
        return cls(tuple(params[:d]), tuple(params[d:]))

    def as_vector(self) -> np.ndarray:
        return np.array(self.beta + self.gamma)


def interpolation_schedule(depth: int) -> QaoaSchedule:
    """Linear ramp ``beta_l = 1 - l/D``, ``gamma_l = l/D`` for ``l = 1 .. D``."""
    if depth < 1:
        raise ValueError("interpolation schedule needs depth >= 1")
    ls = np.arange(1, depth + 1)
    return QaoaSchedule(tuple(1 - ls / depth), tuple(ls / depth))


def qaoa_circuit(h_c: PauliSum, schedule: QaoaSchedule) -> Circuit:
    """Uniform superposition, then per level ``exp(-i gamma H_C)`` and ``exp(-i beta H_M)``.

    ``H_M = -sum X``, so the mixer is ``Rx(-2 beta)`` on every qubit.
    """
    if not h_c.is_diagonal():
        raise ValueError("QAOA cost Hamiltonian must contain only I and Z factors")
    h_c = h_c.real()
    n = h_c.n
    circuit = Circuit(n)
    for q in range(n):
        circuit.append(rotation("y", pi / 2, q))
    for beta, gamma in zip(schedule.beta, schedule.gamma):
        for term in h_c.terms:
            if not term.is_identity():
                circuit.append(pauli_exponential(gamma * term.coeff.real, term.ops))
        for q in range(n):
            circuit.append(rotation("x", -2 * beta, q))
    return circuit


def success_probability(state: QuantumState, optimal: set[str]) -> float:
    probs = state.probabilities()
    return float(sum(probs[int(b, 2)] for b in optimal))


@dataclass
class MaxcutResult:
    trace: OptimizationTrace
    theta: np.ndarray
    state: QuantumState
    energy: float
    success_probability: float
    solutions: list[str]
    counts: dict[str, int]
    max_cut: float
    optimal: set[str] = field(default_factory=set)

    @property
    def probabilities(self) -> dict[str, float]:
        n = self.state.n
        return {bitstring(k, n): float(p) for k, p in enumerate(self.state.probabilities())}


def solve_maxcut_vqe(
    g: WeightedGraph,
    ansatz: HeuristicAnsatzSpec | str = "Y_only",
    depth: int = 3,
    optimizer: str = "spsa",
    config: OptimizerConfig | None = None,
    shots: int | None = None,
    sample_shots: int = 1024,
    entangler: str = "cz_linear_chain",
    theta0=None,
) -> MaxcutResult:
    """Minimise ``<H_C>`` over a heuristic or QAOA trial state and read off the cut.

    ``ansatz`` is a :class:`HeuristicAnsatzSpec`, ``"Y_only"`` (heuristic
    Y rotations with ``entangler``) or ``"qaoa"``. The success probability
    sums the final-state probability of every optimal assignment, so both
    members of each complementary pair count.
    """
    config = config or OptimizerConfig(max_iterations=100)
    h_c, _ = encode_maxcut(g)
    best, optimal = brute_force_maxcut(g)
    seed = config.seed

    if ansatz == "qaoa":
        def build(theta):
            return qaoa_circuit(h_c, QaoaSchedule.from_vector(theta))
        n_params = 2 * depth
        if theta0 is None:
            theta0 = interpolation_schedule(depth).as_vector() if depth >= 1 else np.zeros(0)
    else:
        spec = ansatz if isinstance(ansatz, HeuristicAnsatzSpec) else HeuristicAnsatzSpec(
            g.n_nodes, depth, str(ansatz), entangler
        )
        if spec.n != g.n_nodes:
            raise ValueError(f"ansatz acts on {spec.n} qubits, graph has {g.n_nodes} nodes")

        def build(theta):
            return heuristic_circuit(spec, theta)
        n_params = spec.parameter_count
        if theta0 is None:
            theta0 = initial_parameters(n_params, seed)
    theta0 = np.asarray(theta0, dtype=float)
    if theta0.size != n_params:
        raise ValueError(f"expected {n_params} parameters, got {theta0.size}")

    calls = 0

    def cost(theta):
        nonlocal calls
        calls += 1
        shot_seed = None if shots is None else np.random.SeedSequence([seed, calls])
        return estimate(run(build(theta)), h_c, shots, shot_seed)

    trace = minimize(optimizer, cost, theta0, config)
    theta = trace.final_theta
    if shots is None and estimate(run(build(trace.best_theta)), h_c).value < estimate(run(build(theta)), h_c).value:
        theta = trace.best_theta
    state = run(build(theta))
    counts = sample_bitstrings(state, sample_shots, seed)
    top = max(counts.values())
    solutions = sorted(b for b, c in counts.items() if c == top)
    return MaxcutResult(
        trace=trace,
        theta=np.asarray(theta),
        state=state,
        energy=estimate(state, h_c).value,
        success_probability=success_probability(state, optimal),
        solutions=solutions,
        counts=counts,
        max_cut=best,
        optimal=optimal,
    )


@dataclass(frozen=True)
class ScanPoint:
    beta: float
    gamma: float
    energy: float
    success_probability: float


def qaoa_grid_scan(g: WeightedGraph, points: int = 21, span: float = pi) -> list[ScanPoint]:
    """Level-1 QAOA energies and success probabilities over a ``(beta, gamma)`` grid on ``[0, span]^2``."""
    h_c, _ = encode_maxcut(g)
    _, optimal = brute_force_maxcut(g)
    grid = np.linspace(0.0, span, points)
    out = []
    for beta in grid:
        for gamma in grid:
            state = run(qaoa_circuit(h_c, QaoaSchedule((beta,), (gamma,))))
            out.append(ScanPoint(float(beta), float(gamma), estimate(state, h_c).value, success_probability(state, optimal)))
    return out


__all__ = [
    "DEMO_EDGES",
    "MaxcutResult",
    "QaoaSchedule",
    "ScanPoint",
    "WeightedGraph",
    "all_cut_values",
    "brute_force_maxcut",
    "cut_value",
    "encode_maxcut",
    "demo_graph",
    "format_graph",
    "interpolation_schedule",
    "parse_graph",
    "qaoa_circuit",
    "qaoa_grid_scan",
    "read_graph",
    "solve_maxcut_vqe",
    "success_probability",
]
