"""Quantum volume from qubit count, error rate and connectivity, plus a SWAP-routing estimate."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from .statevec import make_rng

CONNECTIVITIES = ("all_to_all", "planar_grid", "linear_chain", "graph")
DEFAULT_ROUTING_TRIALS = 200
# 1 / (100 * 1e-4) evaluates to 99.999...; absorb that before flooring
_FLOOR_SLACK = 1e-9


@dataclass(frozen=True)
class RoutingEstimate:
    mean_swaps: float
    pairs_per_layer: int
    trials: int

    @property
    def overhead_factor(self) -> float:
        """Two-qubit gates per layer including SWAPs, over gates per layer without."""
        if self.pairs_per_layer == 0:
            return 1.0
        return (self.pairs_per_layer + self.mean_swaps) / self.pairs_per_layer


def _random_matching(nodes: list, rng: np.random.Generator) -> list[tuple]:
    order = rng.permutation(len(nodes))
    return [(nodes[order[i]], nodes[order[i + 1]]) for i in range(0, len(nodes) - 1, 2)]


def count_swaps(graph: nx.Graph, pairs: Sequence[tuple], lengths: dict | None = None) -> int:
    """SWAPs to make every pair adjacent, routing each pair independently along a shortest path."""
    total = 0
    for u, v in pairs:
        d = lengths[u][v] if lengths is not None else nx.shortest_path_length(graph, u, v)
        total += d - 1
    return total


def estimate_routing_overhead(graph: nx.Graph, trials: int = DEFAULT_ROUTING_TRIALS, seed: int = 0) -> RoutingEstimate:
    """Mean SWAP count for a layer of two-qubit gates on a uniformly random pairing of the qubits.

    With an odd qubit count one qubit idles. Pairs are routed independently,
    so the count ignores SWAP sharing and overestimates an optimal router.
    """
    if graph.number_of_nodes() < 2:
        raise ValueError("routing needs at least two qubits")
    if not nx.is_connected(graph):
        raise ValueError("coupling graph is disconnected; some pairs can never interact")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    nodes = sorted(graph.nodes)
    lengths = dict(nx.all_pairs_shortest_path_length(graph))
    rng = make_rng(seed)
    swaps = [count_swaps(graph, _random_matching(nodes, rng), lengths) for _ in range(trials)]
    return RoutingEstimate(float(np.mean(swaps)), len(nodes) // 2, trials)


@dataclass(frozen=True)
class DeviceModel:
    """Hardware summary: ``n_qubits`` physical qubits, two-qubit error ``eps``, coupling layout.

    ``connectivity`` is ``all_to_all``, ``planar_grid`` (optionally with
    ``rows`` and ``cols``), ``linear_chain`` or ``graph`` (needs ``graph``). ``k`` is the
    proportionality constant of the planar and linear scalings.
    """

    n_qubits: int
    eps: float
    connectivity: str = "all_to_all"
    k: float = 1.0
    rows: int | None = None
    cols: int | None = None
    graph: nx.Graph | None = field(default=None, compare=False)
    routing_trials: int = DEFAULT_ROUTING_TRIALS
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_qubits < 2:
            raise ValueError("device needs at least two qubits")
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if self.k <= 0:
            raise ValueError("k must be > 0")
        if self.connectivity not in CONNECTIVITIES:
            raise ValueError(f"unknown connectivity {self.connectivity!r}; choose from {CONNECTIVITIES}")
        if self.rows is not None or self.cols is not None:
            if self.rows is None or self.cols is None or self.rows * self.cols != self.n_qubits:
                raise ValueError("grid shape needs rows * cols == n_qubits")
        if self.connectivity == "graph":
            if self.graph is None or self.graph.number_of_nodes() != self.n_qubits:
                raise ValueError("graph connectivity needs a coupling graph with n_qubits nodes")
            if not nx.is_connected(self.graph):
                raise ValueError("coupling graph is disconnected")

    @cached_property
    def _subset_order(self) -> list:
        start = min(self.graph.nodes)
        return [start] + [v for _, v in nx.bfs_edges(self.graph, start)]

    def subgraph(self, n: int) -> nx.Graph:
        """Connected ``n``-qubit region used for an ``n``-qubit circuit (breadth-first from the lowest node)."""
        return self.graph.subgraph(self._subset_order[:n]).copy()


def effective_error_rate(device: DeviceModel, n: int) -> float:
    if not 2 <= n <= device.n_qubits:
        raise ValueError(f"n must lie in [2, {device.n_qubits}], got {n}")
    c = device.connectivity
    if c == "all_to_all":
        return device.eps
    if c == "planar_grid":
        return device.k * math.sqrt(n) * device.eps
    if c == "linear_chain":
        return device.k * n * device.eps
    est = estimate_routing_overhead(device.subgraph(n), device.routing_trials, device.seed)
    return device.eps * est.overhead_factor


def achievable_depth(n: int, eps_eff: float) -> int:
    return math.floor(1.0 / (n * eps_eff) * (1 + _FLOOR_SLACK))


@dataclass(frozen=True)
class QvRow:
    n: int
    eps_eff: float
    depth: int

    @property
    def volume(self) -> int:
        return min(self.n, self.depth) ** 2


@dataclass(frozen=True)
class QvReport:
    rows: tuple[QvRow, ...]

    @property
    def best(self) -> QvRow:
        # first maximiser, i.e. the smallest n reaching the volume
        return max(self.rows, key=lambda r: (r.volume, -r.n))

    @property
    def volume(self) -> int:
        return self.best.volume

    @property
    def n_star(self) -> int:
        return self.best.n

    def row(self, n: int) -> QvRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)


def quantum_volume(device: DeviceModel) -> QvReport:
    """Scan every subset size ``n = 2 .. N`` and keep the best ``min(n, d(n))**2``."""
    rows = []
    for n in range(2, device.n_qubits + 1):
        e = effective_error_rate(device, n)
        rows.append(QvRow(n, e, achievable_depth(n, e)))
    return QvReport(tuple(rows))


def volume_grid(eps_values: Sequence[float], n_values: Sequence[int]) -> np.ndarray:
    """``V_Q`` for all-to-all devices; rows follow ``eps_values``, columns ``n_values``."""
    out = np.zeros((len(eps_values), len(n_values)), dtype=np.int64)
    for i, e in enumerate(eps_values):
        for j, n in enumerate(n_values):
            # the maximiser of min(n, 1/(n e))**2 sits near 1/sqrt(e), so the scan can stop there
            limit = min(int(n), int(math.ceil(1 / math.sqrt(e))) + 2)
            limit = max(limit, 2)
            out[i, j] = max(min(m, achievable_depth(m, e)) ** 2 for m in range(2, limit + 1))
    return out


__all__ = [
    "CONNECTIVITIES",
    "DeviceModel",
    "QvReport",
    "QvRow",
    "RoutingEstimate",
    "achievable_depth",
    "count_swaps",
    "effective_error_rate",
    "estimate_routing_overhead",
    "quantum_volume",
    "volume_grid",
]
