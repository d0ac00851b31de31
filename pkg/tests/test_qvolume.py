from __future__ import annotations

import networkx as nx
import pytest

from vqeforge.qvolume import (
    DeviceModel,
    achievable_depth,
    count_swaps,
    effective_error_rate,
    estimate_routing_overhead,
    quantum_volume,
    volume_grid,
)


def test_effective_error_rates():
    dev = DeviceModel(200, 1e-4)
    assert effective_error_rate(dev, 2) == 1e-4
    assert effective_error_rate(dev, 150) == 1e-4
    assert effective_error_rate(DeviceModel(20, 1e-4, "linear_chain"), 10) == pytest.approx(1e-3)
    assert effective_error_rate(DeviceModel(100, 1e-4, "planar_grid"), 100) == pytest.approx(1e-3)
    with pytest.raises(ValueError):
        effective_error_rate(dev, 1)
    with pytest.raises(ValueError):
        effective_error_rate(dev, 201)


@pytest.mark.parametrize("kind", ["planar_grid", "linear_chain"])
def test_effective_error_rate_monotone(kind):
    dev = DeviceModel(50, 1e-3, kind, k=1.7)
    rates = [effective_error_rate(dev, n) for n in range(2, 51)]
    assert all(b >= a for a, b in zip(rates, rates[1:]))


def test_worked_examples():
    report = quantum_volume(DeviceModel(1000, 1e-4))
    assert report.row(1000).depth == 10
    assert report.row(100).depth == 100
    assert report.volume == 10_000 and report.n_star == 100
    small = quantum_volume(DeviceModel(100, 1e-4))
    assert small.volume == 10_000 and small.n_star == 100


def test_volume_is_max_of_table():
    report = quantum_volume(DeviceModel(300, 3e-4, "planar_grid"))
    assert all(r.volume <= report.volume for r in report.rows)
    assert report.volume == max(min(r.n, r.depth) ** 2 for r in report.rows)


def test_volume_invariant_beyond_argmax():
    a = quantum_volume(DeviceModel(150, 1e-4))
    b = quantum_volume(DeviceModel(250, 1e-4))
    assert a.volume == b.volume and a.n_star == b.n_star


def test_achievable_depth_floors():
    assert achievable_depth(3, 0.1) == 3
    assert achievable_depth(7, 0.01) == 14


def test_device_validation():
    with pytest.raises(ValueError):
        DeviceModel(10, 0.0)
    with pytest.raises(ValueError):
        DeviceModel(10, 1.0)
    with pytest.raises(ValueError):
        DeviceModel(1, 1e-3)
    with pytest.raises(ValueError):
        DeviceModel(10, 1e-3, "ring")
    with pytest.raises(ValueError):
        DeviceModel(10, 1e-3, "planar_grid", rows=3, cols=3)
    with pytest.raises(ValueError):
        DeviceModel(4, 1e-3, "graph", graph=nx.Graph([(0, 1), (2, 3)]))


def test_routing_complete_graph_needs_no_swaps():
    est = estimate_routing_overhead(nx.complete_graph(7), trials=50)
    assert est.mean_swaps == 0 and est.overhead_factor == 1


def test_routing_path_example():
    assert count_swaps(nx.path_graph(4), [(0, 3), (1, 2)]) >= 1
    assert count_swaps(nx.path_graph(4), [(1, 2)]) == 0


def test_routing_overhead_grows_along_chain():
    factors = [estimate_routing_overhead(nx.path_graph(n), trials=1000, seed=1).overhead_factor for n in (4, 8, 16)]
    assert factors[0] < factors[1] < factors[2]


def test_routing_odd_qubits_and_errors():
    est = estimate_routing_overhead(nx.path_graph(5), trials=100)
    assert est.pairs_per_layer == 2
    with pytest.raises(ValueError):
        estimate_routing_overhead(nx.Graph([(0, 1), (2, 3)]))


def test_explicit_graph_device():
    grid = nx.convert_node_labels_to_integers(nx.grid_2d_graph(4, 4))
    dev = DeviceModel(16, 1e-3, "graph", graph=grid, routing_trials=300)
    rates = [effective_error_rate(dev, n) for n in (2, 16)]
    assert rates[0] == pytest.approx(1e-3)
    assert rates[1] > rates[0]
    report = quantum_volume(dev)
    assert report.volume == max(r.volume for r in report.rows)


def test_volume_grid_matches_scan():
    grid = volume_grid([1e-4, 1e-3], [50, 100, 1000])
    assert grid[0, 1] == 10_000 and grid[0, 2] == 10_000
    assert grid[0, 0] == quantum_volume(DeviceModel(50, 1e-4)).volume
    assert grid[1, 2] == quantum_volume(DeviceModel(1000, 1e-3)).volume
