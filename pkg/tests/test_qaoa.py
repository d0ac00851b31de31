from __future__ import annotations

import numpy as np
import pytest

from vqeforge.errors import InputFormatError
from vqeforge.optimize import OptimizerConfig
from vqeforge.pauli import PauliSum, PauliTerm, to_matrix
from vqeforge.qaoa import (
    QaoaSchedule,
    WeightedGraph,
    all_cut_values,
    brute_force_maxcut,
    cut_value,
    encode_maxcut,
    demo_graph,
    format_graph,
    interpolation_schedule,
    parse_graph,
    qaoa_circuit,
    qaoa_grid_scan,
    solve_maxcut_vqe,
    success_probability,
)
from vqeforge.statevec import bitstring, run


def square() -> WeightedGraph:
    return WeightedGraph(4, ((0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)))


def test_graph_validation():
    with pytest.raises(ValueError):
        WeightedGraph(2, ((0, 0, 1),))
    with pytest.raises(ValueError):
        WeightedGraph(2, ((0, 1, 1), (1, 0, 2)))
    with pytest.raises(ValueError):
        WeightedGraph(2, ((0, 1, 0),))
    with pytest.raises(ValueError):
        WeightedGraph(2, ((0, 2, 1),))


def test_single_edge_encoding():
    h, total = encode_maxcut(WeightedGraph(2, ((0, 1, 1.5),)))
    assert h.as_dict() == {"ZZ": 1.5} and total == 1.5
    energies = np.diag(to_matrix(h)).real
    assert set(np.flatnonzero(energies == energies.min())) == {1, 2}
    assert cut_value(WeightedGraph(2, ((0, 1, 1.5),)), "01") == 1.5


def test_cut_from_energy_identity(rng):
    g = WeightedGraph(5, tuple((i, j, float(rng.uniform(0.5, 2))) for i in range(5) for j in range(i + 1, 5) if rng.random() < 0.6))
    h, total = encode_maxcut(g)
    diag = np.diag(to_matrix(h)).real
    cuts = all_cut_values(g)
    assert np.allclose(cuts, (total - diag) / 2)
    for k in range(2**5):
        assert cuts[k] == pytest.approx(cut_value(g, bitstring(k, 5)))


def test_brute_force_examples():
    tri = WeightedGraph(3, ((0, 1, 1), (1, 2, 1), (0, 2, 1)))
    assert brute_force_maxcut(tri)[0] == 2
    value, opt = brute_force_maxcut(square())
    assert value == 4 and opt == {"0101", "1010"}
    value, opt = brute_force_maxcut(WeightedGraph(2))
    assert value == 0 and opt == {"00", "01", "10", "11"}
    assert brute_force_maxcut(WeightedGraph(2, ((0, 1, 2.5),))) == (2.5, {"01", "10"})
    value, opt = brute_force_maxcut(demo_graph())
    assert value == 4 and opt == {"0101", "1010"}


def test_brute_force_matches_ground_eigenspace(rng):
    edges = tuple((i, j, float(rng.uniform(0.2, 3))) for i in range(8) for j in range(i + 1, 8) if rng.random() < 0.4)
    g = WeightedGraph(8, edges)
    h, _ = encode_maxcut(g)
    diag = np.diag(to_matrix(h)).real
    ground = {bitstring(int(k), 8) for k in np.flatnonzero(np.isclose(diag, diag.min()))}
    assert brute_force_maxcut(g)[1] == ground


def test_brute_force_limit():
    with pytest.raises(ValueError):
        brute_force_maxcut(WeightedGraph(25))


def test_qaoa_zero_depth_is_uniform():
    h, _ = encode_maxcut(square())
    probs = run(qaoa_circuit(h, QaoaSchedule((), ()))).probabilities()
    assert np.allclose(probs, 1 / 16)


def test_qaoa_zero_gamma_stays_uniform():
    h, _ = encode_maxcut(square())
    probs = run(qaoa_circuit(h, QaoaSchedule((0.3, 1.1), (0.0, 0.0)))).probabilities()
    assert np.allclose(probs, 1 / 16)


def test_qaoa_rejects_non_diagonal():
    with pytest.raises(ValueError):
        qaoa_circuit(PauliSum(1, (PauliTerm("X", 1.0),)), QaoaSchedule((0.1,), (0.1,)))


def test_qaoa_single_edge_grid_optimum():
    g = WeightedGraph(2, ((0, 1, 1.0),))
    best = max(qaoa_grid_scan(g, points=41), key=lambda p: p.success_probability)
    assert best.success_probability > 0.9


def test_interpolation_schedule():
    s = interpolation_schedule(1)
    assert s.beta == (0.0,) and s.gamma == (1.0,)
    s = interpolation_schedule(2)
    assert s.beta == (0.5, 0.0) and s.gamma == (0.5, 1.0)
    h, _ = encode_maxcut(square())
    _, opt = brute_force_maxcut(square())
    p1 = success_probability(run(qaoa_circuit(h, interpolation_schedule(1))), opt)
    p10 = success_probability(run(qaoa_circuit(h, interpolation_schedule(10))), opt)
    assert p10 > p1


def test_schedule_vector_round_trip():
    s = QaoaSchedule((0.1, 0.2), (0.3, 0.4))
    assert QaoaSchedule.from_vector(s.as_vector()) == s
    with pytest.raises(ValueError):
        QaoaSchedule((0.1,), ())
    with pytest.raises(ValueError):
        QaoaSchedule.from_vector([0.1, 0.2, 0.3])


def test_solve_demo_graph():
    result = solve_maxcut_vqe(demo_graph(), "Y_only", depth=3, config=OptimizerConfig(100))
    assert result.trace.iterations <= 100
    assert result.success_probability > 0.95
    assert set(result.solutions) <= result.optimal


def test_solve_single_edge():
    result = solve_maxcut_vqe(WeightedGraph(2, ((0, 1, 1.0),)), depth=1)
    assert result.success_probability > 0.99


def test_solve_degenerate_optimum_counts_all_solutions():
    # K2 with one edge: both balanced cuts are optimal, the success sums them
    result = solve_maxcut_vqe(WeightedGraph(2, ((0, 1, 1.0),)), depth=1)
    probs = result.probabilities
    assert result.success_probability == pytest.approx(probs["01"] + probs["10"])


def test_solve_with_qaoa_ansatz():
    result = solve_maxcut_vqe(square(), "qaoa", depth=2, optimizer="nelder-mead", config=OptimizerConfig(200))
    assert result.success_probability > 0.5


def test_graph_file_round_trip():
    g = demo_graph()
    assert parse_graph(format_graph(g)) == g
    with pytest.raises(InputFormatError):
        parse_graph("0 1\n")
    with pytest.raises(InputFormatError):
        parse_graph("0 0 1\n")
    with pytest.raises(InputFormatError):
        parse_graph("# nothing\n")
