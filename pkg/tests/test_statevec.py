from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm
from scipy.stats import unitary_group

from vqeforge.errors import NumericError
from vqeforge.fermion import h2_hamiltonian
from vqeforge.pauli import PauliSum, PauliTerm, to_matrix
from vqeforge.selftest import random_circuit
from vqeforge.statevec import (
    Circuit,
    QuantumState,
    apply,
    basis_state,
    circuit_unitary,
    cnot,
    cz,
    dense_circuit_unitary,
    exact_expectation,
    make_rng,
    pauli_exponential,
    rotation,
    run,
    sample_bitstrings,
    unitary2q,
    zero_state,
)

from .conftest import X, Z, fidelity, random_state


def test_zero_state():
    assert np.array_equal(zero_state(1).amplitudes, [1, 0])
    assert np.array_equal(zero_state(2).amplitudes, [1, 0, 0, 0])
    assert zero_state(3).norm() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        zero_state(0)


def test_basis_state_ordering():
    # qubit 0 is the most significant bit
    assert np.argmax(np.abs(basis_state("10").amplitudes)) == 2


def test_x_pi_pulse():
    state = run(Circuit(1, [rotation("x", np.pi, 0)]))
    assert np.allclose(state.amplitudes, [0, -1j])


def test_cz_phase():
    plus = np.array([1, 1]) / np.sqrt(2)
    state = QuantumState(2, np.kron(plus, plus))
    apply(state, [cz(0, 1)])
    assert np.allclose(state.amplitudes, np.array([1, 1, 1, -1]) / 2)


def test_pauli_exponential_zz_phase():
    theta = 0.37
    state = apply(basis_state("01"), [pauli_exponential(theta, "ZZ")])
    assert np.allclose(state.amplitudes, np.exp(1j * theta) * basis_state("01").amplitudes)
    oracle = expm(-1j * theta * np.kron(Z, Z))
    assert np.allclose(state.amplitudes, oracle @ basis_state("01").amplitudes)


def test_cnot_on_qubit_order():
    state = apply(basis_state("10"), [cnot(0, 1)])
    assert np.allclose(state.amplitudes, basis_state("11").amplitudes)
    state = apply(basis_state("01"), [cnot(0, 1)])
    assert np.allclose(state.amplitudes, basis_state("01").amplitudes)


def test_rotation_matches_matrix_exponential():
    for axis, sigma in (("x", X), ("z", Z)):
        u = circuit_unitary(Circuit(1, [rotation(axis, 0.81, 0)]))
        assert np.allclose(u, expm(-0.5j * 0.81 * sigma))


def test_gate_validation():
    with pytest.raises(ValueError):
        cz(1, 1)
    with pytest.raises(ValueError):
        rotation("w", 0.1, 0)
    with pytest.raises(IndexError):
        Circuit(2, [rotation("x", 0.1, 2)])
    with pytest.raises(ValueError):
        Circuit(3, [pauli_exponential(0.1, "XX")])
    with pytest.raises(ValueError):
        unitary2q(0, 1, np.ones((4, 4)))


def test_layers_have_disjoint_supports():
    c = random_circuit(5, 60, make_rng(3))
    layers = c.layers
    assert sum(len(layer) for layer in layers) == len(c)
    for layer in layers:
        seen = set()
        for g in layer:
            assert seen.isdisjoint(g.qubits)
            seen.update(g.qubits)
    # executing layer by layer reproduces the original gate order on each qubit
    flat = Circuit(5, [g for layer in layers for g in layer])
    assert np.allclose(circuit_unitary(flat), circuit_unitary(c))


def test_inverse_circuit():
    c = random_circuit(3, 30, make_rng(5))
    c.append(unitary2q(2, 0, unitary_group.rvs(4, random_state=2)))
    u = circuit_unitary(c) @ circuit_unitary(c.inverse())
    assert np.allclose(u, np.eye(8))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_matches_dense_oracle(n, seed):
    c = random_circuit(n, 50, make_rng(seed))
    psi = run(c).amplitudes
    assert np.abs(psi - dense_circuit_unitary(c)[:, 0]).max() < 1e-9
    assert abs(np.linalg.norm(psi) - 1) < 1e-10


def test_unitary2q_matches_dense_oracle():
    u = unitary_group.rvs(4, random_state=7)
    for q1, q2 in ((0, 2), (2, 0), (1, 2)):
        c = Circuit(3, [rotation("y", 0.3, 1), unitary2q(q1, q2, u)])
        assert np.allclose(circuit_unitary(c), dense_circuit_unitary(c))


def test_exact_expectation_examples(rng):
    assert exact_expectation(zero_state(2), h2_hamiltonian()) == pytest.approx(-1.0524 + 0.01128 + 0.3979 + 0.3979, abs=1e-4)
    psi = QuantumState(3, random_state(3, rng))
    assert exact_expectation(psi, PauliSum(3, (), offset=1.7)) == pytest.approx(1.7)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        psi = random_state(n, rng)
        terms = tuple(PauliTerm("".join(rng.choice(list("IXYZ"), n)), rng.normal()) for _ in range(6))
        h = PauliSum(n, terms)
        oracle = np.vdot(psi, to_matrix(h) @ psi).real
        assert abs(exact_expectation(QuantumState(n, psi), h) - oracle) < 1e-10


def test_exact_expectation_rejects_non_hermitian():
    state = QuantumState(1, np.array([1, 1j]) / np.sqrt(2))
    with pytest.raises(NumericError):
        exact_expectation(state, PauliSum(1, (PauliTerm("Y", 1j),)))


def test_sampling():
    assert sample_bitstrings(basis_state("11"), 100, seed=1) == {"11": 100}
    bell = QuantumState(2, np.array([1, 0, 0, 1]) / np.sqrt(2))
    counts = sample_bitstrings(bell, 100_000, seed=4)
    assert set(counts) == {"00", "11"}
    sigma = np.sqrt(100_000 * 0.25)
    assert abs(counts["00"] - 50_000) < 5 * sigma
    assert sample_bitstrings(bell, 500, seed=9) == sample_bitstrings(bell, 500, seed=9)
    with pytest.raises(ValueError):
        sample_bitstrings(bell, 0)


def test_fidelity_of_inverse_round_trip(rng):
    c = random_circuit(4, 40, make_rng(11))
    psi = QuantumState(4, random_state(4, rng))
    out = apply(apply(psi.copy(), c), c.inverse())
    assert fidelity(out.amplitudes, psi.amplitudes) > 1 - 1e-12
