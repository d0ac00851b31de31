from __future__ import annotations

import numpy as np
import pytest

from vqeforge.estimator import PRE_ROTATIONS, estimate
from vqeforge.fermion import h2_hamiltonian
from vqeforge.pauli import PauliSum, PauliTerm, to_matrix
from vqeforge.statevec import QuantumState, apply, rotation, zero_state

from .conftest import random_state


def test_exact_mode():
    e = estimate(zero_state(2), h2_hamiltonian())
    # XX vanishes on |00>, the diagonal terms all contribute +1
    assert e.value == pytest.approx(-1.0524 + 0.01128 + 0.3979 + 0.3979, abs=1e-12)
    assert e.std_error == 0 and e.exact


def test_bell_state_zz():
    bell = QuantumState(2, np.array([1, 0, 0, 1]) / np.sqrt(2))
    e = estimate(bell, PauliSum(2, (PauliTerm("ZZ", 1.0),)), shots=100_000, seed=3)
    assert abs(e.value - 1.0) <= 5 * max(e.std_error, 1e-12)
    assert e.shots_used == 100_000 and e.groups == 1


@pytest.mark.parametrize("pauli", ["X", "Y"])
def test_pre_rotation_measures_named_pauli(pauli):
    axis, angle = PRE_ROTATIONS[pauli]
    cols = [apply(QuantumState(1, np.eye(2)[k].astype(complex)), [rotation(axis, angle, 0)]).amplitudes for k in range(2)]
    u = np.column_stack(cols)
    z = np.diag([1, -1])
    assert np.allclose(u.conj().T @ z @ u, to_matrix(PauliSum(1, (PauliTerm(pauli, 1.0),))))


def test_shot_mode_unbiased_on_random_state(rng):
    h = PauliSum(3, tuple(PauliTerm(s, c) for s, c in [("XYZ", 0.4), ("ZZI", -0.7), ("YIY", 0.3), ("IXX", 0.5)]), offset=0.2)
    psi = QuantumState(3, random_state(3, rng))
    exact = estimate(psi, h).value
    values = [estimate(psi, h, shots=2000, seed=s) for s in range(40)]
    mean = np.mean([v.value for v in values])
    err = np.mean([v.std_error for v in values]) / np.sqrt(len(values))
    assert abs(mean - exact) < 5 * err
    # the reported standard error tracks the spread across repetitions
    spread = np.std([v.value for v in values], ddof=1)
    assert 0.6 < spread / np.mean([v.std_error for v in values]) < 1.5


def test_shot_noise_scaling(rng):
    h = h2_hamiltonian()
    psi = QuantumState(2, random_state(2, rng))
    ratios = [
        estimate(psi, h, shots=1000, seed=[s, 1]).std_error / estimate(psi, h, shots=4000, seed=[s, 2]).std_error
        for s in range(50)
    ]
    assert abs(np.median(ratios) - 2.0) < 0.2


def test_seed_determinism():
    psi = QuantumState(2, np.array([0.6, 0.8j, 0, 0]))
    h = h2_hamiltonian()
    assert estimate(psi, h, shots=100, seed=5) == estimate(psi, h, shots=100, seed=5)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        estimate(zero_state(2), h2_hamiltonian(), shots=0)
    with pytest.raises(ValueError):
        estimate(zero_state(3), h2_hamiltonian())
