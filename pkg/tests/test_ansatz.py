from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import expm

from vqeforge.ansatz import (
    ENTANGLERS,
    ROTATION_SCHEMES,
    HeuristicAnsatzSpec,
    UccsdSpec,
    embed_parameters,
    heuristic_circuit,
    uccsd_circuit,
    uccsd_generator,
)
from vqeforge.fermion import fermion_matrix, number_operator
from vqeforge.pauli import to_matrix
from vqeforge.statevec import apply, basis_state, run

from .conftest import fidelity


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("d", range(4))
def test_parameter_counts(n, d):
    assert HeuristicAnsatzSpec(n, d, "ZXZ_full").parameter_count == n * (3 * d + 2)
    assert HeuristicAnsatzSpec(n, d, "YZ").parameter_count == 2 * n * (d + 1)
    assert HeuristicAnsatzSpec(n, d, "Y_only").parameter_count == n * (d + 1)


def test_parameter_count_example():
    assert HeuristicAnsatzSpec(4, 2, "ZXZ_full").parameter_count == 32


def test_identity_at_zero():
    state = run(heuristic_circuit(HeuristicAnsatzSpec(1, 0, "Y_only"), [0.0]))
    assert fidelity(state.amplitudes, [1, 0]) == pytest.approx(1)


def test_yz_entangles(rng):
    spec = HeuristicAnsatzSpec(2, 1, "YZ")
    psi = run(heuristic_circuit(spec, rng.uniform(-np.pi, np.pi, spec.parameter_count))).amplitudes
    assert np.linalg.norm(psi) == pytest.approx(1)
    singular = np.linalg.svd(psi.reshape(2, 2), compute_uv=False)
    assert singular[1] > 1e-3


def test_heuristic_validation():
    with pytest.raises(ValueError):
        HeuristicAnsatzSpec(2, 1, "XYZ")
    with pytest.raises(ValueError):
        HeuristicAnsatzSpec(2, -1)
    with pytest.raises(ValueError):
        heuristic_circuit(HeuristicAnsatzSpec(2, 1), [0.0])


@pytest.mark.parametrize("scheme", ROTATION_SCHEMES)
@pytest.mark.parametrize("entangler", ENTANGLERS)
def test_embedding_into_deeper_ansatz(scheme, entangler, rng):
    spec = HeuristicAnsatzSpec(3, 1, scheme, entangler)
    deeper = HeuristicAnsatzSpec(3, 2, scheme, entangler)
    theta = rng.uniform(-np.pi, np.pi, spec.parameter_count)
    lifted = embed_parameters(spec, theta)
    assert lifted.size == deeper.parameter_count
    a = run(heuristic_circuit(spec, theta)).amplitudes
    b = run(heuristic_circuit(deeper, lifted)).amplitudes
    assert fidelity(a, b) == pytest.approx(1, abs=1e-12)


def test_uccsd_counts():
    spec = UccsdSpec.from_electrons(4, 2)
    assert spec.singles == [(0, 2), (0, 3), (1, 2), (1, 3)]
    assert spec.doubles == [(0, 1, 2, 3)]
    assert spec.parameter_count == 5
    assert spec.reference() == "1100"


def test_uccsd_validation():
    with pytest.raises(ValueError):
        UccsdSpec(4, (0, 1), (1, 2))
    with pytest.raises(ValueError):
        UccsdSpec(2, (0,), (1,), trotter_steps=0)
    with pytest.raises(ValueError):
        uccsd_circuit(UccsdSpec(2, (0,), (1,)), [0.1], reference="11")


def test_uccsd_generator():
    spec = UccsdSpec(2, (0,), (1,))
    assert len(uccsd_generator(spec, [0.0]).products) == 0
    t = 0.4
    g = fermion_matrix(uccsd_generator(spec, [t]))
    # t (a+_1 a_0 - a+_0 a_1): |10> -> t |01>, |01> -> -t |10>
    expected = np.zeros((4, 4))
    expected[1, 2], expected[2, 1] = t, -t
    assert np.allclose(g, expected)
    big = UccsdSpec.from_electrons(4, 2)
    g = fermion_matrix(uccsd_generator(big, np.arange(1, 6) * 0.1))
    assert np.allclose(g, -g.conj().T)


def test_uccsd_zero_angles_give_reference():
    spec = UccsdSpec.from_electrons(4, 2)
    psi = run(uccsd_circuit(spec, np.zeros(5))).amplitudes
    assert fidelity(psi, basis_state("1100").amplitudes) == pytest.approx(1)


@pytest.mark.parametrize("t", [-2.0, -0.3, 0.0, 0.7, 1.9])
def test_uccsd_two_mode_matches_exponential(t):
    spec = UccsdSpec(2, (0,), (1,))
    psi = run(uccsd_circuit(spec, [t])).amplitudes
    exact = expm(fermion_matrix(uccsd_generator(spec, [t]))) @ basis_state("10").amplitudes
    # the reference is prepared with Rx(pi), which adds a global phase
    assert fidelity(psi, exact) > 1 - 1e-10


def test_uccsd_trotter_converges(rng):
    spec = UccsdSpec.from_electrons(4, 2)
    theta = rng.uniform(-0.5, 0.5, 5)
    exact = expm(fermion_matrix(uccsd_generator(spec, theta))) @ basis_state("1100").amplitudes
    infid = []
    for steps in (1, 4, 16):
        s = UccsdSpec.from_electrons(4, 2, trotter_steps=steps)
        infid.append(1 - fidelity(run(uccsd_circuit(s, theta)).amplitudes, exact))
    assert infid[2] < infid[1] < infid[0] or infid[0] < 1e-12
    assert infid[2] < 1e-4


def test_uccsd_conserves_number(rng):
    n_op = to_matrix(number_operator(4))
    for steps in (1, 2, 4):
        spec = UccsdSpec.from_electrons(4, 2, trotter_steps=steps)
        for _ in range(10):
            psi = run(uccsd_circuit(spec, rng.uniform(-np.pi, np.pi, 5))).amplitudes
            assert abs(np.vdot(psi, n_op @ psi).real - 2) < 1e-10


def test_uccsd_custom_reference():
    spec = UccsdSpec(3, (1,), (0, 2))
    psi = apply(basis_state("000"), uccsd_circuit(spec, [0.0, 0.0], reference="010")).amplitudes
    assert fidelity(psi, basis_state("010").amplitudes) == pytest.approx(1)
