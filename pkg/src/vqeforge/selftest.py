"""Quick oracle-equivalence checks runnable from the command line."""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .ansatz import HeuristicAnsatzSpec, UccsdSpec, heuristic_circuit, uccsd_circuit
from .fermion import FermionOperator, anticommutator, annihilate, create, fermion_matrix, jordan_wigner, number_operator
from .noise import HamiltonianSchedule, NoiseModel, Segment, density_matrix, expectation, lindblad_evolve, rescaled_expectation, richardson_weights
from .pauli import PAULI_CHARS, PauliSum, PauliTerm, to_matrix
from .qvolume import DeviceModel, quantum_volume
from .statevec import Circuit, apply, cnot, cz, dense_circuit_unitary, make_rng, pauli_exponential, rotation, zero_state


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def random_circuit(n: int, n_gates: int, rng: np.random.Generator) -> Circuit:
    circuit = Circuit(n)
    for _ in range(n_gates):
        kind = rng.integers(4) if n > 1 else 0
        if kind == 0:
            circuit.append(rotation("xyz"[rng.integers(3)], rng.uniform(-np.pi, np.pi), int(rng.integers(n))))
        elif kind == 1:
            a, b = rng.choice(n, 2, replace=False)
            circuit.append(cz(int(a), int(b)))
        elif kind == 2:
            a, b = rng.choice(n, 2, replace=False)
            circuit.append(cnot(int(a), int(b)))
        else:
            ops = "".join(rng.choice(list(PAULI_CHARS), n))
            circuit.append(pauli_exponential(rng.uniform(-np.pi, np.pi), ops))
    return circuit


def random_hermitian_fermion(
    n_modes: int, n_products: int, rng: np.random.Generator, number_conserving: bool = True
) -> FermionOperator:
    """Random ``A + A^dag`` built from products of up to four ladder operators.

    With ``number_conserving`` every product has as many creators as
    annihilators, in shuffled order.
    """
    op = FermionOperator.zero(n_modes)
    for _ in range(n_products):
        if number_conserving:
            half = int(rng.integers(1, 3))
            kinds = [True] * half + [False] * half
            rng.shuffle(kinds)
        else:
            kinds = [bool(k) for k in rng.integers(2, size=int(rng.integers(1, 5)))]
        factors = tuple((int(rng.integers(n_modes)), k) for k in kinds)
        coeff = complex(rng.normal(), rng.normal())
        op = op + FermionOperator.term(n_modes, factors, coeff)
    return op + op.adjoint()


def check_simulator(cases: int = 100, seed: int = 0) -> str:
    rng = make_rng(seed)
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(1, 6))
        circuit = random_circuit(n, 50, rng)
        psi = apply(zero_state(n), circuit).amplitudes
        worst = max(worst, float(np.abs(psi - dense_circuit_unitary(circuit)[:, 0]).max()))
    assert worst < 1e-9, f"max amplitude deviation {worst:.2e}"
    return f"{cases} circuits, max deviation {worst:.1e}"


def check_jordan_wigner(max_modes: int = 4, seed: int = 0) -> str:
    rng = make_rng(seed)
    worst = 0.0
    for n in range(1, max_modes + 1):
        for i in range(n):
            for j in range(n):
                ac = to_matrix(jordan_wigner(anticommutator(annihilate(i, n), create(j, n))))
                worst = max(worst, float(np.abs(ac - (i == j) * np.eye(2**n)).max()))
        op = random_hermitian_fermion(n, 6, rng, number_conserving=False)
        worst = max(worst, float(np.abs(to_matrix(jordan_wigner(op)) - fermion_matrix(op)).max()))
    assert worst < 1e-10, f"max deviation {worst:.2e}"
    return f"modes 1..{max_modes}, max deviation {worst:.1e}"


def check_uccsd_number(draws: int = 20, seed: int = 0) -> str:
    rng = make_rng(seed)
    n_op = to_matrix(number_operator(4))
    worst = 0.0
    for steps in (1, 2):
        spec = UccsdSpec.from_electrons(4, 2, trotter_steps=steps)
        for _ in range(draws):
            psi = apply(zero_state(4), uccsd_circuit(spec, rng.uniform(-np.pi, np.pi, spec.parameter_count))).amplitudes
            worst = max(worst, abs(float(np.real(psi.conj() @ n_op @ psi)) - 2))
    assert worst < 1e-10, f"max |<N> - 2| {worst:.2e}"
    return f"max |<N> - 2| {worst:.1e}"


def check_rescaling(seed: int = 0) -> str:
    rng = make_rng(seed)
    terms = tuple(PauliTerm(a + b, rng.normal()) for a in PAULI_CHARS for b in PAULI_CHARS if a + b != "II")
    schedule = HamiltonianSchedule(2, (Segment(1.0, PauliSum(2, terms[:8])), Segment(0.5, PauliSum(2, terms[8:]))))
    noise = NoiseModel("amplitude_damping", 0.05)
    obs = PauliSum(2, (PauliTerm("ZI", 1.0), PauliTerm("XX", 0.5)))
    stretched = rescaled_expectation(schedule, noise, obs, 2.0)
    direct = expectation(lindblad_evolve(density_matrix(zero_state(2)), schedule, noise, 2.0), obs)
    assert abs(stretched - direct) < 1e-8, f"deviation {abs(stretched - direct):.2e}"
    return f"deviation {abs(stretched - direct):.1e}"


def check_richardson() -> str:
    w = richardson_weights([1, 2, 3])
    assert np.allclose(w, [3, -3, 1], atol=1e-12), f"weights {w}"
    return "c=(1,2,3) -> (3,-3,1)"


def check_quantum_volume() -> str:
    report = quantum_volume(DeviceModel(1000, 1e-4))
    assert report.row(1000).depth == 10 and report.row(100).depth == 100, "depth table"
    assert report.volume == 10_000 and report.n_star == 100, "volume"
    return "d(1000)=10, d(100)=100, V_Q=10000 at n=100"


def check_parameter_count() -> str:
    for n in range(1, 9):
        for d in range(5):
            spec = HeuristicAnsatzSpec(n, d, "ZXZ_full")
            assert spec.parameter_count == n * (3 * d + 2)
            assert len(heuristic_circuit(spec, np.zeros(spec.parameter_count)).gates) >= spec.parameter_count
    return "N(3D+2) for N<=8, D<=4"


CHECKS: dict[str, Callable[[], str]] = {
    "simulator": check_simulator,
    "jordan_wigner": check_jordan_wigner,
    "uccsd_number": check_uccsd_number,
    "rescaling": check_rescaling,
    "richardson": check_richardson,
    "quantum_volume": check_quantum_volume,
    "parameter_count": check_parameter_count,
}


def run_checks() -> list[CheckResult]:
    results = []
    for name, fn in CHECKS.items():
        t0 = time.perf_counter()
        try:
            detail, ok = fn(), True
        except AssertionError as exc:
            detail, ok = str(exc), False
        results.append(CheckResult(name, ok, detail, time.perf_counter() - t0))
    return results


__all__ = ["CHECKS", "CheckResult", "random_circuit", "random_hermitian_fermion", "run_checks"]
