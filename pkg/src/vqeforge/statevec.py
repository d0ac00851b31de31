"""Dense state-vector simulation.

Qubit 0 is the most significant bit of the amplitude index, so the
amplitude vector reshaped to ``(2,) * n`` has qubit ``q`` on axis ``q``.
This matches the leftmost-Kronecker-factor convention of
:mod:`vqeforge.pauli`.

Randomness comes from numpy's Philox counter-based bit generator, which
gives identical streams on every platform for a given seed.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError, OracleLimitError
from .pauli import PAULI_MATRICES, PauliSum, PauliTerm

MAX_QUBITS = 20

_AXES = {"x": "X", "y": "Y", "z": "Z"}


def make_rng(seed: int | Sequence[int] | np.random.SeedSequence | None) -> np.random.Generator:
    """Philox-backed generator; ``seed`` may be an int, a key sequence or a SeedSequence."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class Gate:
    """One circuit operation.

    ``kind`` is one of ``rotation``, ``cz``, ``cnot``, ``pauli_exponential``
    or ``unitary2q``. Use the module-level constructors rather than building
    instances directly.
    """

    kind: str
    qubits: tuple[int, ...]
    angle: float = 0.0
    axis: str | None = None
    pauli: str | None = None
    matrix: np.ndarray | None = field(default=None, compare=False)

    @property
    def support(self) -> tuple[int, ...]:
        return self.qubits

    def inverse(self) -> Gate:
        if self.kind in ("cz", "cnot"):
            return self
        if self.kind == "unitary2q":
            return unitary2q(self.qubits[0], self.qubits[1], self.matrix.conj().T)
        return Gate(self.kind, self.qubits, -self.angle, self.axis, self.pauli)


def rotation(axis: str, angle: float, qubit: int) -> Gate:
    """``exp(-i angle sigma_axis / 2)`` on one qubit."""
    axis = axis.lower()
    if axis not in _AXES:
        raise ValueError(f"rotation axis must be x, y or z, got {axis!r}")
    return Gate("rotation", (int(qubit),), float(angle), axis=axis)


def cz(q1: int, q2: int) -> Gate:
    _check_distinct((q1, q2))
    return Gate("cz", (int(q1), int(q2)))


def cnot(control: int, target: int) -> Gate:
    _check_distinct((control, target))
    return Gate("cnot", (int(control), int(target)))


def pauli_exponential(angle: float, pauli: PauliTerm | str) -> Gate:
    """``exp(-i angle P)`` for a Pauli string ``P`` (full angle, no factor 1/2).

    A :class:`PauliTerm` argument contributes only its string; its
    coefficient is ignored.
    """
    ops = pauli.ops if isinstance(pauli, PauliTerm) else PauliTerm(pauli).ops
    support = tuple(q for q, p in enumerate(ops) if p != "I")
    return Gate("pauli_exponential", support, float(angle), pauli=ops)


def unitary2q(q1: int, q2: int, matrix: np.ndarray, atol: float = 1e-10) -> Gate:
    """Arbitrary two-qubit unitary; ``q1`` is the more significant index of the 4x4 matrix."""
    _check_distinct((q1, q2))
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"unitary2q needs a 4x4 matrix, got shape {m.shape}")
    if not np.allclose(m.conj().T @ m, np.eye(4), atol=atol):
        raise ValueError("unitary2q matrix is not unitary")
    m = m.copy()
    m.setflags(write=False)
    return Gate("unitary2q", (int(q1), int(q2)), matrix=m)


def _check_distinct(qubits: Sequence[int]) -> None:
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"gate qubits must be distinct, got {tuple(qubits)}")


@dataclass
class Circuit:
    """Ordered gate list on ``n`` qubits.

    ``layers`` is derived by as-soon-as-possible scheduling: each gate goes
    into the first layer after the last one touching any of its qubits, so
    gates sharing a layer have disjoint supports.
    """

    n: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("circuit needs at least one qubit")
        for g in self.gates:
            self._validate(g)

    def _validate(self, gate: Gate) -> None:
        for q in gate.qubits:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for a {self.n}-qubit circuit")
        if gate.kind == "pauli_exponential" and len(gate.pauli) != self.n:
            raise ValueError(f"Pauli string {gate.pauli!r} does not match {self.n} qubits")

    def append(self, gate: Gate) -> Circuit:
        self._validate(gate)
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> Circuit:
        for g in gates:
            self.append(g)
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def inverse(self) -> Circuit:
        return Circuit(self.n, [g.inverse() for g in reversed(self.gates)])

    @property
    def layers(self) -> list[list[Gate]]:
        layers: list[list[Gate]] = []
        frontier = [0] * self.n
        for g in self.gates:
            if not g.qubits:
                # global-phase-only gate: attach to the current last layer
                idx = max(len(layers) - 1, 0)
            else:
                idx = max(frontier[q] for q in g.qubits)
            while len(layers) <= idx:
                layers.append([])
            layers[idx].append(g)
            for q in g.qubits:
                frontier[q] = idx + 1
        return layers

    @property
    def depth(self) -> int:
        return len(self.layers)


@dataclass
class QuantumState:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.n,):
            raise ValueError(f"expected {2**self.n} amplitudes, got shape {self.amplitudes.shape}")

    def copy(self) -> QuantumState:
        return QuantumState(self.n, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n)


def zero_state(n: int, max_qubits: int = MAX_QUBITS) -> QuantumState:
    if not 1 <= n <= max_qubits:
        raise ValueError(f"qubit count must be in [1, {max_qubits}], got {n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1.0
    return QuantumState(n, amps)


def basis_state(bits: str | Sequence[int]) -> QuantumState:
    """Computational basis state; ``bits[0]`` is qubit 0."""
    bits = [int(b) for b in bits]
    n = len(bits)
    state = zero_state(n)
    state.amplitudes[0] = 0.0
    state.amplitudes[int("".join(map(str, bits)), 2)] = 1.0
    return state


def _apply_1q(psi: np.ndarray, m: np.ndarray, q: int) -> np.ndarray:
    out = np.tensordot(m, psi, axes=([1], [q]))
    return np.moveaxis(out, 0, q)


def _apply_2q(psi: np.ndarray, m: np.ndarray, q1: int, q2: int) -> np.ndarray:
    m4 = m.reshape(2, 2, 2, 2)
    out = np.tensordot(m4, psi, axes=([2, 3], [q1, q2]))
    return np.moveaxis(out, [0, 1], [q1, q2])


def _index(n: int, fixed: dict[int, int]) -> tuple:
    return tuple(fixed.get(q, slice(None)) for q in range(n))


def apply_pauli_string(psi: np.ndarray, ops: str) -> np.ndarray:
    """``P psi`` for a tensor-shaped ``psi``; returns a new array."""
    out = psi
    for q, p in enumerate(ops):
        if p == "I":
            continue
        out = _apply_1q(out, PAULI_MATRICES[p], q)
    return out


def rotation_matrix(axis: str, angle: float) -> np.ndarray:
    sigma = PAULI_MATRICES[_AXES[axis]]
    return math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * sigma


def _apply_gate(psi: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    kind = gate.kind
    if kind == "rotation":
        return _apply_1q(psi, rotation_matrix(gate.axis, gate.angle), gate.qubits[0])
    if kind == "cz":
        a, b = gate.qubits
        psi[_index(n, {a: 1, b: 1})] *= -1
        return psi
    if kind == "cnot":
        c, t = gate.qubits
        one0 = _index(n, {c: 1, t: 0})
        one1 = _index(n, {c: 1, t: 1})
        tmp = psi[one0].copy()
        psi[one0] = psi[one1]
        psi[one1] = tmp
        return psi
    if kind == "pauli_exponential":
        p_psi = apply_pauli_string(psi, gate.pauli)
        return math.cos(gate.angle) * psi - 1j * math.sin(gate.angle) * p_psi
    if kind == "unitary2q":
        return _apply_2q(psi, gate.matrix, *gate.qubits)
    raise ValueError(f"unknown gate kind {kind!r}")


def apply(state: QuantumState, circuit: Circuit | Iterable[Gate]) -> QuantumState:
    """Apply gates in order, updating ``state`` in place; returns ``state``."""
    n = state.n
    if isinstance(circuit, Circuit):
        if circuit.n != n:
            raise ValueError(f"circuit has {circuit.n} qubits, state has {n}")
        gates = circuit.gates
    else:
        gates = list(circuit)
    psi = state.tensor()
    for gate in gates:
        for q in gate.qubits:
            if not 0 <= q < n:
                raise IndexError(f"qubit {q} out of range for {n} qubits")
        psi = _apply_gate(psi, gate, n)
    state.amplitudes = np.ascontiguousarray(psi).reshape(-1)
    return state


def run(circuit: Circuit) -> QuantumState:
    """State produced by ``circuit`` acting on ``|0...0>``."""
    return apply(zero_state(circuit.n), circuit)


def pauli_expectation(state: QuantumState, ops: str) -> complex:
    psi = state.tensor()
    return complex(np.vdot(psi, apply_pauli_string(psi, ops)))


def exact_expectation(state: QuantumState, h: PauliSum, atol: float = 1e-10) -> float:
    """``<psi|H|psi>``; raises :class:`NumericError` on a non-negligible imaginary residue."""
    if h.n != state.n:
        raise ValueError(f"observable has {h.n} qubits, state has {state.n}")
    total = complex(h.offset)
    for t in h.terms:
        total += t.coeff * pauli_expectation(state, t.ops)
    if abs(total.imag) > atol:
        raise NumericError(f"expectation value has imaginary part {total.imag:.3g}; observable not Hermitian")
    return float(total.real)


def bitstring(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def sample_counts(probs: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Multinomial draw of ``shots`` outcomes; returns counts per basis index."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    total = p.sum()
    if not np.isfinite(total) or total <= 0:
        raise NumericError("probability vector has no mass")
    return rng.multinomial(shots, p / total)


def sample_bitstrings(state: QuantumState, shots: int, seed: int | None = 0) -> dict[str, int]:
    """Histogram of ``shots`` computational-basis measurements, keys sorted."""
    counts = sample_counts(state.probabilities(), shots, make_rng(seed))
    return {bitstring(int(i), state.n): int(counts[i]) for i in np.flatnonzero(counts)}


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of a circuit, column by column through :func:`apply`."""
    dim = 2**circuit.n
    out = np.empty((dim, dim), dtype=complex)
    for col in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[col] = 1.0
        out[:, col] = apply(QuantumState(circuit.n, e), circuit).amplitudes
    return out


def _kron_embed(factors: dict[int, np.ndarray], n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for q in range(n):
        out = np.kron(out, factors.get(q, np.eye(2)))
    return out


def _unit(a: int, b: int) -> np.ndarray:
    m = np.zeros((2, 2), dtype=complex)
    m[a, b] = 1.0
    return m


def dense_gate_matrix(gate: Gate, n: int) -> np.ndarray:
    """Full ``2**n`` matrix of one gate built from Kronecker products only.

    Independent of the tensor kernels; used as a test oracle.
    """
    kind = gate.kind
    if kind == "rotation":
        return _kron_embed({gate.qubits[0]: rotation_matrix(gate.axis, gate.angle)}, n)
    if kind == "pauli_exponential":
        p = _kron_embed({q: PAULI_MATRICES[c] for q, c in enumerate(gate.pauli)}, n)
        return math.cos(gate.angle) * np.eye(2**n) - 1j * math.sin(gate.angle) * p
    if kind == "cz":
        a, b = gate.qubits
        return np.eye(2**n) - 2 * _kron_embed({a: _unit(1, 1), b: _unit(1, 1)}, n)
    if kind == "cnot":
        c, t = gate.qubits
        return _kron_embed({c: _unit(0, 0)}, n) + _kron_embed({c: _unit(1, 1), t: PAULI_MATRICES["X"]}, n)
    if kind == "unitary2q":
        q1, q2 = gate.qubits
        u = gate.matrix.reshape(2, 2, 2, 2)
        out = np.zeros((2**n, 2**n), dtype=complex)
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    for d in range(2):
                        if u[a, b, c, d] != 0:
                            out += u[a, b, c, d] * _kron_embed({q1: _unit(a, c), q2: _unit(b, d)}, n)
        return out
    raise ValueError(f"unknown gate kind {kind!r}")


def dense_circuit_unitary(circuit: Circuit, limit: int = 10) -> np.ndarray:
    """Product of :func:`dense_gate_matrix` over the circuit (oracle, small ``n`` only)."""
    if circuit.n > limit:
        raise OracleLimitError(f"{circuit.n} qubits exceeds the dense-oracle limit of {limit}")
    u = np.eye(2**circuit.n, dtype=complex)
    for gate in circuit.gates:
        u = dense_gate_matrix(gate, circuit.n) @ u
    return u


__all__ = [
    "Circuit",
    "Gate",
    "MAX_QUBITS",
    "QuantumState",
    "apply",
    "basis_state",
    "bitstring",
    "circuit_unitary",
    "dense_circuit_unitary",
    "dense_gate_matrix",
    "cnot",
    "cz",
    "exact_expectation",
    "make_rng",
    "pauli_exponential",
    "pauli_expectation",
    "rotation",
    "rotation_matrix",
    "run",
    "sample_bitstrings",
    "sample_counts",
    "unitary2q",
    "zero_state",
]
