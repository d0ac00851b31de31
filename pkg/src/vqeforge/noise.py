"""Lindblad dynamics of a circuit's Hamiltonian schedule and zero-noise extrapolation.

A circuit is turned into piecewise-constant Hamiltonian segments, one per
circuit layer, and integrated with a fixed-step fourth-order Runge-Kutta
scheme. Noise is amplified by stretching every segment in time while
dividing its couplings by the same factor; with time-independent noise
this is equivalent to multiplying the noise rate.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.linalg import expm

from .errors import NumericError, OracleLimitError
from .pauli import PAULI_MATRICES, PauliSum, PauliTerm, to_matrix
from .statevec import Circuit, Gate, QuantumState, zero_state

DENSITY_LIMIT = 8
NOISE_KINDS = ("amplitude_damping", "dephasing", "depolarizing")
STEPS_PER_SEGMENT = 200
RATE_STEP_FACTOR = 0.1
TRACE_DRIFT_LIMIT = 1e-6

# decays |1> to |0>
_LOWERING = np.array([[0, 1], [0, 0]], dtype=complex)


@dataclass(frozen=True)
class Segment:
    duration: float
    hamiltonian: PauliSum


@dataclass(frozen=True)
class HamiltonianSchedule:
    """Piecewise-constant Hamiltonian ``H(t)``.

    ``global_phase`` is the phase ``phi`` with ``U_circuit = exp(i phi) U_schedule``.
    """

    n: int
    segments: tuple[Segment, ...]
    global_phase: float = 0.0

    def __post_init__(self) -> None:
        for seg in self.segments:
            if not seg.duration > 0:
                raise ValueError(f"segment duration must be positive, got {seg.duration}")
            if seg.hamiltonian.n != self.n:
                raise ValueError("segment Hamiltonian qubit count mismatch")
            if not seg.hamiltonian.is_real():
                raise ValueError("segment Hamiltonian must have real Pauli coefficients")

    @property
    def total_time(self) -> float:
        return sum(seg.duration for seg in self.segments)

    def stretched(self, factor: float) -> HamiltonianSchedule:
        """Durations times ``factor``, couplings divided by ``factor``."""
        if not factor > 0:
            raise ValueError("stretch factor must be positive")
        segs = tuple(Segment(s.duration * factor, s.hamiltonian.scaled(1 / factor)) for s in self.segments)
        return HamiltonianSchedule(self.n, segs, self.global_phase)


@dataclass(frozen=True)
class NoiseModel:
    """Single-qubit Lindblad channel on every qubit at rate ``rate`` per unit time.

    * ``amplitude_damping``: jump operator ``|0><1|``.
    * ``dephasing``: ``Z / sqrt(2)``, so coherences decay as ``exp(-rate t)``.
    * ``depolarizing``: ``X/2, Y/2, Z/2``, so a lone qubit relaxes to ``I/2`` as ``exp(-rate t)``.
    """

    kind: str = "amplitude_damping"
    rate: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; choose from {NOISE_KINDS}")
        if not (self.rate >= 0 and math.isfinite(self.rate)):
            raise ValueError(f"noise rate must be finite and >= 0, got {self.rate}")

    def single_qubit_operators(self) -> list[np.ndarray]:
        if self.kind == "amplitude_damping":
            return [_LOWERING]
        if self.kind == "dephasing":
            return [PAULI_MATRICES["Z"] / math.sqrt(2)]
        return [PAULI_MATRICES[p] / 2 for p in "XYZ"]


def _embed(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    factors = [op if q == qubit else np.eye(2) for q in range(n)]
    return reduce(np.kron, factors)


def jump_operators(noise: NoiseModel, n: int) -> list[np.ndarray]:
    return [_embed(op, q, n) for q in range(n) for op in noise.single_qubit_operators()]


def _gate_generator(gate: Gate, n: int, tau: float) -> tuple[list[PauliTerm], float]:
    """Pauli terms of ``H`` with ``exp(-i H tau)`` equal to the gate up to ``exp(i phase)``."""

    def ops(**factors: str) -> str:
        s = ["I"] * n
        for q, p in factors.items():
            s[int(q[1:])] = p
        return "".join(s)

    if gate.kind == "rotation":
        (q,) = gate.qubits
        return [PauliTerm(ops(**{f"q{q}": gate.axis.upper()}), gate.angle / (2 * tau))], 0.0
    if gate.kind == "pauli_exponential":
        return [PauliTerm(gate.pauli, gate.angle / tau)], 0.0
    # CZ = exp(-i pi/4) exp(-i pi/4 (ZZ - ZI - IZ)); CNOT likewise with X on the target
    w = math.pi / (4 * tau)
    if gate.kind == "cz":
        a, b = gate.qubits
        return [
            PauliTerm(ops(**{f"q{a}": "Z", f"q{b}": "Z"}), w),
            PauliTerm(ops(**{f"q{a}": "Z"}), -w),
            PauliTerm(ops(**{f"q{b}": "Z"}), -w),
        ], -math.pi / 4
    if gate.kind == "cnot":
        c, t = gate.qubits
        return [
            PauliTerm(ops(**{f"q{c}": "Z", f"q{t}": "X"}), w),
            PauliTerm(ops(**{f"q{c}": "Z"}), -w),
            PauliTerm(ops(**{f"q{t}": "X"}), -w),
        ], -math.pi / 4
    raise ValueError(f"gate {gate.kind!r} has no Pauli generator decomposition")


def circuit_to_schedule(circuit: Circuit, gate_duration: float = 1.0) -> HamiltonianSchedule:
    """One segment of length ``gate_duration`` per circuit layer."""
    if not gate_duration > 0:
        raise ValueError("gate duration must be positive")
    segments = []
    phase = 0.0
    for layer in circuit.layers:
        terms: list[PauliTerm] = []
        for gate in layer:
            gen, ph = _gate_generator(gate, circuit.n, gate_duration)
            terms += gen
            phase += ph
        segments.append(Segment(gate_duration, PauliSum(circuit.n, tuple(terms))))
    return HamiltonianSchedule(circuit.n, tuple(segments), phase)


def density_matrix(state: QuantumState | np.ndarray) -> np.ndarray:
    psi = state.amplitudes if isinstance(state, QuantumState) else np.asarray(state, dtype=complex)
    return np.outer(psi, psi.conj())


def _lindblad_rhs(h: np.ndarray, jumps: list[tuple[np.ndarray, np.ndarray, np.ndarray]], rate: float):
    def rhs(rho: np.ndarray) -> np.ndarray:
        out = -1j * (h @ rho - rho @ h)
        if rate:
            diss = np.zeros_like(rho)
            for l, ld, ldl in jumps:
                diss += l @ rho @ ld - 0.5 * (ldl @ rho + rho @ ldl)
            out += rate * diss
        return out

    return rhs


def step_size(duration: float, effective_rate: float, steps_per_segment: int = STEPS_PER_SEGMENT) -> float:
    dt = duration / steps_per_segment
    if effective_rate > 0:
        dt = min(dt, RATE_STEP_FACTOR / effective_rate)
    return dt


def lindblad_evolve(
    rho0: np.ndarray,
    schedule: HamiltonianSchedule,
    noise: NoiseModel,
    lambda_scale: float = 1.0,
    steps_per_segment: int = STEPS_PER_SEGMENT,
    limit: int = DENSITY_LIMIT,
) -> np.ndarray:
    """Integrate ``d rho/dt = -i[H(t), rho] + rate * lambda_scale * L(rho)`` with RK4."""
    n = schedule.n
    if n > limit:
        raise OracleLimitError(f"{n} qubits exceeds the density-matrix limit of {limit}")
    if lambda_scale < 0:
        raise ValueError("lambda_scale must be >= 0")
    rho = np.array(rho0, dtype=complex)
    if rho.shape != (2**n, 2**n):
        raise ValueError(f"density matrix must be {2**n}x{2**n}, got {rho.shape}")
    rate = noise.rate * lambda_scale
    jumps = [(l, l.conj().T, l.conj().T @ l) for l in jump_operators(noise, n)] if rate else []
    start_trace = np.trace(rho).real

    for seg in schedule.segments:
        h = to_matrix(seg.hamiltonian, limit=limit)
        rhs = _lindblad_rhs(h, jumps, rate)
        steps = max(1, math.ceil(seg.duration / step_size(seg.duration, rate, steps_per_segment) - 1e-9))
        dt = seg.duration / steps
        for _ in range(steps):
            k1 = rhs(rho)
            k2 = rhs(rho + 0.5 * dt * k1)
            k3 = rhs(rho + 0.5 * dt * k2)
            k4 = rhs(rho + dt * k3)
            rho = rho + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        drift = abs(np.trace(rho).real - start_trace)
        if not np.all(np.isfinite(rho)) or drift > TRACE_DRIFT_LIMIT:
            raise NumericError(
                f"trace drifted by {drift:.3g} during integration; use more steps per segment (smaller dt)"
            )
    return rho


def expectation(rho: np.ndarray, observable: PauliSum) -> float:
    return float(np.trace(rho @ to_matrix(observable)).real)


def _initial(schedule: HamiltonianSchedule, rho0) -> np.ndarray:
    return density_matrix(zero_state(schedule.n)) if rho0 is None else rho0


def rescaled_expectation(
    schedule: HamiltonianSchedule,
    noise: NoiseModel,
    observable: PauliSum,
    scale: float,
    rho0: np.ndarray | None = None,
    steps_per_segment: int = STEPS_PER_SEGMENT,
) -> float:
    """Expectation after running the schedule ``scale`` times slower at the physical noise rate."""
    if scale < 1:
        raise ValueError(f"scale factor must be >= 1, got {scale}")
    rho = lindblad_evolve(_initial(schedule, rho0), schedule.stretched(scale), noise, 1.0, steps_per_segment)
    return expectation(rho, observable)


def richardson_weights(scale_factors: Sequence[float]) -> np.ndarray:
    """Weights with ``sum g_j = 1`` and ``sum g_j c_j**k = 0`` for ``k = 1 .. n``."""
    c = np.asarray(scale_factors, dtype=float).ravel()
    if c.size < 1:
        raise ValueError("need at least one scale factor")
    if c[0] < 1:
        raise ValueError("scale factors must start at >= 1")
    if np.any(np.diff(c) <= 0):
        raise ValueError("scale factors must be distinct and strictly increasing")
    vander = np.vander(c, increasing=True).T
    rhs = np.zeros(c.size)
    rhs[0] = 1.0
    try:
        return np.linalg.solve(vander, rhs)
    except np.linalg.LinAlgError:
        raise ValueError("singular extrapolation system") from None


@dataclass(frozen=True)
class ExtrapolationPlan:
    scale_factors: tuple[float, ...]
    weights: tuple[float, ...]

    @classmethod
    def from_scale_factors(cls, scale_factors: Sequence[float]) -> ExtrapolationPlan:
        w = richardson_weights(scale_factors)
        return cls(tuple(float(c) for c in scale_factors), tuple(float(x) for x in w))

    @property
    def order(self) -> int:
        return len(self.scale_factors) - 1

    def combine(self, values: Sequence[float]) -> float:
        if len(values) != len(self.weights):
            raise ValueError(f"expected {len(self.weights)} values, got {len(values)}")
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class MitigationResult:
    mitigated: float
    raw: tuple[float, ...]
    plan: ExtrapolationPlan

    @property
    def unmitigated(self) -> float:
        return self.raw[0] if self.plan.scale_factors[0] == 1 else float("nan")


def mitigated_expectation(
    schedule: HamiltonianSchedule,
    noise: NoiseModel,
    observable: PauliSum,
    plan: ExtrapolationPlan,
    rho0: np.ndarray | None = None,
    steps_per_segment: int = STEPS_PER_SEGMENT,
) -> MitigationResult:
    raw = tuple(
        rescaled_expectation(schedule, noise, observable, c, rho0, steps_per_segment) for c in plan.scale_factors
    )
    return MitigationResult(plan.combine(raw), raw, plan)


def schedule_unitary(schedule: HamiltonianSchedule) -> np.ndarray:
    """Exact propagator of the schedule (matrix exponentials, no noise)."""
    dim = 2**schedule.n
    u = np.eye(dim, dtype=complex)
    for seg in schedule.segments:
        u = expm(-1j * seg.duration * to_matrix(seg.hamiltonian)) @ u
    return u


__all__ = [
    "ExtrapolationPlan",
    "HamiltonianSchedule",
    "MitigationResult",
    "NOISE_KINDS",
    "NoiseModel",
    "Segment",
    "circuit_to_schedule",
    "density_matrix",
    "expectation",
    "jump_operators",
    "lindblad_evolve",
    "mitigated_expectation",
    "rescaled_expectation",
    "richardson_weights",
    "schedule_unitary",
    "step_size",
]
