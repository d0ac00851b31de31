"""Energy estimation from a prepared state, exactly or from simulated shots."""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import pi

import numpy as np

from .pauli import PauliSum, PauliTerm, group_commuting, measurement_basis
from .statevec import QuantumState, apply, exact_expectation, make_rng, rotation, sample_counts

# Pre-rotation applied before a Z-basis readout so that Z afterwards measures
# the named Pauli: Ry(-pi/2)^dag Z Ry(-pi/2) = X and Rx(pi/2)^dag Z Rx(pi/2) = Y.
PRE_ROTATIONS = {"X": ("y", -pi / 2), "Y": ("x", pi / 2)}


@dataclass(frozen=True)
class EnergyEstimate:
    value: float
    std_error: float = 0.0
    shots_used: int = 0
    groups: int = 0

    @property
    def exact(self) -> bool:
        return self.shots_used == 0


def _pre_rotation_gates(basis: str):
    gates = []
    for q, p in enumerate(basis):
        if p in PRE_ROTATIONS:
            axis, angle = PRE_ROTATIONS[p]
            gates.append(rotation(axis, angle, q))
    return gates


def _eigenvalues(term: PauliTerm, n: int) -> np.ndarray:
    """+1/-1 outcome of a measured Pauli string for every basis index."""
    idx = np.arange(2**n)
    parity = np.zeros(2**n, dtype=np.int64)
    for q in term.support:
        parity ^= (idx >> (n - 1 - q)) & 1
    return 1 - 2 * parity


def measure_group(
    state: QuantumState, group: list[PauliTerm], shots: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Sample one commuting group; returns (mean of sum h_a P_a, variance of that mean)."""
    n = state.n
    rotated = apply(state.copy(), _pre_rotation_gates(measurement_basis(group)))
    counts = sample_counts(rotated.probabilities(), shots, rng)
    per_outcome = np.zeros(2**n)
    for term in group:
        per_outcome += term.coeff.real * _eigenvalues(term, n)
    mean = float(counts @ per_outcome) / shots
    if shots > 1:
        var = float(counts @ (per_outcome - mean) ** 2) / (shots - 1)
    else:
        var = 0.0
    return mean, var / shots


def estimate(
    state: QuantumState,
    h: PauliSum,
    shots: int | None = None,
    seed: int | np.random.SeedSequence | None = 0,
) -> EnergyEstimate:
    """Estimate ``<H>``: exactly when ``shots`` is None, else by sampling.

    In shot mode every qubit-wise commuting group gets ``shots`` samples of
    its own state preparation. Within a group the shot-wise outcome products
    of all terms are summed before averaging, so covariances between terms
    sharing shots enter the standard error. Groups are independent.
    """
    if h.n != state.n:
        raise ValueError(f"observable has {h.n} qubits, state has {state.n}")
    if shots is None:
        return EnergyEstimate(exact_expectation(state, h))
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    h = h.real()
    groups = group_commuting(h)
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    streams = seed.spawn(len(groups))
    value = h.offset
    variance = 0.0
    for group, stream in zip(groups, streams):
        mean, var = measure_group(state, group, shots, make_rng(stream))
        value += mean
        variance += var
    return EnergyEstimate(value, math.sqrt(variance), shots, len(groups))


__all__ = ["EnergyEstimate", "PRE_ROTATIONS", "estimate", "measure_group"]
