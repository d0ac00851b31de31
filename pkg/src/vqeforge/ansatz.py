"""Trial-state circuits: hardware-efficient heuristic layers and Trotterised UCCSD."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations
from math import comb, pi

import numpy as np

from .fermion import ANNIHILATE, CREATE, FermionOperator, jordan_wigner
from .statevec import Circuit, Gate, cnot, cz, pauli_exponential, rotation

ROTATION_SCHEMES = ("ZXZ_full", "YZ", "Y_only")
ENTANGLERS = ("cz_linear_chain", "cz_all_pairs", "cnot_linear_chain")


@dataclass(frozen=True)
class HeuristicAnsatzSpec:
    """Alternating single-qubit rotation layers and ``depth`` entangler blocks.

    Angle layout, per rotation layer and then per qubit, in application order:

    * ``ZXZ_full``: layer 0 uses ``(x, z)``; later layers use ``(z, x, z)``.
      The first layer omits the Z that would act directly on ``|0>``.
    * ``YZ``: ``(z, y)``, i.e. the operator ``Y(a) Z(b)`` stored as ``(b, a)``.
    * ``Y_only``: ``(y,)``.
    """

    n: int
    depth: int = 1
    rotation_scheme: str = "ZXZ_full"
    entangler: str = "cz_linear_chain"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("ansatz needs at least one qubit")
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")
        if self.rotation_scheme not in ROTATION_SCHEMES:
            raise ValueError(f"unknown rotation scheme {self.rotation_scheme!r}; choose from {ROTATION_SCHEMES}")
        if self.entangler not in ENTANGLERS:
            raise ValueError(f"unknown entangler {self.entangler!r}; choose from {ENTANGLERS}")

    @property
    def parameter_count(self) -> int:
        n, d = self.n, self.depth
        if self.rotation_scheme == "ZXZ_full":
            return n * (3 * d + 2)
        if self.rotation_scheme == "YZ":
            return 2 * n * (d + 1)
        return n * (d + 1)

    def layer_axes(self, layer: int) -> tuple[str, ...]:
        if self.rotation_scheme == "ZXZ_full":
            return ("x", "z") if layer == 0 else ("z", "x", "z")
        if self.rotation_scheme == "YZ":
            return ("z", "y")
        return ("y",)


def entangler_gates(n: int, kind: str) -> list[Gate]:
    if kind == "cz_linear_chain":
        return [cz(q, q + 1) for q in range(n - 1)]
    if kind == "cnot_linear_chain":
        return [cnot(q, q + 1) for q in range(n - 1)]
    if kind == "cz_all_pairs":
        return [cz(a, b) for a, b in combinations(range(n), 2)]
    raise ValueError(f"unknown entangler {kind!r}")


def heuristic_circuit(spec: HeuristicAnsatzSpec, theta: Sequence[float]) -> Circuit:
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != spec.parameter_count:
        raise ValueError(f"expected {spec.parameter_count} parameters, got {theta.size}")
    circuit = Circuit(spec.n)
    pos = 0
    for layer in range(spec.depth + 1):
        if layer > 0:
            circuit.extend(entangler_gates(spec.n, spec.entangler))
        axes = spec.layer_axes(layer)
        for q in range(spec.n):
            for axis in axes:
                circuit.append(rotation(axis, theta[pos], q))
                pos += 1
    return circuit


def embed_parameters(spec: HeuristicAnsatzSpec, theta: Sequence[float]) -> np.ndarray:
    """Parameters at ``depth + 1`` that prepare exactly the state of ``theta`` at ``depth``.

    A zero rotation layer is prepended. Every supported entangler fixes
    ``|0...0>``, so the old layers then act on the same input as before.
    For ``ZXZ_full`` the old first layer ``(x, z)`` becomes ``(0, x, z)``.
    """
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != spec.parameter_count:
        raise ValueError(f"expected {spec.parameter_count} parameters, got {theta.size}")
    n = spec.n
    first = len(spec.layer_axes(0)) * n
    head = np.zeros(first)
    old_first = theta[:first]
    if spec.rotation_scheme == "ZXZ_full":
        old_first = np.column_stack([np.zeros(n), old_first.reshape(n, 2)]).ravel()
    return np.concatenate([head, old_first, theta[first:]])


@dataclass(frozen=True)
class UccsdSpec:
    """Excitations out of ``occupied`` into ``unoccupied`` modes.

    Independent amplitudes: singles ``(i, a)`` for every occupied ``i`` and
    unoccupied ``a``, then doubles ``(i, j, a, b)`` with ``i < j`` and
    ``a < b``, in lexicographic order.
    """

    n_modes: int
    occupied: tuple[int, ...]
    unoccupied: tuple[int, ...]
    trotter_steps: int = 1

    def __post_init__(self) -> None:
        occ = tuple(sorted(int(i) for i in self.occupied))
        unocc = tuple(sorted(int(i) for i in self.unoccupied))
        if set(occ) & set(unocc):
            raise ValueError("occupied and unoccupied modes overlap")
        if len(set(occ)) != len(occ) or len(set(unocc)) != len(unocc):
            raise ValueError("duplicate mode index")
        if any(not 0 <= m < self.n_modes for m in occ + unocc):
            raise ValueError(f"mode index out of range for {self.n_modes} modes")
        if self.trotter_steps < 1:
            raise ValueError("trotter_steps must be >= 1")
        object.__setattr__(self, "occupied", occ)
        object.__setattr__(self, "unoccupied", unocc)

    @classmethod
    def from_electrons(cls, n_modes: int, n_electrons: int, trotter_steps: int = 1) -> UccsdSpec:
        return cls(n_modes, tuple(range(n_electrons)), tuple(range(n_electrons, n_modes)), trotter_steps)

    @property
    def singles(self) -> list[tuple[int, int]]:
        return [(i, a) for i in self.occupied for a in self.unoccupied]

    @property
    def doubles(self) -> list[tuple[int, int, int, int]]:
        return [
            (i, j, a, b)
            for i, j in combinations(self.occupied, 2)
            for a, b in combinations(self.unoccupied, 2)
        ]

    @property
    def parameter_count(self) -> int:
        no, nu = len(self.occupied), len(self.unoccupied)
        return no * nu + comb(no, 2) * comb(nu, 2)

    def reference(self) -> str:
        return "".join("1" if m in self.occupied else "0" for m in range(self.n_modes))


def _excitation_operators(spec: UccsdSpec) -> list[FermionOperator]:
    """Cluster-operator pieces ``a+_a a_i`` and ``a+_b a+_a a_j a_i`` in parameter order."""
    n = spec.n_modes
    ops = [FermionOperator.term(n, [(a, CREATE), (i, ANNIHILATE)]) for i, a in spec.singles]
    ops += [
        FermionOperator.term(n, [(b, CREATE), (a, CREATE), (j, ANNIHILATE), (i, ANNIHILATE)])
        for i, j, a, b in spec.doubles
    ]
    return ops


def _check_theta(spec: UccsdSpec, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != spec.parameter_count:
        raise ValueError(f"expected {spec.parameter_count} parameters, got {theta.size}")
    return theta


def uccsd_generator(spec: UccsdSpec, theta: Sequence[float]) -> FermionOperator:
    """Anti-Hermitian ``T(theta) - T(theta)^dagger`` truncated at doubles."""
    theta = _check_theta(spec, theta)
    gen = FermionOperator.zero(spec.n_modes)
    for t, op in zip(theta, _excitation_operators(spec)):
        if t != 0:
            gen = gen + (op - op.adjoint()) * t
    return gen


def uccsd_circuit(
    spec: UccsdSpec, theta: Sequence[float], reference: str | Sequence[int] | None = None
) -> Circuit:
    """First-order Trotter circuit for ``exp(T - T^dagger)`` on a reference determinant.

    Each excitation contributes the Jordan-Wigner strings of
    ``theta_k (tau_k - tau_k^dagger) / steps``. Those strings commute with
    one another, so an excitation's factors are applied back to back and
    each excitation is realised exactly; only the splitting between
    different excitations is approximate.
    """
    theta = _check_theta(spec, theta)
    ref = spec.reference() if reference is None else "".join(str(int(b)) for b in reference)
    if len(ref) != spec.n_modes:
        raise ValueError(f"reference has {len(ref)} modes, expected {spec.n_modes}")
    if set(ref) - {"0", "1"}:
        raise ValueError(f"reference must be a bitstring, got {ref!r}")
    if ref.count("1") != len(spec.occupied):
        raise ValueError(f"reference has {ref.count('1')} electrons, spec has {len(spec.occupied)}")

    circuit = Circuit(spec.n_modes)
    for q, b in enumerate(ref):
        if b == "1":
            circuit.append(rotation("x", pi, q))

    factors: list[Gate] = []
    for t, op in zip(theta, _excitation_operators(spec)):
        if t == 0:
            continue
        paulis = jordan_wigner((op - op.adjoint()) * (t / spec.trotter_steps))
        for term in paulis.terms:
            if term.is_identity():
                continue
            # exp(c P) with c = i b equals exp(-i (-b) P)
            if abs(term.coeff.real) > 1e-10:
                raise ValueError("excitation generator produced a non-anti-Hermitian Pauli term")
            factors.append(pauli_exponential(-term.coeff.imag, term.ops))
    for _ in range(spec.trotter_steps):
        circuit.extend(factors)
    return circuit


__all__ = [
    "ENTANGLERS",
    "HeuristicAnsatzSpec",
    "ROTATION_SCHEMES",
    "UccsdSpec",
    "embed_parameters",
    "entangler_gates",
    "heuristic_circuit",
    "uccsd_circuit",
    "uccsd_generator",
]
