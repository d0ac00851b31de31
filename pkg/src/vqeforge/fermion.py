"""Second-quantised operators and the Jordan-Wigner map.

Mode ``i`` is identified with qubit ``i`` and occupation ``f_i = 1`` with
qubit state ``|1>``. Under that identification the creation operator is
``(X - iY)/2 = |1><0|`` on its own qubit, preceded by a ``Z`` on every
lower mode, which supplies the sign ``(-1)**(f_0 + ... + f_{i-1})``. The
occupation-basis oracle (:func:`fermion_matrix`) applies that same sign
rule directly, so the two agree for every operator, including ones that
change the particle number.
"""

from __future__ import annotations

import os
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import InputFormatError, OracleLimitError
from .pauli import PauliSum, PauliTerm, oracle_limit

CREATE = True
ANNIHILATE = False

DEFAULT_FERMION_ORACLE_LIMIT = 10

# Reduced two-qubit H2 Hamiltonian at 0.74 Angstrom (Hartree).
H2_COEFFICIENTS = {
    "II": -1.0524,
    "ZZ": 0.01128,
    "ZI": 0.3979,
    "IZ": 0.3979,
    "XX": 0.1809,
}

Ladder = tuple[int, bool]


@dataclass(frozen=True)
class FermionOperator:
    """Sum of coefficient-weighted products of ladder operators.

    Each product is a tuple of ``(mode, is_creation)`` pairs written left
    to right, so the rightmost operator acts first.
    """

    n_modes: int
    products: tuple[tuple[complex, tuple[Ladder, ...]], ...] = ()

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise ValueError("need at least one mode")
        clean = []
        for coeff, ops in self.products:
            ops = tuple((int(m), bool(k)) for m, k in ops)
            for m, _ in ops:
                if not 0 <= m < self.n_modes:
                    raise ValueError(f"mode {m} out of range for {self.n_modes} modes")
            clean.append((complex(coeff), ops))
        object.__setattr__(self, "products", tuple(clean))

    @classmethod
    def zero(cls, n_modes: int) -> FermionOperator:
        return cls(n_modes)

    @classmethod
    def identity(cls, n_modes: int, coeff: complex = 1.0) -> FermionOperator:
        return cls(n_modes, ((coeff, ()),))

    @classmethod
    def term(cls, n_modes: int, ops: Sequence[Ladder], coeff: complex = 1.0) -> FermionOperator:
        return cls(n_modes, ((coeff, tuple(ops)),))

    def __len__(self) -> int:
        return len(self.products)

    def _check(self, other: FermionOperator) -> None:
        if other.n_modes != self.n_modes:
            raise ValueError(f"mode counts differ: {self.n_modes} vs {other.n_modes}")

    def __add__(self, other: FermionOperator) -> FermionOperator:
        if not isinstance(other, FermionOperator):
            return NotImplemented
        self._check(other)
        return FermionOperator(self.n_modes, self.products + other.products)

    def __sub__(self, other: FermionOperator) -> FermionOperator:
        return self + other * -1

    def __neg__(self) -> FermionOperator:
        return self * -1

    def __mul__(self, other) -> FermionOperator:
        if isinstance(other, FermionOperator):
            self._check(other)
            prods = tuple(
                (ca * cb, oa + ob) for ca, oa in self.products for cb, ob in other.products
            )
            return FermionOperator(self.n_modes, prods)
        factor = complex(other)
        return FermionOperator(self.n_modes, tuple((c * factor, ops) for c, ops in self.products))

    def __rmul__(self, other) -> FermionOperator:
        return self * other

    def adjoint(self) -> FermionOperator:
        prods = tuple(
            (c.conjugate(), tuple((m, not k) for m, k in reversed(ops))) for c, ops in self.products
        )
        return FermionOperator(self.n_modes, prods)

    def conserves_number(self) -> bool:
        return all(
            sum(1 if k else -1 for _, k in ops) == 0 for c, ops in self.products if c != 0
        )


def create(mode: int, n_modes: int) -> FermionOperator:
    return FermionOperator.term(n_modes, [(mode, CREATE)])


def annihilate(mode: int, n_modes: int) -> FermionOperator:
    return FermionOperator.term(n_modes, [(mode, ANNIHILATE)])


def anticommutator(a: FermionOperator, b: FermionOperator) -> FermionOperator:
    return a * b + b * a


@dataclass(frozen=True)
class MolecularCoefficients:
    """One-body ``t[i, j]`` and two-body ``u[i, j, k, l]`` integrals in Hartree."""

    n_modes: int
    t: np.ndarray
    u: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.t, dtype=float)
        u = np.asarray(self.u, dtype=float)
        n = self.n_modes
        if t.shape != (n, n):
            raise ValueError(f"t must have shape {(n, n)}, got {t.shape}")
        if u.shape != (n, n, n, n):
            raise ValueError(f"u must have shape {(n,) * 4}, got {u.shape}")
        if not np.allclose(t, t.T, atol=1e-10, rtol=0):
            raise ValueError("one-body matrix t must be symmetric")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "u", u)


def build_molecular_hamiltonian(coeffs: MolecularCoefficients) -> FermionOperator:
    """``sum t_ij a+_i a_j + sum u_ijkl a+_i a+_k a_l a_j`` with zero entries skipped."""
    n = coeffs.n_modes
    prods: list[tuple[complex, tuple[Ladder, ...]]] = []
    for i, j in zip(*np.nonzero(coeffs.t)):
        prods.append((coeffs.t[i, j], ((i, CREATE), (j, ANNIHILATE))))
    for i, j, k, l in zip(*np.nonzero(coeffs.u)):
        prods.append(
            (coeffs.u[i, j, k, l], ((i, CREATE), (k, CREATE), (l, ANNIHILATE), (j, ANNIHILATE)))
        )
    return FermionOperator(n, tuple(prods))


def _act(ops: tuple[Ladder, ...], occ: int, n: int) -> tuple[int, int] | None:
    """Apply a ladder-operator product to basis index ``occ``; returns (sign, index)."""
    sign = 1
    for mode, is_create in reversed(ops):
        bit = 1 << (n - 1 - mode)
        occupied = bool(occ & bit)
        if occupied == is_create:
            return None
        # parity of modes 0..mode-1, i.e. the bits above ``bit``
        parity = bin(occ >> (n - mode)).count("1") if mode > 0 else 0
        if parity % 2:
            sign = -sign
        occ ^= bit
    return sign, occ


def fermion_matrix(op: FermionOperator, limit: int | None = None) -> np.ndarray:
    """Dense matrix of ``op`` in the occupation-number basis.

    Built by acting with each ladder operator on basis states and picking
    up the parity sign of all lower-indexed occupied modes.
    """
    n = op.n_modes
    limit = oracle_limit(DEFAULT_FERMION_ORACLE_LIMIT) if limit is None else limit
    if n > limit:
        raise OracleLimitError(f"{n} modes exceeds the fermion oracle limit of {limit}")
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, ops in op.products:
        for col in range(dim):
            hit = _act(ops, col, n)
            if hit is not None:
                sign, row = hit
                out[row, col] += coeff * sign
    return out


@lru_cache(maxsize=None)
def _ladder_pauli(mode: int, is_create: bool, n: int) -> PauliSum:
    # (X - iY)/2 creates, (X + iY)/2 annihilates; Z string on the lower modes
    prefix = "Z" * mode
    suffix = "I" * (n - mode - 1)
    sign = -0.5j if is_create else 0.5j
    return PauliSum(n, (PauliTerm(prefix + "X" + suffix, 0.5), PauliTerm(prefix + "Y" + suffix, sign)))


def jordan_wigner(op: FermionOperator) -> PauliSum:
    """Map a fermion operator to a canonical :class:`PauliSum`."""
    n = op.n_modes
    identity = PauliSum(n, (PauliTerm("I" * n, 1.0),))
    total = PauliSum(n)
    for coeff, ops in op.products:
        if coeff == 0:
            continue
        prod = identity
        for mode, is_create in ops:
            prod = prod @ _ladder_pauli(mode, is_create, n)
        total = total + prod.scaled(coeff)
    return total


def h2_hamiltonian() -> PauliSum:
    """Two-qubit reduced H2 Hamiltonian at equilibrium bond length."""
    return PauliSum.from_dict(H2_COEFFICIENTS)


def number_operator(n_modes: int) -> PauliSum:
    ops = FermionOperator(n_modes, tuple((1.0, ((i, CREATE), (i, ANNIHILATE))) for i in range(n_modes)))
    return jordan_wigner(ops).real()


def parse_coefficients(text: str, source: str | None = None) -> MolecularCoefficients:
    """Parse the ``modes`` / ``t`` / ``u`` coefficient format; unlisted entries are zero."""
    n: int | None = None
    t = u = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        key = parts[0].lower()
        try:
            if n is None:
                if key != "modes" or len(parts) != 2:
                    raise InputFormatError("first line must be 'modes <n>'", lineno, source)
                n = int(parts[1])
                if n < 1:
                    raise InputFormatError("mode count must be >= 1", lineno, source)
                t = np.zeros((n, n))
                u = np.zeros((n, n, n, n))
                continue
            if key == "t" and len(parts) == 4:
                idx = _mode_indices(parts[1:3], n)
                t[idx] = float(parts[3])
            elif key == "u" and len(parts) == 6:
                idx = _mode_indices(parts[1:5], n)
                u[idx] = float(parts[5])
            else:
                raise InputFormatError(f"unrecognised line {line!r}", lineno, source)
        except (ValueError, IndexError) as exc:
            if isinstance(exc, InputFormatError):
                raise
            raise InputFormatError(f"bad entry {line!r}: {exc}", lineno, source) from None
    if n is None:
        raise InputFormatError("missing 'modes <n>' header", None, source)
    try:
        return MolecularCoefficients(n, t, u)
    except ValueError as exc:
        raise InputFormatError(str(exc), None, source) from None


def _mode_indices(fields: Sequence[str], n: int) -> tuple[int, ...]:
    idx = tuple(int(x) for x in fields)
    if any(not 0 <= i < n for i in idx):
        raise ValueError(f"mode index out of range [0, {n})")
    return idx


def read_coefficients(path: str | os.PathLike) -> MolecularCoefficients:
    path = Path(path)
    return parse_coefficients(path.read_text(), source=str(path))


__all__ = [
    "ANNIHILATE",
    "CREATE",
    "FermionOperator",
    "H2_COEFFICIENTS",
    "MolecularCoefficients",
    "annihilate",
    "anticommutator",
    "build_molecular_hamiltonian",
    "create",
    "fermion_matrix",
    "h2_hamiltonian",
    "jordan_wigner",
    "number_operator",
    "parse_coefficients",
    "read_coefficients",
]
