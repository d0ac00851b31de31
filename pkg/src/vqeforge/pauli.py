"""Pauli-string algebra.

A Pauli string is stored as a plain ``str`` over ``IXYZ``. Index 0 is the
leftmost Kronecker factor, which is also the most significant bit of a
state-vector index (see :mod:`vqeforge.statevec`).
"""

from __future__ import annotations

import cmath
import math
import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import reduce
from pathlib import Path

import numpy as np

from .errors import InputFormatError, OracleLimitError

PAULI_CHARS = "IXYZ"
DROP_TOLERANCE = 1e-12
DEFAULT_ORACLE_LIMIT = 12

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-qubit products: (a, b) -> (phase, a*b)
_PRODUCT_TABLE: dict[tuple[str, str], tuple[complex, str]] = {}
for _a in PAULI_CHARS:
    for _b in PAULI_CHARS:
        if _a == "I":
            _PRODUCT_TABLE[_a, _b] = (1, _b)
        elif _b == "I":
            _PRODUCT_TABLE[_a, _b] = (1, _a)
        elif _a == _b:
            _PRODUCT_TABLE[_a, _b] = (1, "I")
        else:
            _c = ({"X", "Y", "Z"} - {_a, _b}).pop()
            _cyclic = (_a + _b) in ("XY", "YZ", "ZX")
            _PRODUCT_TABLE[_a, _b] = (1j if _cyclic else -1j, _c)


def oracle_limit(default: int = DEFAULT_ORACLE_LIMIT) -> int:
    """Qubit cap for dense oracles, overridable via ``VQEFORGE_ORACLE_LIMIT``."""
    raw = os.environ.get("VQEFORGE_ORACLE_LIMIT")
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"VQEFORGE_ORACLE_LIMIT must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class PauliTerm:
    """A weighted Pauli string ``coeff * ops[0] (x) ops[1] (x) ...``."""

    ops: str
    coeff: complex = 1.0

    def __post_init__(self) -> None:
        ops = self.ops.upper() if isinstance(self.ops, str) else "".join(self.ops).upper()
        if len(ops) < 1:
            raise ValueError("Pauli string must act on at least one qubit")
        bad = set(ops) - set(PAULI_CHARS)
        if bad:
            raise ValueError(f"illegal Pauli character(s) {''.join(sorted(bad))!r} in {ops!r}")
        coeff = complex(self.coeff)
        if not (cmath.isfinite(coeff)):
            raise ValueError(f"coefficient must be finite, got {coeff}")
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "coeff", coeff)

    @property
    def n(self) -> int:
        return len(self.ops)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, p in enumerate(self.ops) if p != "I")

    def is_identity(self) -> bool:
        return set(self.ops) <= {"I"}

    def is_diagonal(self) -> bool:
        return set(self.ops) <= {"I", "Z"}

    def scaled(self, factor: complex) -> PauliTerm:
        return PauliTerm(self.ops, self.coeff * factor)

    def __mul__(self, other):
        if isinstance(other, PauliTerm):
            return multiply(self, other)
        return self.scaled(other)

    def __rmul__(self, other):
        return self.scaled(other)

    def __str__(self) -> str:
        c = self.coeff
        text = repr(c.real) if c.imag == 0 else repr(c)
        return f"{text} {self.ops}"


def parse_pauli(text: str, n: int) -> PauliTerm:
    """Parse ``"<coeff> <IXYZ string>"`` into a :class:`PauliTerm` on ``n`` qubits."""
    parts = text.split()
    if len(parts) != 2:
        raise InputFormatError(f"expected '<coeff> <pauli string>', got {text!r}")
    raw_coeff, ops = parts
    try:
        coeff: complex = float(raw_coeff)
    except ValueError:
        try:
            coeff = complex(raw_coeff)
        except ValueError:
            raise InputFormatError(f"malformed coefficient {raw_coeff!r}") from None
    if not cmath.isfinite(coeff):
        raise InputFormatError(f"coefficient must be finite, got {raw_coeff!r}")
    ops = ops.upper()
    bad = set(ops) - set(PAULI_CHARS)
    if bad:
        raise InputFormatError(f"illegal character(s) {''.join(sorted(bad))!r} in Pauli string {ops!r}")
    if len(ops) != n:
        raise InputFormatError(f"Pauli string {ops!r} has length {len(ops)}, expected {n}")
    return PauliTerm(ops, coeff)


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Operator product ``a @ b`` with the accumulated phase folded into the coefficient."""
    if a.n != b.n:
        raise ValueError(f"cannot multiply Pauli strings on {a.n} and {b.n} qubits")
    phase: complex = 1
    out = []
    for pa, pb in zip(a.ops, b.ops):
        ph, pc = _PRODUCT_TABLE[pa, pb]
        phase *= ph
        out.append(pc)
    return PauliTerm("".join(out), a.coeff * b.coeff * phase)


def commutes(a: PauliTerm, b: PauliTerm) -> bool:
    """General commutation: an even number of anticommuting factor pairs."""
    anti = sum(1 for pa, pb in zip(a.ops, b.ops) if pa != "I" and pb != "I" and pa != pb)
    return anti % 2 == 0


def qubitwise_commute(a: PauliTerm, b: PauliTerm) -> bool:
    """True when on every qubit the two factors agree or one of them is ``I``."""
    return all(pa == "I" or pb == "I" or pa == pb for pa, pb in zip(a.ops, b.ops))


@dataclass(frozen=True)
class PauliSum:
    """A linear combination of Pauli strings plus a real constant offset.

    Instances are always canonical: one term per Pauli string (first-seen
    order kept) and no term with ``|coeff| < DROP_TOLERANCE``.
    """

    n: int
    terms: tuple[PauliTerm, ...] = ()
    offset: float = 0.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("PauliSum needs at least one qubit")
        for t in self.terms:
            if t.n != self.n:
                raise ValueError(f"term {t.ops!r} acts on {t.n} qubits, sum declares {self.n}")
        offset = float(self.offset)
        if not math.isfinite(offset):
            raise ValueError("offset must be finite")
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "terms", _canonical_terms(self.terms))

    @classmethod
    def from_terms(cls, terms: Iterable[PauliTerm], n: int | None = None, offset: float = 0.0) -> PauliSum:
        terms = tuple(terms)
        if n is None:
            if not terms:
                raise ValueError("cannot infer qubit count from an empty term list")
            n = terms[0].n
        return cls(n, terms, offset)

    @classmethod
    def from_dict(cls, mapping: dict[str, complex], offset: float = 0.0) -> PauliSum:
        terms = [PauliTerm(ops, c) for ops, c in mapping.items()]
        return cls.from_terms(terms, offset=offset)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def coefficient(self, ops: str) -> complex:
        for t in self.terms:
            if t.ops == ops:
                return t.coeff
        return 0.0

    def as_dict(self) -> dict[str, complex]:
        return {t.ops: t.coeff for t in self.terms}

    def is_real(self, tol: float = DROP_TOLERANCE) -> bool:
        return all(abs(t.coeff.imag) <= tol for t in self.terms)

    def is_diagonal(self) -> bool:
        return all(t.is_diagonal() for t in self.terms)

    def real(self, tol: float = 1e-10) -> PauliSum:
        """Drop imaginary parts, refusing if any exceeds ``tol``."""
        worst = max((abs(t.coeff.imag) for t in self.terms), default=0.0)
        if worst > tol:
            raise ValueError(f"imaginary coefficient part {worst:.3g} exceeds {tol:g}")
        return PauliSum(self.n, tuple(PauliTerm(t.ops, t.coeff.real) for t in self.terms), self.offset)

    def adjoint(self) -> PauliSum:
        return PauliSum(self.n, tuple(PauliTerm(t.ops, t.coeff.conjugate()) for t in self.terms), self.offset)

    def scaled(self, factor: complex) -> PauliSum:
        factor = complex(factor)
        if factor.imag != 0 and self.offset != 0:
            raise ValueError("complex scaling of a PauliSum with a real offset is not representable")
        return PauliSum(self.n, tuple(t.scaled(factor) for t in self.terms), self.offset * factor.real)

    def __add__(self, other) -> PauliSum:
        if isinstance(other, PauliTerm):
            other = PauliSum(other.n, (other,))
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"cannot add sums on {self.n} and {other.n} qubits")
        return PauliSum(self.n, self.terms + other.terms, self.offset + other.offset)

    __radd__ = __add__

    def __sub__(self, other) -> PauliSum:
        if isinstance(other, PauliTerm):
            other = PauliSum(other.n, (other,))
        return self + other.scaled(-1)

    def __neg__(self) -> PauliSum:
        return self.scaled(-1)

    def __mul__(self, other) -> PauliSum:
        if isinstance(other, (PauliSum, PauliTerm)):
            return self @ other
        return self.scaled(other)

    def __rmul__(self, other) -> PauliSum:
        return self.scaled(other)

    def __matmul__(self, other) -> PauliSum:
        """Operator product, offsets folded in as identity terms."""
        if isinstance(other, PauliTerm):
            other = PauliSum(other.n, (other,))
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"cannot multiply sums on {self.n} and {other.n} qubits")
        left = self._with_offset_as_term()
        right = other._with_offset_as_term()
        products = [multiply(a, b) for a in left for b in right]
        return PauliSum(self.n, tuple(products))

    def _with_offset_as_term(self) -> tuple[PauliTerm, ...]:
        if self.offset == 0:
            return self.terms
        return self.terms + (PauliTerm("I" * self.n, self.offset),)

    def canonical(self) -> PauliSum:
        return PauliSum(self.n, self.terms, self.offset)

    def __str__(self) -> str:
        lines = [str(t) for t in self.terms]
        if self.offset:
            lines.append(f"{self.offset!r} {'I' * self.n}")
        return "\n".join(lines)


def _canonical_terms(terms: Sequence[PauliTerm]) -> tuple[PauliTerm, ...]:
    merged: dict[str, complex] = {}
    for t in terms:
        merged[t.ops] = merged.get(t.ops, 0) + t.coeff
    return tuple(PauliTerm(ops, c) for ops, c in merged.items() if abs(c) >= DROP_TOLERANCE)


def term_matrix(term: PauliTerm) -> np.ndarray:
    """Dense ``coeff * kron(factors)`` for one term."""
    mat = reduce(np.kron, (PAULI_MATRICES[p] for p in term.ops))
    return term.coeff * mat


def to_matrix(h: PauliSum | PauliTerm, limit: int | None = None) -> np.ndarray:
    """Dense Kronecker-product matrix of a sum; the exact-diagonalisation oracle."""
    if isinstance(h, PauliTerm):
        h = PauliSum(h.n, (h,))
    limit = oracle_limit() if limit is None else limit
    if h.n > limit:
        raise OracleLimitError(f"{h.n} qubits exceeds the dense-oracle limit of {limit}")
    dim = 2**h.n
    out = h.offset * np.eye(dim, dtype=complex)
    for t in h.terms:
        out += term_matrix(t)
    return out


def group_commuting(h: PauliSum) -> list[list[PauliTerm]]:
    """Greedy first-fit partition into qubit-wise commuting groups.

    Terms are visited in insertion order; each goes into the first group
    whose members all commute with it qubit-wise.
    """
    groups: list[list[PauliTerm]] = []
    for term in h.terms:
        for group in groups:
            if all(qubitwise_commute(term, other) for other in group):
                group.append(term)
                break
        else:
            groups.append([term])
    return groups


def measurement_basis(group: Sequence[PauliTerm]) -> str:
    """Per-qubit basis letter shared by a qubit-wise commuting group (``Z`` where free)."""
    n = group[0].n
    basis = ["Z"] * n
    seen = [False] * n
    for term in group:
        for q, p in enumerate(term.ops):
            if p == "I":
                continue
            if seen[q] and basis[q] != p:
                raise ValueError(f"terms disagree on qubit {q}: not qubit-wise commuting")
            basis[q] = p
            seen[q] = True
    return "".join(basis)


def parse_hamiltonian(text: str, source: str | None = None) -> PauliSum:
    """Parse Hamiltonian text: one ``<real coeff> <IXYZ string>`` per line, ``#`` comments."""
    terms: list[PauliTerm] = []
    n: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputFormatError(f"expected '<coeff> <pauli string>', got {line!r}", lineno, source)
        if n is None:
            n = len(parts[1])
        try:
            term = parse_pauli(line, n)
        except InputFormatError as exc:
            raise InputFormatError(str(exc), lineno, source) from None
        if term.coeff.imag != 0:
            raise InputFormatError(f"Hamiltonian coefficients must be real, got {parts[0]!r}", lineno, source)
        terms.append(term)
    if n is None:
        raise InputFormatError("no Hamiltonian terms found", None, source)
    return PauliSum(n, tuple(terms))


def read_hamiltonian(path: str | os.PathLike) -> PauliSum:
    path = Path(path)
    return parse_hamiltonian(path.read_text(), source=str(path))


def format_hamiltonian(h: PauliSum) -> str:
    h = h.real()
    lines = [f"{t.coeff.real!r} {t.ops}" for t in h.terms]
    if h.offset:
        lines.append(f"{h.offset!r} {'I' * h.n}")
    return "\n".join(lines) + "\n"


def write_hamiltonian(h: PauliSum, path: str | os.PathLike) -> None:
    Path(path).write_text(format_hamiltonian(h))


__all__ = [
    "PAULI_MATRICES",
    "PauliSum",
    "PauliTerm",
    "commutes",
    "format_hamiltonian",
    "group_commuting",
    "measurement_basis",
    "multiply",
    "oracle_limit",
    "parse_hamiltonian",
    "parse_pauli",
    "qubitwise_commute",
    "read_hamiltonian",
    "term_matrix",
    "to_matrix",
    "write_hamiltonian",
]
