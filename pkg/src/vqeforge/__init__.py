"""State-vector simulation and variational algorithms for small quantum systems."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import InputFormatError, NumericError, OracleLimitError, VqeForgeError
from .pauli import PauliSum, PauliTerm, parse_hamiltonian, read_hamiltonian, to_matrix
from .statevec import Circuit, QuantumState, run, zero_state

__all__ = [
    "Circuit",
    "InputFormatError",
    "NumericError",
    "OracleLimitError",
    "PauliSum",
    "PauliTerm",
    "QuantumState",
    "VqeForgeError",
    "parse_hamiltonian",
    "read_hamiltonian",
    "run",
    "to_matrix",
    "zero_state",
    "__version__",
]
