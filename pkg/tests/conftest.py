from __future__ import annotations

import numpy as np
import pytest

# H2 Pauli coefficients (Hartree) and the ground energy of the resulting 4x4
# matrix, diagonalised once with plain numpy before any package code existed.
H2_F = (-1.0524, 0.01128, 0.3979, 0.3979, 0.1809)
H2_GROUND = -1.8572219850484373

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def h2_dense() -> np.ndarray:
    f0, f1, f2, f3, f4 = H2_F
    return (
        f0 * np.kron(I2, I2)
        + f1 * np.kron(Z, Z)
        + f2 * np.kron(Z, I2)
        + f3 * np.kron(I2, Z)
        + f4 * np.kron(X, X)
    )


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) ** 2)


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
