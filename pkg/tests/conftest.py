import numpy as np
import pytest


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def bell_phi(sign: float = 1.0) -> np.ndarray:
    """|Phi+-> = (|00> +- |11>)/sqrt(2) as a density matrix."""
    v = np.zeros(4, dtype=complex)
    v[0] = 1.0 / np.sqrt(2.0)
    v[3] = sign / np.sqrt(2.0)
    return np.outer(v, v.conj())


def random_pure_two_qubit(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return v / np.linalg.norm(v)


def random_density(rng: np.random.Generator, dim: int = 4, rank: int | None = None) -> np.ndarray:
    rank = rank or dim
    a = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = a @ a.conj().T
    return rho / rho.trace().real


def schmidt_weights(state: np.ndarray) -> tuple[float, float]:
    lam = np.linalg.svd(state.reshape(2, 2), compute_uv=False) ** 2
    return float(lam[0]), float(lam[1])
