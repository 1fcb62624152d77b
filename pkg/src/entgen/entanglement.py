"""Concurrence, phase-flip dephasing, and entanglement monotones.

Mixed two-qubit concurrence follows Wootters' eigenvalue formula evaluated
through the Hermitian route R = sqrt(sqrt(rho) rho~ sqrt(rho)), which reuses
the PSD machinery in :mod:`entgen.linalg` and avoids the non-normal product
rho rho~. Pure bipartite states use the Schmidt form 2 sqrt(l0 l1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import linalg

DENSITY_HERMITIAN_TOL = 1e-10
DENSITY_TRACE_TOL = 1e-10
DENSITY_EIG_FLOOR = -1e-9

PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_YY = np.kron(PAULI_Y, PAULI_Y)


def damping_factor(u: float, transmittance: float) -> float:
    """Coherence survival u^{(1-T)/T} of a pulse overlap u through loss.

    The u -> 0+ limit is 0 for T < 1 and 1 for T = 1 (exponent 0), removing
    the 0^0 ambiguity at the lossless point.
    """
    if not 0.0 <= u <= 1.0 + 1e-12:
        raise ValueError(f"overlap must lie in [0, 1], got {u}")
    if not 0.0 < transmittance <= 1.0:
        raise ValueError(f"transmittance must lie in (0, 1], got {transmittance}")
    if transmittance == 1.0:
        return 1.0
    if u == 0.0:
        return 0.0
    u = min(u, 1.0)
    return math.exp((1.0 - transmittance) / transmittance * math.log(u))


def check_two_qubit_density(rho: np.ndarray) -> np.ndarray:
    """Validate a 4x4 density matrix (Hermitian, unit trace, PSD up to noise)."""
    rho = linalg.as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    defect = linalg.hermiticity_defect(rho)
    if not defect <= DENSITY_HERMITIAN_TOL:
        raise ValueError(f"density matrix is not Hermitian (defect {defect:.3e})")
    tr = rho.trace()
    if abs(tr - 1.0) > DENSITY_TRACE_TOL:
        raise ValueError(f"density matrix trace {tr} is not 1")
    rho = (rho + rho.conj().T) / 2
    w = np.linalg.eigvalsh(rho)
    if w.min() < DENSITY_EIG_FLOOR:
        raise ValueError(f"density matrix is not PSD (min eigenvalue {w.min():.3e})")
    return rho


def concurrence_wootters(rho: np.ndarray) -> float:
    """Wootters concurrence max(0, mu1 - mu2 - mu3 - mu4) of a two-qubit state.

    The mu_i are the descending eigenvalues of R = sqrt(sqrt(rho) rho~ sqrt(rho))
    with rho~ = (Y x Y) rho* (Y x Y). Since rho* = rho^T for Hermitian rho,
    R^2 = A A^dag with A = sqrt(rho) (Y x Y) sqrt(rho)^T, so the mu_i are the
    singular values of A. Evaluating them by SVD keeps absolute accuracy at
    machine epsilon; taking square roots of eigenvalues of R^2 would blow
    the roundoff in the vanishing mu_i up to ~1e-8.
    """
    rho = check_two_qubit_density(rho)
    s = linalg.psd_sqrt(rho)
    a = s @ _YY @ s.T
    mu = np.linalg.svd(a, compute_uv=False)
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def concurrence_pure(schmidt: tuple[float, float]) -> float:
    """Concurrence 2 sqrt(l0 l1) of a pure bipartite state from its Schmidt weights."""
    l0, l1 = (float(v) for v in schmidt)
    if l0 < 0.0 or l1 < 0.0:
        raise ValueError(f"Schmidt coefficients must be nonnegative, got {schmidt}")
    if abs(l0 + l1 - 1.0) > 1e-12:
        raise ValueError(f"Schmidt coefficients must sum to 1, got {l0 + l1}")
    return 2.0 * math.sqrt(l0 * l1)


@dataclass(frozen=True)
class PhaseFlipChannel:
    """Phase flip on the first qubit: rho -> f rho + (1-f) (Z x I) rho (Z x I)."""

    f: float

    def __post_init__(self) -> None:
        if not 0.5 <= self.f <= 1.0 + 1e-12:
            raise ValueError(f"flip-free weight must lie in [1/2, 1], got {self.f}")

    @classmethod
    def from_overlap(cls, overlap: float, transmittance: float) -> "PhaseFlipChannel":
        """Channel with f = (1 + u^{(1-T)/T})/2 induced by pulse overlap u and loss T."""
        return cls((1.0 + damping_factor(overlap, transmittance)) / 2.0)

    @property
    def u_pow(self) -> float:
        """Coherence scale 2f - 1 applied to Z-basis off-diagonals."""
        return 2.0 * self.f - 1.0


def apply_phase_flip(rho: np.ndarray, ch: PhaseFlipChannel) -> np.ndarray:
    rho = check_two_qubit_density(rho)
    z = np.kron(PAULI_Z, np.eye(2))
    return ch.f * rho + (1.0 - ch.f) * (z @ rho @ z)


def reduce_rank2_qubit_qudit(rho: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Compress a qubit x qudit state onto the qudit side's 2-dim support.

    Valid whenever the reduced qudit operator has at most two eigenvalues
    above ``tol`` (e.g. any local dephasing of a pure state whose Schmidt
    rank is 2); the compression is an isometry, so entanglement between the
    qubit and the qudit is unchanged. Returns a 4x4 density matrix.
    """
    rho = linalg.as_matrix(rho)
    n = rho.shape[0]
    if rho.shape[1] != n or n % 2 != 0 or n < 4:
        raise ValueError(f"expected a (2D)x(2D) matrix with D >= 2, got shape {rho.shape}")
    d = n // 2
    qudit = linalg.partial_trace(rho, [2, d], keep=[1])
    w, v = linalg.hermitian_eig(qudit)
    if np.count_nonzero(w > tol) > 2:
        raise ValueError(
            f"rank-2 reduction invalid: qudit support has {np.count_nonzero(w > tol)} "
            f"eigenvalues above tol={tol:.1e}"
        )
    basis = v[:, :2]  # columns span the support
    iso = np.kron(np.eye(2), basis)  # (2d x 4) isometry
    out = iso.conj().T @ rho @ iso
    out = (out + out.conj().T) / 2
    tr = float(out.trace().real)
    if tr <= 0.0:
        raise ValueError("rank-2 reduction invalid: compressed state has nonpositive trace")
    return out / tr


# ---------------------------------------------------------------------------
# Entanglement monotones E(C)
# ---------------------------------------------------------------------------

ArrayLike = Union[float, np.ndarray]


def _binary_entropy(p: ArrayLike) -> ArrayLike:
    p = np.clip(p, 0.0, 1.0)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0) - np.where(
            q > 0, q * np.log2(np.where(q > 0, q, 1.0)), 0.0
        )
    return out


def _eof_from_concurrence(c: ArrayLike) -> ArrayLike:
    c = np.asarray(c, dtype=float)
    arg = (1.0 + np.sqrt(np.clip(1.0 - c * c, 0.0, None))) / 2.0
    out = _binary_entropy(arg)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Monotone:
    """A convex nondecreasing function of the concurrence with E(0) = 0.

    ``fn`` must accept floats or numpy arrays. Additional monotones can be
    supplied as (name, function) pairs through this class directly.
    """

    name: str
    fn: Callable[[ArrayLike], ArrayLike]

    def __call__(self, c: ArrayLike) -> ArrayLike:
        return self.fn(c)


CONCURRENCE = Monotone("concurrence", lambda c: c)
EOF_MONOTONE = Monotone("eof", _eof_from_concurrence)

_MONOTONES = {
    "concurrence": CONCURRENCE,
    "eof": EOF_MONOTONE,
    "entanglement-of-formation": EOF_MONOTONE,
}


def monotone(name: str) -> Monotone:
    try:
        return _MONOTONES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown monotone {name!r}; choose from {sorted(_MONOTONES)}") from None


def monotone_value(mono: Monotone, c: float) -> float:
    """Evaluate E(C) for a single concurrence value in [0, 1] (1e-12 slack)."""
    c = float(c)
    if c < -1e-12 or c > 1.0 + 1e-12:
        raise ValueError(f"concurrence must lie in [0, 1], got {c}")
    return float(mono(min(max(c, 0.0), 1.0)))
