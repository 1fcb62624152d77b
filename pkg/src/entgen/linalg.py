"""Dense complex linear algebra shared by every other module.

Everything here operates on plain ``numpy.ndarray`` matrices (complex128,
row-major). The heavy lifting is delegated to LAPACK via ``numpy.linalg``;
these wrappers pin down the conventions the rest of the package relies on
(descending eigenvalues, Hermiticity checks, PSD clamping).
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

# Matrices handed to the Hermitian routines must satisfy max|M - M^dag| below
# this before we trust eigh output.
HERMITIAN_TOL = 1e-10


def as_matrix(m: np.ndarray) -> np.ndarray:
    out = np.asarray(m, dtype=complex)
    if out.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {out.shape}")
    return out


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation |M - M^dag|."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return math.inf
    return float(np.abs(m - m.conj().T).max())


def assert_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if not defect <= tol:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e} > {tol:.1e})")
    # Work with the exactly-Hermitian part so eigh sees a clean input.
    return (m + m.conj().T) / 2


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced operator of ``rho`` over the subsystems listed in ``keep``.

    ``dims`` gives the local dimension of each subsystem in tensor order;
    ``rho`` must be square with total dimension prod(dims). The kept
    subsystems retain their original relative order and the trace is
    preserved.
    """
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    if any(d <= 0 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    total = math.prod(dims)
    if rho.shape != (total, total):
        raise ValueError(f"shape {rho.shape} does not match dims {dims} (total {total})")
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")

    tensor = rho.reshape(dims + dims)
    ket = [chr(ord("a") + i) for i in range(n)]
    bra = [ket[i] if i not in keep else chr(ord("a") + n + i) for i in range(n)]
    out = "".join(ket[k] for k in keep) + "".join(bra[k] for k in keep)
    reduced = np.einsum("".join(ket) + "".join(bra) + "->" + out, tensor)
    d_keep = math.prod(dims[k] for k in keep) if keep else 1
    return reduced.reshape(d_keep, d_keep)


def hermitian_eig(h: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, v)`` with ``w`` real descending and ``v[:, i]`` the
    orthonormal eigenvector for ``w[i]``.
    """
    h = assert_hermitian(h, tol)
    w, v = np.linalg.eigh(h)
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(m: np.ndarray, neg_tol: float = 1e-8) -> np.ndarray:
    """Hermitian square root of a PSD matrix.

    Eigenvalues slightly negative from roundoff (partial traces, projections)
    are clamped to zero; anything below ``-neg_tol`` is a genuine violation.
    """
    w, v = hermitian_eig(m)
    if w.min() < -neg_tol:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w.min():.3e})")
    w = np.clip(w, 0.0, None)
    s = (v * np.sqrt(w)) @ v.conj().T
    return (s + s.conj().T) / 2
