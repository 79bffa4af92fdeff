"""Dense complex-matrix primitives: Hilbert-Schmidt geometry, Hermitian
eigendecomposition and single-step unitary exponentials.

Every diagonalization and every matrix exponential in the package goes
through :func:`eigh`, so there is exactly one numerical code path to trust.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HERMITIAN_TOL",
    "HermitianEigensystem",
    "as_matrix",
    "hs_inner",
    "hs_norm",
    "is_hermitian",
    "eigh",
    "unitary_exp",
    "commutator",
]

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class HermitianEigensystem:
    """Eigenvalues (ascending) and matching unit eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a) -> np.ndarray:
    """Validate a square, finite matrix and return it as an ndarray."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``tr(a^dagger b)``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    # tr(a^H b) = sum_ij conj(a_ij) b_ij
    return complex(np.vdot(a, b))


def hs_norm(a) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(as_matrix(a), "fro"))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    a = as_matrix(a)
    return hs_norm(a - a.conj().T) <= tol * max(1.0, hs_norm(a))


def eigh(a) -> HermitianEigensystem:
    """Diagonalize a Hermitian matrix.

    Real symmetric input (all spin-chain Hamiltonians here) is routed to the
    real solver, which is several times faster and gives real eigenvectors.

    Raises
    ------
    ValueError
        If ``a`` is not Hermitian within ``HERMITIAN_TOL``.
    numpy.linalg.LinAlgError
        If the decomposition does not converge.
    """
    a = as_matrix(a)
    if not is_hermitian(a):
        raise ValueError("matrix is not Hermitian")
    if np.iscomplexobj(a) and not np.any(a.imag):
        a = a.real
    w, v = np.linalg.eigh(a)
    return HermitianEigensystem(w, v)


def unitary_exp(h, dt: float) -> np.ndarray:
    """Return ``exp(-i h dt)`` for Hermitian ``h`` (hbar = 1)."""
    if not np.isfinite(dt):
        raise ValueError("time step must be finite")
    es = eigh(h)
    v = es.eigenvectors
    return (v * np.exp(-1j * dt * es.eigenvalues)) @ v.conj().T


def commutator(a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    return a @ b - b @ a
