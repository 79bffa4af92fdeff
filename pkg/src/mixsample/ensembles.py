"""Initial mixed states: thermal ensembles, purity control and the identity
splittings (background and trace) used by the enhanced estimators."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .linalg import eigh, is_hermitian

__all__ = [
    "DensityMatrix",
    "thermal_state",
    "thermal_populations",
    "purity",
    "beta_for_purity",
    "split_background",
    "split_traceless",
    "population_residuum",
]

_POP_TOL = 1e-12
_TRACE_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """A density operator stored through its eigensystem.

    ``populations`` are sorted descending and ``states[:, n]`` is the
    eigenvector carrying ``populations[n]``. Reduced states (background
    removed) set ``reduced=True`` and skip the unit-trace check.
    """

    populations: np.ndarray
    states: np.ndarray
    reduced: bool = False

    def __post_init__(self):
        p = self.populations
        if p.ndim != 1 or self.states.shape != (p.size, p.size):
            raise ValueError("populations and states have inconsistent shapes")
        if not np.all(np.isfinite(p)):
            raise ValueError("populations must be finite")
        if np.any(p < -_POP_TOL):
            raise ValueError("density matrix has negative populations")
        if np.any(np.diff(p) > _POP_TOL):
            raise ValueError("populations must be sorted descending")
        if not self.reduced and abs(p.sum() - 1.0) > _TRACE_TOL:
            raise ValueError(f"trace {p.sum()} differs from 1")

    @classmethod
    def from_matrix(cls, rho) -> "DensityMatrix":
        rho = np.asarray(rho)
        es = eigh(rho)
        order = np.argsort(-es.eigenvalues, kind="stable")
        p = es.eigenvalues[order]
        p = np.where(np.abs(p) < _POP_TOL, 0.0, p)
        return cls(p, es.eigenvectors[:, order])

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls.from_matrix(np.outer(psi, psi.conj()))

    @property
    def dim(self) -> int:
        return self.populations.size

    @property
    def matrix(self) -> np.ndarray:
        v = self.states
        return (v * self.populations) @ v.conj().T

    def trace(self) -> float:
        return float(self.populations.sum())


def thermal_populations(energies, beta: float) -> np.ndarray:
    """Boltzmann weights for ascending ``energies``.

    Energies are shifted by their minimum before exponentiation, so very
    large ``beta`` cannot overflow. ``beta = inf`` spreads the weight evenly
    over the (possibly degenerate) ground level.
    """
    e = np.asarray(energies, dtype=float)
    if beta < 0 or math.isnan(beta):
        raise ValueError("beta must be nonnegative")
    shifted = e - e.min()
    if math.isinf(beta):
        scale = max(1.0, float(np.max(np.abs(e))))
        w = (shifted <= 1e-12 * scale).astype(float)
    else:
        w = np.exp(-beta * shifted)
    return w / w.sum()


def thermal_state(h0, beta: float) -> DensityMatrix:
    """Canonical ensemble ``exp(-beta h0) / Z`` in the eigenbasis of ``h0``."""
    es = eigh(h0)
    # eigh is ascending in energy, hence descending in population
    return DensityMatrix(thermal_populations(es.eigenvalues, beta), es.eigenvectors)


def purity(rho: DensityMatrix) -> float:
    return float(np.sum(rho.populations**2))


def beta_for_purity(h0, target: float, energies=None) -> float:
    """Inverse temperature at which the thermal state of ``h0`` has the
    given purity.

    ``target = 1/N`` returns 0 and ``target = 1`` returns ``inf``. Pass
    ``energies`` to skip the diagonalization when the spectrum is known.
    """
    e = np.sort(eigh(h0).eigenvalues if energies is None else np.asarray(energies))
    n = e.size
    if not 1.0 / n - 1e-12 <= target <= 1.0 + 1e-12:
        raise ValueError(f"purity {target} outside [1/{n}, 1]")
    if target <= 1.0 / n + 1e-15:
        return 0.0
    if target >= 1.0 - 1e-15:
        return math.inf

    def gap(beta):
        return float(np.sum(thermal_populations(e, beta) ** 2)) - target

    ceiling = gap(math.inf) + target
    if target >= ceiling - 1e-12:
        raise ValueError(
            f"purity {target} unreachable: degenerate ground level caps it at {ceiling}"
        )
    hi = 1.0 / max(float(e[-1] - e[0]), 1e-300)
    while gap(hi) < 0:
        hi *= 2.0
    beta = brentq(gap, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    return float(beta)


def split_background(rho: DensityMatrix) -> tuple[DensityMatrix, float]:
    """Remove the identity component ``p_min * 1`` from ``rho``.

    Returns the reduced state on the same eigenvectors and ``p_min``.
    """
    p_min = float(rho.populations.min())
    reduced = DensityMatrix(rho.populations - p_min, rho.states, reduced=True)
    return reduced, p_min


def split_traceless(a) -> tuple[np.ndarray, float]:
    """Split ``a = a0 + lambda0 * 1`` with ``tr(a0) = 0``."""
    a = np.asarray(a)
    if not is_hermitian(a):
        raise ValueError("observable is not Hermitian")
    n = a.shape[0]
    lambda0 = float(np.trace(a).real) / n
    return a - lambda0 * np.eye(n), lambda0


def population_residuum(p, k: int) -> float:
    """Total population outside the ``k`` most populated states."""
    p = np.asarray(p, dtype=float)
    if not 0 <= k <= p.size:
        raise ValueError(f"k={k} outside 0..{p.size}")
    return float(np.sum(p[k:]))
