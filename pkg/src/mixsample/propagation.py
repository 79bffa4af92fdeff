"""Time evolution under the driven chain Hamiltonian.

The integrator is piecewise constant: over ``[t_n, t_{n+1}]`` the field is
the average of its two endpoint samples and the step propagator
``exp(-i H dt)`` is built exactly through :func:`mixsample.linalg.unitary_exp`.
A pulse with ``N_T`` samples therefore gives ``N_T - 1`` steps.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .ensembles import DensityMatrix
from .linalg import unitary_exp
from .spin_chain import ChainParams, PulseSeries, build_hamiltonian, drive_operator

__all__ = [
    "TimeGrid",
    "PropagationPlan",
    "Propagator",
    "propagate_forward",
    "propagate_backward",
    "exact_expectation",
    "heisenberg_operator",
]


@dataclass(frozen=True)
class TimeGrid:
    n_steps: int
    dt: float

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps) * self.dt


def _as_batch(states, dim):
    arr = np.asarray(states, dtype=complex)
    single = arr.ndim == 1
    if single:
        arr = arr[:, None]
    if arr.shape[0] != dim:
        raise ValueError(f"states have dimension {arr.shape[0]}, plan has {dim}")
    return arr, single


@dataclass(frozen=True)
class PropagationPlan:
    """A chain, a pulse and the time grid it is sampled on.

    States are passed as an ``(N, k)`` array of column vectors or a single
    length-``N`` vector.
    """

    chain: ChainParams
    pulse: PulseSeries
    grid: TimeGrid | None = None

    def __post_init__(self):
        if self.grid is None:
            object.__setattr__(self, "grid", TimeGrid(len(self.pulse), self.pulse.dt))
        if self.grid.n_steps != len(self.pulse):
            raise ValueError("pulse length differs from grid length")

    @property
    def dim(self) -> int:
        return self.chain.dim

    @property
    def duration(self) -> float:
        return (self.grid.n_steps - 1) * self.grid.dt

    @cached_property
    def _operators(self):
        return build_hamiltonian(self.chain), drive_operator(self.chain.n_spins)

    def step_fields(self) -> np.ndarray:
        v = self.pulse.values
        return 0.5 * (v[:-1] + v[1:])

    def step_unitaries(self):
        """Yield the step propagators in time order."""
        h0, drive = self._operators
        for f in self.step_fields():
            yield unitary_exp(h0 + f * drive, self.grid.dt)

    def forward(self, states) -> np.ndarray:
        psi, single = _as_batch(states, self.dim)
        for u in self.step_unitaries():
            psi = u @ psi
        return psi[:, 0] if single else psi

    def backward(self, states) -> np.ndarray:
        psi, single = _as_batch(states, self.dim)
        for u in reversed(list(self.step_unitaries())):
            psi = u.conj().T @ psi
        return psi[:, 0] if single else psi

    def propagator(self) -> "Propagator":
        return Propagator(self.forward(np.eye(self.dim, dtype=complex)))

    def propagators_at(self, steps) -> list:
        """Accumulated propagators after each of ``steps`` steps, in one pass.

        ``steps`` are step counts in ``0..n_steps-1``; the last one is the
        full evolution.
        """
        wanted = sorted(set(int(s) for s in steps))
        if not wanted:
            return []
        if not 0 <= wanted[0] <= wanted[-1] <= self.grid.n_steps - 1:
            raise ValueError(f"step counts must lie in 0..{self.grid.n_steps - 1}")
        u = np.eye(self.dim, dtype=complex)
        snapshots = {0: u.copy()}
        for n, step in enumerate(self.step_unitaries(), 1):
            if n > wanted[-1]:
                break
            u = step @ u
            snapshots[n] = u
        return [Propagator(snapshots[int(s)]) for s in steps]


@dataclass(frozen=True)
class Propagator:
    """A precomputed total evolution operator ``U(T)``.

    Drop-in replacement for a plan wherever states are propagated; building
    it costs one pass over the steps, after which every estimator on the
    same dynamics is a matrix product.
    """

    unitary: np.ndarray

    @property
    def dim(self) -> int:
        return self.unitary.shape[0]

    def forward(self, states) -> np.ndarray:
        psi, single = _as_batch(states, self.dim)
        psi = self.unitary @ psi
        return psi[:, 0] if single else psi

    def backward(self, states) -> np.ndarray:
        psi, single = _as_batch(states, self.dim)
        psi = self.unitary.conj().T @ psi
        return psi[:, 0] if single else psi

    def propagator(self) -> "Propagator":
        return self


def propagate_forward(plan, states) -> np.ndarray:
    """Apply ``U(T)`` to each state."""
    return plan.forward(states)


def propagate_backward(plan, states) -> np.ndarray:
    """Apply ``U(T)^dagger`` to each state."""
    return plan.backward(states)


def _check_dims(*dims):
    if len(set(dims)) != 1:
        raise ValueError(f"dimension mismatch: {dims}")


def exact_expectation(rho: DensityMatrix, a, plan) -> float:
    """Full-basis reference value ``tr(A U rho U^dagger)``."""
    a = np.asarray(a)
    _check_dims(rho.dim, a.shape[0], plan.dim)
    psi = plan.forward(rho.states)
    diag = np.einsum("in,ij,jn->n", psi.conj(), a, psi)
    value = complex(np.dot(rho.populations, diag))
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise ArithmeticError(f"expectation value has imaginary part {value.imag}")
    return value.real


def heisenberg_operator(a, plan) -> np.ndarray:
    """``A(T) = U^dagger A U`` via the accumulated propagator."""
    u = plan.propagator().unitary
    return u.conj().T @ np.asarray(a) @ u
