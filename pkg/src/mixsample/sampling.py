"""Pure-state estimators of mixed-state expectation values and their
worst-case error bounds.

Five estimator families are provided, addressable by string identifiers:

=============  ==========================================================
``eigen``      the ``k`` most populated eigenstates of rho, weighted by p
``eigen+ts``   same, sampling the traceless observable and adding tr(A)/N
``eigen+ts+bg``  additionally with the population background p_min removed
``rp``         ``k`` random-phase thermal wave functions
``rp+ts``      random phase with the trace shift
``rp+ts+bg``   random phase built from the reduced populations
``obs``        ``k`` backward-propagated eigenvectors of the observable
=============  ==========================================================
"""

from dataclasses import dataclass

import numpy as np

from .ensembles import DensityMatrix, split_background, split_traceless
from .linalg import eigh, hs_norm, is_hermitian

__all__ = [
    "EstimatorKind",
    "ESTIMATORS",
    "SamplingEstimate",
    "ErrorBoundReport",
    "optimal_rank_k_approx",
    "truncation_order",
    "worst_case_bound",
    "observable_bound",
    "eigenstate_estimate",
    "random_phase_states",
    "random_phase_estimate",
    "observable_estimate",
    "estimate",
    "abs_error",
    "heisenberg_diagonal_fraction",
]


@dataclass(frozen=True)
class EstimatorKind:
    family: str
    trace_shift: bool = False
    background_removal: bool = False

    def __post_init__(self):
        if self.family not in ("eigen", "rp", "obs"):
            raise ValueError(f"unknown estimator family {self.family!r}")
        if self.background_removal and not self.trace_shift:
            raise ValueError("background removal requires the trace shift")
        if self.family == "obs" and (self.trace_shift or self.background_removal):
            raise ValueError("observable-based sampling takes no enhancement flags")

    @classmethod
    def parse(cls, ident: str) -> "EstimatorKind":
        family, *flags = ident.strip().split("+")
        unknown = set(flags) - {"ts", "bg"}
        if unknown:
            raise ValueError(f"unknown estimator flags in {ident!r}")
        return cls(family, "ts" in flags, "bg" in flags)

    @property
    def ident(self) -> str:
        return "+".join(
            [self.family]
            + ["ts"] * self.trace_shift
            + ["bg"] * self.background_removal
        )

    def __str__(self):
        return self.ident


ESTIMATORS = ("eigen", "eigen+ts", "eigen+ts+bg", "rp", "rp+ts", "rp+ts+bg", "obs")


@dataclass(frozen=True)
class SamplingEstimate:
    value: float
    k: int
    kind: EstimatorKind
    seed: int | None = None


@dataclass(frozen=True)
class ErrorBoundReport:
    bound: float
    k: int
    reduced: bool = False
    side: str = "ensemble"


def truncation_order(values) -> np.ndarray:
    """Indices sorting ``values`` by descending modulus; ties keep index order."""
    return np.argsort(-np.abs(np.asarray(values)), kind="stable")


def optimal_rank_k_approx(rho, k: int) -> np.ndarray:
    """Best rank-``k`` approximation of a Hermitian matrix in HS norm.

    Keeps the ``k`` eigenvalues of largest modulus and drops the rest,
    i.e. returns ``P rho P`` for the projector onto their eigenvectors.
    """
    rho = np.asarray(rho)
    if not is_hermitian(rho):
        raise ValueError("input is not Hermitian")
    n = rho.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    es = eigh(rho)
    keep = truncation_order(es.eigenvalues)[:k]
    v = es.eigenvectors[:, keep]
    return (v * es.eigenvalues[keep]) @ v.conj().T


def _tail_norm(values, k: int) -> float:
    ordered = np.abs(np.asarray(values, dtype=float))[truncation_order(values)]
    if not 0 <= k <= ordered.size:
        raise ValueError(f"k={k} outside 0..{ordered.size}")
    return float(np.sqrt(np.sum(ordered[k:] ** 2)))


def worst_case_bound(p, k: int, reduced: bool = False) -> ErrorBoundReport:
    """Worst-case error of eigenstate sampling for unit-HS-norm observables.

    Equals the HS norm of the dropped part of rho, ``sqrt(sum_{i>k} q_i^2)``
    with ``q = p`` or, with ``reduced``, ``q = p - min(p)``.
    """
    q = np.asarray(p, dtype=float)
    if reduced:
        q = q - q.min()
    return ErrorBoundReport(_tail_norm(q, k), k, reduced, "ensemble")


def observable_bound(a_eigenvalues, k: int) -> ErrorBoundReport:
    """Worst-case error of observable sampling for unit-HS-norm states."""
    return ErrorBoundReport(_tail_norm(a_eigenvalues, k), k, False, "observable")


def _diag_expectations(psi, a) -> np.ndarray:
    return np.einsum("in,ij,jn->n", psi.conj(), a, psi).real


def _observable_part(a, kind: EstimatorKind):
    a = np.asarray(a)
    if kind.trace_shift:
        return split_traceless(a)
    return a, 0.0


def _weights(rho: DensityMatrix, kind: EstimatorKind) -> np.ndarray:
    if kind.background_removal:
        return split_background(rho)[0].populations
    return rho.populations


def _check(rho, a, plan):
    dims = {rho.dim, np.asarray(a).shape[0], plan.dim}
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch: {sorted(dims)}")


def eigenstate_estimate(rho: DensityMatrix, a, plan, k: int, kind="eigen") -> SamplingEstimate:
    """Truncated energy-basis sum over the ``k`` most populated eigenstates."""
    kind = EstimatorKind.parse(kind) if isinstance(kind, str) else kind
    _check(rho, a, plan)
    if not 1 <= k <= rho.dim:
        raise ValueError(f"k={k} outside 1..{rho.dim}")
    obs, offset = _observable_part(a, kind)
    q = _weights(rho, kind)
    # populations are stored descending, so the leading k columns are the
    # k most populated states (p' keeps the same order)
    psi = plan.forward(rho.states[:, :k])
    value = float(np.dot(q[:k], _diag_expectations(psi, obs))) + offset
    return SamplingEstimate(value, k, kind)


def random_phase_states(rho: DensityMatrix, k: int, reduced: bool = False, rng=None, basis=None) -> np.ndarray:
    """``k`` unnormalized random-phase thermal wave functions as columns.

    Column ``m`` is ``N^{-1/2} sum_j sqrt(q_j) exp(i theta_jm) |e_j>`` where
    ``|e_j>`` is the eigenbasis of ``rho`` (or ``basis`` if given, in which
    case ``q`` are the diagonal elements of rho in that basis).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = np.random.default_rng(rng)
    if basis is None:
        basis = rho.states
        q = rho.populations
    else:
        basis = np.asarray(basis)
        q = np.einsum("in,ij,jn->n", basis.conj(), rho.matrix, basis).real
    if reduced:
        q = q - q.min()
    n = q.size
    theta = rng.uniform(0.0, 2.0 * np.pi, size=(k, n)).T
    amplitudes = np.sqrt(np.clip(q, 0.0, None))[:, None] * np.exp(1j * theta)
    return basis @ amplitudes / np.sqrt(n)


def random_phase_estimate(rho: DensityMatrix, a, plan, k: int, kind="rp", rng=None) -> SamplingEstimate:
    """Monte-Carlo estimate from ``k`` random-phase thermal wave functions.

    ``rng`` may be a Generator or an integer seed; an integer is recorded in
    the returned estimate.
    """
    kind = EstimatorKind.parse(kind) if isinstance(kind, str) else kind
    _check(rho, a, plan)
    seed = rng if isinstance(rng, (int, np.integer)) else None
    obs, offset = _observable_part(a, kind)
    phi = random_phase_states(rho, k, reduced=kind.background_removal, rng=rng)
    phi = plan.forward(phi)
    value = rho.dim / k * float(np.sum(_diag_expectations(phi, obs))) + offset
    return SamplingEstimate(value, k, kind, None if seed is None else int(seed))


def observable_estimate(a, rho: DensityMatrix, plan, k: int) -> SamplingEstimate:
    """Sum over the ``k`` largest-modulus eigenpairs of ``a`` propagated
    backwards and overlapped with the initial state."""
    _check(rho, a, plan)
    if not 1 <= k <= rho.dim:
        raise ValueError(f"k={k} outside 1..{rho.dim}")
    es = eigh(a)
    keep = truncation_order(es.eigenvalues)[:k]
    back = plan.backward(es.eigenvectors[:, keep])
    overlaps = _diag_expectations(back, rho.matrix)
    value = float(np.dot(es.eigenvalues[keep], overlaps))
    return SamplingEstimate(value, k, EstimatorKind("obs"))


def estimate(ident, rho, a, plan, k, rng=None) -> SamplingEstimate:
    """Dispatch on an estimator identifier such as ``"rp+ts+bg"``."""
    kind = EstimatorKind.parse(ident) if isinstance(ident, str) else ident
    if kind.family == "eigen":
        return eigenstate_estimate(rho, a, plan, k, kind)
    if kind.family == "rp":
        return random_phase_estimate(rho, a, plan, k, kind, rng)
    return observable_estimate(a, rho, plan, k)


def abs_error(exact: float, est) -> float:
    value = est.value if isinstance(est, SamplingEstimate) else est
    return abs(exact - value)


def heisenberg_diagonal_fraction(a, plan, basis) -> float:
    """Share of ``||A(T)||_HS^2`` on the diagonal of ``basis``.

    ``basis`` is an eigensystem (or a matrix of column vectors). Values near
    one mean the evolved observable stays almost diagonal there, which is
    the regime where random-phase sampling has little left to converge.
    """
    a = np.asarray(a)
    v = getattr(basis, "eigenvectors", basis)
    v = np.asarray(v)
    if v.shape[0] != a.shape[0] or a.shape[0] != plan.dim:
        raise ValueError("dimension mismatch")
    norm2 = hs_norm(a) ** 2
    if norm2 == 0.0:
        return 0.0
    psi = plan.forward(v)
    diag = _diag_expectations(psi, a)
    return float(np.sum(diag**2) / norm2)
