"""Model system: a driven Heisenberg spin chain with open boundaries.

    H(t) = -J sum_j s_j . s_{j+1} - h_z sum_j sz_j + field(t) sum_j sx_j

plus the randomized ingredients of the benchmark: band-limited Gaussian
pulses, random local observables, and the total polarization.
"""

import math
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations

import numpy as np

from .linalg import hs_norm

__all__ = [
    "PAULI",
    "ChainParams",
    "PulseSpec",
    "PulseSeries",
    "ObservableSpec",
    "SPECTRUM_PRESETS",
    "pauli_site",
    "pauli_string",
    "build_hamiltonian",
    "drive_operator",
    "sample_pulse",
    "pulse_from_amplitudes",
    "total_polarization",
    "observable_from_coefficients",
    "random_observable",
    "add_identity_offset",
]

PAULI = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
AXES = ("x", "y", "z")


@dataclass(frozen=True)
class ChainParams:
    n_spins: int
    J: float = 1.0
    h_z: float = 0.002

    def __post_init__(self):
        if int(self.n_spins) != self.n_spins or self.n_spins < 2:
            raise ValueError("a chain needs n_spins >= 2")

    @property
    def dim(self) -> int:
        return 2**self.n_spins


# (J, h_z) presets whose low-lying level density goes from high to low;
# used by the spectrum comparison study.
SPECTRUM_PRESETS = {
    "dense": (1.0, 0.002),
    "medium": (1.0, 0.5),
    "sparse": (0.25, 1.0),
}


def pauli_string(ops: dict, n_spins: int) -> np.ndarray:
    """Kronecker product with ``ops[site]`` (1-based) and identity elsewhere."""
    factors = [PAULI[ops.get(site, "i")] for site in range(1, n_spins + 1)]
    return reduce(np.kron, factors)


def pauli_site(axis: str, site: int, n_spins: int) -> np.ndarray:
    """Single-spin Pauli operator ``sigma^axis`` acting on ``site`` (1-based)."""
    if axis not in AXES:
        raise ValueError(f"unknown axis {axis!r}")
    if not 1 <= site <= n_spins:
        raise ValueError(f"site {site} outside 1..{n_spins}")
    return pauli_string({site: axis}, n_spins)


def _field_free(params: ChainParams) -> np.ndarray:
    n = params.n_spins
    h = np.zeros((params.dim, params.dim), dtype=complex)
    for j in range(1, n):
        for a in AXES:
            h -= params.J * pauli_string({j: a, j + 1: a}, n)
    for j in range(1, n + 1):
        h -= params.h_z * pauli_site("z", j, n)
    return h


def drive_operator(n_spins: int) -> np.ndarray:
    """``sum_j sigma^x_j``, the operator the pulse couples to."""
    return sum(pauli_site("x", j, n_spins) for j in range(1, n_spins + 1))


def build_hamiltonian(params: ChainParams, field: float = 0.0) -> np.ndarray:
    h = _field_free(params)
    if field:
        h = h + field * drive_operator(params.n_spins)
    return h


def total_polarization(n_spins: int) -> np.ndarray:
    if n_spins < 1:
        raise ValueError("n_spins must be positive")
    return sum(pauli_site("z", j, n_spins) for j in range(1, n_spins + 1))


@dataclass(frozen=True)
class PulseSpec:
    """Parameters of a random band-limited pulse.

    ``dt`` and ``t_center`` default to a grid of total duration ``6 tau``
    with the envelope centred in it.
    """

    e_max: float = 1.0
    tau: float = 170.0
    n_steps: int = 1024
    dt: float | None = None
    t_center: float | None = None
    bandwidth_fraction: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.n_steps < 2:
            raise ValueError("n_steps must be >= 2")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not 0 < self.bandwidth_fraction <= 1:
            raise ValueError("bandwidth_fraction must lie in (0, 1]")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")

    @property
    def step(self) -> float:
        return self.dt if self.dt is not None else 6.0 * self.tau / self.n_steps

    @property
    def center(self) -> float:
        if self.t_center is not None:
            return self.t_center
        return 0.5 * self.n_steps * self.step

    @property
    def n_frequencies(self) -> int:
        return math.ceil(self.bandwidth_fraction * self.n_steps)

    def times(self) -> np.ndarray:
        return np.arange(self.n_steps) * self.step


@dataclass(frozen=True)
class PulseSeries:
    values: np.ndarray
    grid: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ValueError("pulse values and grid differ in length")

    @property
    def dt(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def __len__(self):
        return len(self.values)


def _envelope(t, spec: PulseSpec) -> np.ndarray:
    # Gaussian shifted down by its value at the grid start and clipped,
    # so the field switches on from exactly zero.
    gauss = np.exp(-((t - spec.center) ** 2) / (2 * spec.tau**2))
    edge = math.exp(-((spec.center) ** 2) / (2 * spec.tau**2))
    return np.clip((gauss - edge) / (1.0 - edge), 0.0, None)


def pulse_from_amplitudes(spec: PulseSpec, amplitudes, t=None) -> np.ndarray:
    """Evaluate the windowed Fourier sum for given frequency amplitudes.

    ``t`` defaults to the grid of ``spec``; any other times (e.g. a refined grid)
    evaluate the same continuous field. The result is normalized so that
    its peak on the grid of ``spec`` equals ``e_max``.
    """
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if not np.any(amplitudes):
        raise ValueError("all frequency amplitudes are zero")
    period = spec.n_steps * spec.step

    def raw(times):
        j = np.arange(len(amplitudes))
        phase = np.exp(-2j * np.pi * np.outer(times - spec.center, j) / period)
        return _envelope(times, spec) * (phase @ amplitudes).real

    peak = np.max(np.abs(raw(spec.times())))
    if peak == 0.0:
        raise ValueError("pulse vanishes on the grid")
    times = spec.times() if t is None else np.asarray(t, dtype=float)
    return spec.e_max * raw(times) / peak


def draw_amplitudes(spec: PulseSpec, rng: np.random.Generator) -> np.ndarray:
    m = spec.n_frequencies
    while True:
        a = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / math.sqrt(2)
        if np.any(a):
            return a


def sample_pulse(spec: PulseSpec, rng=None, amplitudes=None) -> PulseSeries:
    """Draw a random band-limited pulse.

    Without ``rng`` the generator is seeded from ``spec.seed``, so a spec
    alone fixes the pulse. ``amplitudes`` overrides the random draw.
    """
    if amplitudes is None:
        if rng is None:
            rng = np.random.default_rng(spec.seed)
        amplitudes = draw_amplitudes(spec, rng)
    values = pulse_from_amplitudes(spec, amplitudes)
    return PulseSeries(values=values, grid=spec.times())


@dataclass(frozen=True)
class ObservableSpec:
    n_spins: int
    seed: int = 0
    traceless: bool = True
    target_hs_norm: float | None = None

    @property
    def norm(self) -> float:
        if self.target_hs_norm is not None:
            return self.target_hs_norm
        return math.sqrt(2**self.n_spins)


def observable_from_coefficients(
    single: dict, pair: dict, n_spins: int, target_hs_norm: float | None = None
) -> np.ndarray:
    """Linear combination of one- and two-site Pauli strings.

    ``single`` maps ``(site, axis)`` and ``pair`` maps
    ``(site_j, site_k, axis_a, axis_b)`` to real coefficients. The result is
    rescaled to ``target_hs_norm`` (``sqrt(2**n_spins)`` by default).
    """
    dim = 2**n_spins
    a = np.zeros((dim, dim), dtype=complex)
    for (site, axis), c in single.items():
        if c:
            a += c * pauli_site(axis, site, n_spins)
    for (j, k, ax_a, ax_b), c in pair.items():
        if c:
            a += c * pauli_string({j: ax_a, k: ax_b}, n_spins)
    norm = hs_norm(a)
    if norm == 0.0:
        raise ValueError("observable coefficients are all zero")
    target = math.sqrt(dim) if target_hs_norm is None else target_hs_norm
    return a * (target / norm)


def random_observable(spec: ObservableSpec, rng=None) -> np.ndarray:
    """Random Hermitian observable built from one- and two-site terms.

    All sites, all site pairs ``j < k`` and all axis combinations enter with
    i.i.d. standard-normal coefficients. Pauli strings are traceless, so the
    result is too; ``traceless=False`` adds a random identity offset.
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    n = spec.n_spins
    while True:
        single = {(s, a): rng.standard_normal() for s in range(1, n + 1) for a in AXES}
        pair = {
            (j, k, a, b): rng.standard_normal()
            for j, k in combinations(range(1, n + 1), 2)
            for a in AXES
            for b in AXES
        }
        try:
            obs = observable_from_coefficients(single, pair, n, spec.norm)
            break
        except ValueError:
            continue
    if not spec.traceless:
        obs = add_identity_offset(obs, rng)
    return obs


def add_identity_offset(a, rng) -> np.ndarray:
    """Return ``a + lam * 1`` with ``|lam| = hs_norm(a) / N`` and random sign."""
    a = np.asarray(a)
    n = a.shape[0]
    sign = 1.0 if rng.random() < 0.5 else -1.0
    lam = sign * hs_norm(a) / n
    return a + lam * np.eye(n)
