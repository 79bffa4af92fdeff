"""Sampling estimators for time-dependent observables of mixed states
under unitary dynamics, with worst-case error bounds and a spin-chain
benchmark harness."""

__version__ = "0.1.0"

from .ensembles import (
    DensityMatrix,
    beta_for_purity,
    population_residuum,
    purity,
    split_background,
    split_traceless,
    thermal_populations,
    thermal_state,
)
from .linalg import HermitianEigensystem, eigh, hs_inner, hs_norm, unitary_exp
from .propagation import (
    PropagationPlan,
    Propagator,
    TimeGrid,
    exact_expectation,
    heisenberg_operator,
    propagate_backward,
    propagate_forward,
)
from .sampling import (
    ESTIMATORS,
    ErrorBoundReport,
    EstimatorKind,
    SamplingEstimate,
    abs_error,
    eigenstate_estimate,
    estimate,
    heisenberg_diagonal_fraction,
    observable_bound,
    observable_estimate,
    optimal_rank_k_approx,
    random_phase_estimate,
    random_phase_states,
    worst_case_bound,
)
from .spin_chain import (
    SPECTRUM_PRESETS,
    ChainParams,
    ObservableSpec,
    PulseSeries,
    PulseSpec,
    add_identity_offset,
    build_hamiltonian,
    pauli_site,
    random_observable,
    sample_pulse,
    total_polarization,
)
