"""Seeded benchmark sweeps comparing the estimators on random dynamics.

Every trial draws its observable, its pulse and its random phases from
seed sequences keyed by ``(master_seed, trial_id, stream, ...)``, so a
trial's result does not depend on which worker runs it or in which order.
Trials share the pulse and observable across purities, sample sizes and
estimators, which makes all comparisons paired.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from threadpoolctl import threadpool_limits

from ..ensembles import (
    DensityMatrix,
    beta_for_purity,
    population_residuum,
    purity,
    thermal_populations,
)
from ..linalg import eigh, hs_norm
from ..propagation import PropagationPlan, exact_expectation
from ..sampling import (
    EstimatorKind,
    estimate,
    heisenberg_diagonal_fraction,
    observable_bound,
    worst_case_bound,
)
from ..spin_chain import (
    ChainParams,
    ObservableSpec,
    add_identity_offset,
    build_hamiltonian,
    random_observable,
    sample_pulse,
    total_polarization,
)
from .config import SweepConfig

log = logging.getLogger(__name__)

__all__ = [
    "TrialRecord",
    "AggregateRow",
    "SweepResult",
    "trial_seed",
    "aggregate",
    "run_purity_sweep",
    "run_sample_size_sweep",
    "run_spectrum_comparison",
    "run_polarization_study",
    "bound_table",
    "pulse_table",
]

OBSERVABLE_STREAM, PULSE_STREAM, PHASE_STREAM = 0, 1, 2


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    purity: float
    estimator: str
    k: int
    exact: float
    estimate: float
    abs_error: float
    bound: float
    seed: int
    # whether ``bound`` provably dominates ``abs_error``
    covered: bool = False
    e_max: float = math.nan
    diag_fraction: float = math.nan
    # evaluation time as a fraction of the pulse duration
    t_fraction: float = 1.0


@dataclass(frozen=True)
class AggregateRow:
    purity: float
    estimator: str
    k: int
    mean_err: float
    p10: float
    p90: float
    bound: float
    n_trials: int = 0
    n_failed: int = 0


@dataclass
class SweepResult:
    """Aggregated tables plus free-form extra tables ``name -> (header, rows)``."""

    tables: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    records: list = field(default_factory=list)
    failures: int = 0


def trial_seed(master_seed: int, *key) -> np.random.SeedSequence:
    return np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))


def _int_seed(seq: np.random.SeedSequence) -> int:
    return int(seq.generate_state(1, np.uint64)[0])


@lru_cache(maxsize=16)
def _ensembles(chain: ChainParams, purities: tuple):
    h0 = build_hamiltonian(chain)
    es = eigh(h0)
    rhos = []
    for target in purities:
        beta = beta_for_purity(None, target, energies=es.eigenvalues)
        rhos.append(DensityMatrix(thermal_populations(es.eigenvalues, beta), es.eigenvectors))
    return es, tuple(rhos)


def _observable(config: SweepConfig, trial_id: int, mode: str) -> np.ndarray:
    if mode == "polarization":
        az = total_polarization(config.n_spins)
        return az * (math.sqrt(config.dim) / hs_norm(az))
    rng = np.random.default_rng(trial_seed(config.master_seed, trial_id, OBSERVABLE_STREAM))
    obs = random_observable(ObservableSpec(config.n_spins), rng)
    if not config.traceless:
        obs = add_identity_offset(obs, rng)
    return obs


def _bound(kind: EstimatorKind, rho, k, a, a_eigenvalues):
    """Bound in the units of the observable and whether it is rigorous."""
    if kind.family == "obs":
        return observable_bound(a_eigenvalues, k).bound * math.sqrt(purity(rho)), True
    # random phase may oversample; past N nothing is left out
    b = worst_case_bound(rho.populations, min(k, rho.dim), kind.background_removal).bound
    return b * hs_norm(a), kind.family == "eigen"


def _run_trial(config: SweepConfig, chain: ChainParams, trial_id: int, mode: str, e_max):
    purities = tuple(config.purities())
    es, rhos = _ensembles(chain, purities)
    a = _observable(config, trial_id, mode)
    a_eigs = eigh(a).eigenvalues
    pulse_rng = np.random.default_rng(trial_seed(config.master_seed, trial_id, PULSE_STREAM))
    pulse = sample_pulse(config.pulse_spec(e_max=e_max), pulse_rng)
    plan = PropagationPlan(chain, pulse)
    last = plan.grid.n_steps - 1
    fractions = [f for f in config.record_fractions if mode == "random"]
    if fractions:
        steps = [round(f * last) for f in fractions] + [last]
        props = plan.propagators_at(steps)
    else:
        props = [plan.propagator()]
    prop = props[-1]
    kinds = [EstimatorKind.parse(e) for e in config.estimators]
    fraction = math.nan
    if mode == "polarization":
        fraction = heisenberg_diagonal_fraction(a, prop, es)
    records = []
    for t_fraction, prop in zip(fractions + [1.0], props):
        for i, (target, rho) in enumerate(zip(purities, rhos)):
            exact = exact_expectation(rho, a, prop)
            for kind in kinds:
                for k in config.k_list():
                    # phases do not depend on the evaluation time
                    seq = trial_seed(config.master_seed, trial_id, PHASE_STREAM, i, k)
                    seed = _int_seed(seq)
                    est = estimate(kind, rho, a, prop, k, rng=seed)
                    bound, covered = _bound(kind, rho, k, a, a_eigs)
                    records.append(
                        TrialRecord(
                            trial_id, target, kind.ident, k, exact, est.value,
                            abs(exact - est.value), bound, seed, covered,
                            math.nan if e_max is None else e_max, fraction, t_fraction,
                        )
                    )
    return records


def _trial_job(args):
    config, chain, trial_id, mode, e_max = args
    # single-threaded BLAS keeps results bitwise independent of the pool size
    with threadpool_limits(1):
        try:
            return _run_trial(config, chain, trial_id, mode, e_max)
        except (np.linalg.LinAlgError, ArithmeticError, ValueError) as exc:
            log.warning("trial %d failed: %s", trial_id, exc)
            return None


def _run_trials(config, chain, mode="random", e_max=None):
    jobs = [(config, chain, t, mode, e_max) for t in range(config.n_observables)]
    if config.threads == 1:
        results = [_trial_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(_trial_job, jobs))
    records = [r for res in results if res is not None for r in res]
    failures = sum(res is None for res in results)
    return records, failures


def _nearest_rank(sorted_values, q):
    idx = max(1, math.ceil(q * len(sorted_values))) - 1
    return float(sorted_values[idx])


def aggregate(records, config: SweepConfig, failures: int = 0, k_values=None, t_fraction=1.0) -> list:
    """Mean and 10/90 nearest-rank percentiles per (purity, estimator, k).

    Rows follow the config order, so the row count is always
    ``|purities| * |estimators| * |k values|``. Only records evaluated at
    ``t_fraction`` of the pulse duration are used.
    """
    groups = {}
    for r in records:
        if r.t_fraction != t_fraction:
            continue
        groups.setdefault((r.purity, r.estimator, r.k), []).append(r)
    rows = []
    for target in config.purities():
        for ident in config.estimators:
            ident = EstimatorKind.parse(ident).ident
            for k in k_values or config.k_list():
                group = groups.get((target, ident, k), [])
                if not group:
                    nan = math.nan
                    rows.append(AggregateRow(target, ident, k, nan, nan, nan, nan, 0, failures))
                    continue
                errs = sorted(r.abs_error for r in sorted(group, key=lambda r: r.trial_id))
                bounds = [r.bound for r in sorted(group, key=lambda r: r.trial_id)]
                rows.append(
                    AggregateRow(
                        target, ident, k,
                        float(np.mean(errs)),
                        _nearest_rank(errs, 0.1),
                        _nearest_rank(errs, 0.9),
                        float(np.mean(bounds)),
                        len(group), failures,
                    )
                )
    return rows


def run_purity_sweep(config: SweepConfig, chain: ChainParams | None = None) -> SweepResult:
    records, failures = _run_trials(config, chain or config.chain)
    tables = {"purity_sweep": aggregate(records, config, failures)}
    for f in config.record_fractions:
        tables[f"purity_sweep_t{f:g}"] = aggregate(records, config, failures, t_fraction=f)
    extra = bound_table(config, chain).extra
    return SweepResult(tables, extra, records, failures)


def run_sample_size_sweep(config: SweepConfig) -> SweepResult:
    """Same protocol as the purity sweep, one table per sample size."""
    records, failures = _run_trials(config, config.chain)
    tables = {}
    for k in config.k_list():
        tables[f"k_sweep_k{k}"] = aggregate(
            [r for r in records if r.k == k], config, failures, k_values=[k]
        )
    return SweepResult(tables, {}, records, failures)


def spectrum_tables(config: SweepConfig) -> dict:
    """Spectra and population-residuum curves for each preset (no dynamics)."""
    extra = {}
    n = config.dim
    for name, chain in config.preset_params():
        energies = eigh(build_hamiltonian(chain)).eigenvalues
        extra[f"spectrum_{name}"] = (
            ("index", "energy"),
            [(i, e) for i, e in enumerate(energies)],
        )
        rows = []
        for target in config.residuum_purities:
            if not 1.0 / n <= target <= 1.0:
                log.warning("residuum purity %g outside [1/%d, 1]; skipped", target, n)
                continue
            p = thermal_populations(energies, beta_for_purity(None, target, energies=energies))
            rows.extend((target, k, population_residuum(p, k)) for k in range(n + 1))
        extra[f"residuum_{name}"] = (("purity", "k", "residuum"), rows)
    return extra


def run_spectrum_comparison(config: SweepConfig) -> SweepResult:
    presets = config.preset_params()
    if len(presets) < 2:
        raise ValueError("spectrum comparison needs at least two presets")
    result = SweepResult(extra=spectrum_tables(config))
    if config.spectrum_only:
        return result
    for name, chain in presets:
        records, failures = _run_trials(config, chain)
        result.tables[f"purity_sweep_{name}"] = aggregate(records, config, failures)
        result.records.extend(records)
        result.failures += failures
    return result


def run_polarization_study(config: SweepConfig) -> SweepResult:
    """Total polarization under random pulses, for each amplitude in
    ``e_max_grid``. Pulses are seed-paired across amplitudes."""
    result = SweepResult()
    fraction_rows = []
    for e_max in config.e_max_grid:
        records, failures = _run_trials(config, config.chain, "polarization", e_max)
        result.tables[f"polarization_emax_{e_max:g}"] = aggregate(records, config, failures)
        result.records.extend(records)
        result.failures += failures
        per_trial = {r.trial_id: r.diag_fraction for r in records}
        fr = sorted(per_trial[t] for t in sorted(per_trial))
        if fr:
            fraction_rows.append(
                (e_max, len(fr), float(np.mean(fr)), float(np.median(fr)),
                 _nearest_rank(fr, 0.1), _nearest_rank(fr, 0.9))
            )
    result.extra["diagonal_fraction"] = (
        ("e_max", "trials", "mean", "median", "p10", "p90"),
        fraction_rows,
    )
    return result


def bound_table(config: SweepConfig, chain: ChainParams | None = None) -> SweepResult:
    """Worst-case bounds (unit-HS-norm observables) over the purity grid."""
    energies = eigh(build_hamiltonian(chain or config.chain)).eigenvalues
    rows = []
    for target in config.purities():
        p = thermal_populations(energies, beta_for_purity(None, target, energies=energies))
        for k in config.k_list():
            kk = min(k, p.size)
            rows.append(
                (target, k, worst_case_bound(p, kk).bound, worst_case_bound(p, kk, True).bound)
            )
    return SweepResult(extra={"bounds": (("purity", "k", "bound", "reduced_bound"), rows)})


def pulse_table(config: SweepConfig, trial_id: int = 0) -> SweepResult:
    """The pulse that trial ``trial_id`` of a sweep would use."""
    rng = np.random.default_rng(trial_seed(config.master_seed, trial_id, PULSE_STREAM))
    pulse = sample_pulse(config.pulse_spec(), rng)
    rows = list(zip(pulse.grid.tolist(), pulse.values.tolist()))
    return SweepResult(extra={"pulse": (("t", "field"), rows)})
