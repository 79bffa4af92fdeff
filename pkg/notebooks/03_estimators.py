# %% [markdown]
# # Sampling a mixed-state expectation value with a few pure states
#
# Compare the estimator families on one random observable and one pulse.
# Eigenstate sampling with k = N and observable sampling with k = N are
# exact; random-phase sampling converges statistically.

# %%
import numpy as np

from mixsample import (
    ESTIMATORS,
    ChainParams,
    ObservableSpec,
    PropagationPlan,
    PulseSpec,
    beta_for_purity,
    build_hamiltonian,
    estimate,
    exact_expectation,
    random_observable,
    sample_pulse,
    thermal_state,
)

chain = ChainParams(5)
plan = PropagationPlan(chain, sample_pulse(PulseSpec(n_steps=256, seed=1))).propagator()
h0 = build_hamiltonian(chain)
a = random_observable(ObservableSpec(chain.n_spins, seed=4))

for target in (0.9, 0.05):
    rho = thermal_state(h0, beta_for_purity(h0, target))
    exact = exact_expectation(rho, a, plan)
    print(f"\npurity {target}: exact {exact:+.6f}")
    for ident in ESTIMATORS:
        errs = [abs(estimate(ident, rho, a, plan, k, rng=0).value - exact) for k in (1, 4, 16, 32)]
        print(f"  {ident:12s}", "  ".join(f"{e:.2e}" for e in errs))

# %% [markdown]
# At high purity a handful of eigenstates already carry nearly all the
# population. Near the maximally mixed state the eigenstate tail stays large
# until k is a sizeable fraction of N, while a single random-phase run only
# improves like 1/sqrt(k). Which one wins there is a statement about averages
# over many observables and pulses; see the sweeps notebook.
