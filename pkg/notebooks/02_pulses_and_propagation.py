# %% [markdown]
# # Random pulses and time evolution
#
# Draw a band-limited random pulse, propagate the chain with the
# piecewise-constant midpoint integrator and check the two things that must
# hold for any unitary evolution.

# %%
import numpy as np

from mixsample import (
    ChainParams,
    PropagationPlan,
    PulseSpec,
    beta_for_purity,
    build_hamiltonian,
    exact_expectation,
    purity,
    sample_pulse,
    thermal_state,
    total_polarization,
)

spec = PulseSpec(e_max=1.0, tau=170.0, n_steps=512, seed=3)
pulse = sample_pulse(spec)
print("samples", len(pulse), "dt", round(pulse.dt, 4), "field at t=0", pulse.values[0])
print("peak |field|", np.abs(pulse.values).max())

# %%
chain = ChainParams(4)
plan = PropagationPlan(chain, pulse)
u = plan.propagator().unitary
print("unitarity defect", np.linalg.norm(u.conj().T @ u - np.eye(chain.dim)))

h0 = build_hamiltonian(chain)
rho = thermal_state(h0, beta_for_purity(h0, 0.3))
psi = plan.forward(rho.states)
evolved = (psi * rho.populations) @ psi.conj().T
print("purity before/after", purity(rho), np.vdot(evolved, evolved).real)

# %% [markdown]
# Total polarization commutes with the field-free Hamiltonian, so only the
# pulse can change it.

# %%
az = total_polarization(chain.n_spins)
print("<Az>(0) =", np.dot(rho.populations, np.einsum("in,ij,jn->n", rho.states.conj(), az, rho.states).real))
print("<Az>(T) =", exact_expectation(rho, az, plan))
