# %% [markdown]
# # A Heisenberg chain and its thermal ensembles
#
# Build the open chain Hamiltonian, look at its spectrum, and tune the
# inverse temperature until the thermal state has a prescribed purity.

# %%
import numpy as np

from mixsample import ChainParams, beta_for_purity, build_hamiltonian, eigh, purity, thermal_state

chain = ChainParams(n_spins=5, J=1.0, h_z=0.002)
h0 = build_hamiltonian(chain)
energies = eigh(h0).eigenvalues
print("dimension", chain.dim)
print("lowest levels", np.round(energies[:6], 4))

# %% [markdown]
# The ferromagnetic ground level is almost degenerate: the small Zeeman
# term only splits the multiplet slightly. Purity runs from 1/N at infinite
# temperature up to 1 once the ground state is resolved.

# %%
for target in (1 / chain.dim, 0.05, 0.2, 0.5, 0.9):
    beta = beta_for_purity(h0, target)
    rho = thermal_state(h0, beta)
    print(f"P={target:.4f}  beta={beta:10.4f}  check={purity(rho):.12f}")
