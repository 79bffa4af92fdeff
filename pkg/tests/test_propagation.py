import math

import numpy as np
import pytest

from mixsample.ensembles import DensityMatrix, purity, thermal_state
from mixsample.linalg import hs_norm
from mixsample.propagation import (
    PropagationPlan,
    Propagator,
    TimeGrid,
    exact_expectation,
    heisenberg_operator,
    propagate_backward,
    propagate_forward,
)
from mixsample.spin_chain import (
    ChainParams,
    PulseSeries,
    PulseSpec,
    build_hamiltonian,
    pauli_site,
    sample_pulse,
)
from conftest import random_density


def constant_pulse(value, duration, n_samples):
    t = np.linspace(0.0, duration, n_samples)
    return PulseSeries(np.full(n_samples, float(value)), t)


def rabi_sz(t, h_z, f):
    # single spin under -h_z sz + f sx, starting spin up
    omega = math.hypot(h_z, f)
    bz = -h_z / omega
    return bz**2 + np.cos(2 * omega * t) * (1 - bz**2)


@pytest.fixture(scope="module")
def small_plan():
    chain = ChainParams(3, J=1.0, h_z=0.3)
    pulse = sample_pulse(PulseSpec(n_steps=128, tau=10.0, seed=4))
    return PropagationPlan(chain, pulse)


def test_time_grid():
    g = TimeGrid(4, 0.5)
    assert np.allclose(g.times, [0, 0.5, 1.0, 1.5])
    with pytest.raises(ValueError):
        TimeGrid(0, 1.0)


def test_step_count_and_fields(small_plan):
    assert len(list(small_plan.step_unitaries())) == 127
    v = small_plan.pulse.values
    assert np.allclose(small_plan.step_fields(), (v[:-1] + v[1:]) / 2)
    assert small_plan.duration == pytest.approx(127 * small_plan.grid.dt)


def test_zero_field_matches_closed_form():
    chain = ChainParams(3, J=0.8, h_z=0.2)
    plan = PropagationPlan(chain, constant_pulse(0.0, 7.0, 50))
    h0 = build_hamiltonian(chain)
    w, v = np.linalg.eigh(h0)
    ref = (v * np.exp(-1j * 7.0 * w)) @ v.conj().T
    assert np.allclose(plan.propagator().unitary, ref, atol=1e-11)


def test_rabi_oscillation():
    h_z, f = 0.3, 0.5
    chain = ChainParams(2, J=0.0, h_z=h_z)
    psi0 = np.zeros(4, complex)
    psi0[0] = 1.0
    sz1 = pauli_site("z", 1, 2)
    for duration in (1.0, 13.0, 40.0):
        plan = PropagationPlan(chain, constant_pulse(f, duration, 512))
        psi = plan.forward(psi0)
        value = np.vdot(psi, sz1 @ psi).real
        assert abs(value - rabi_sz(duration, h_z, f)) <= 1e-6


def test_forward_backward_inverse(small_plan, rng):
    psi = rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3))
    assert np.allclose(small_plan.backward(small_plan.forward(psi)), psi, atol=1e-11)
    assert np.allclose(propagate_backward(small_plan, propagate_forward(small_plan, psi)), psi, atol=1e-11)


def test_single_vector_and_batch_agree(small_plan, rng):
    psi = rng.standard_normal((8, 2)) + 0j
    batch = small_plan.forward(psi)
    assert np.allclose(small_plan.forward(psi[:, 1]), batch[:, 1])


def test_dimension_mismatch(small_plan):
    with pytest.raises(ValueError):
        small_plan.forward(np.ones(4))


def test_propagator_matches_plan(small_plan, rng):
    prop = small_plan.propagator()
    assert isinstance(prop, Propagator)
    assert prop.propagator() is prop
    psi = rng.standard_normal((8, 3)) + 0j
    assert np.allclose(prop.forward(psi), small_plan.forward(psi), atol=1e-12)
    assert np.allclose(prop.backward(psi), small_plan.backward(psi), atol=1e-12)
    u = prop.unitary
    assert hs_norm(u.conj().T @ u - np.eye(8)) <= 1e-10


def test_step_unitarity(small_plan):
    eye = np.eye(8)
    for u in small_plan.step_unitaries():
        assert hs_norm(u.conj().T @ u - eye) <= 1e-10


def test_exact_expectation_against_density_matrix(small_plan, rng):
    rho = DensityMatrix.from_matrix(random_density(rng, 8))
    a = pauli_site("z", 1, 3) + 0.5 * pauli_site("x", 2, 3)
    u = small_plan.propagator().unitary
    ref = np.trace(a @ u @ rho.matrix @ u.conj().T).real
    assert exact_expectation(rho, a, small_plan) == pytest.approx(ref, abs=1e-12)


def test_heisenberg_picture_agrees(small_plan, rng):
    rho = DensityMatrix.from_matrix(random_density(rng, 8))
    a = pauli_site("y", 3, 3)
    a_t = heisenberg_operator(a, small_plan)
    assert np.trace(a_t @ rho.matrix).real == pytest.approx(
        exact_expectation(rho, a, small_plan), abs=1e-12
    )


def test_purity_conserved(small_plan):
    rho = thermal_state(build_hamiltonian(small_plan.chain), 0.9)
    u = small_plan.propagator().unitary
    evolved = DensityMatrix.from_matrix(u @ rho.matrix @ u.conj().T)
    assert abs(purity(evolved) - purity(rho)) <= 1e-9


def test_pulse_plan_length_mismatch():
    chain = ChainParams(2)
    with pytest.raises(ValueError):
        PropagationPlan(chain, constant_pulse(0.1, 1.0, 10), TimeGrid(11, 0.1))


def test_propagators_at_snapshots(small_plan):
    first, half, full = small_plan.propagators_at([0, 63, 127])
    assert np.array_equal(first.unitary, np.eye(8))
    assert np.allclose(full.unitary, small_plan.propagator().unitary, atol=1e-13)
    steps = list(small_plan.step_unitaries())[:63]
    u = np.eye(8, dtype=complex)
    for s in steps:
        u = s @ u
    assert np.allclose(half.unitary, u, atol=1e-13)
    assert small_plan.propagators_at([]) == []
    with pytest.raises(ValueError):
        small_plan.propagators_at([128])
