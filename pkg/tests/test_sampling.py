import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixsample.ensembles import DensityMatrix
from mixsample.linalg import hs_norm
from mixsample.propagation import Propagator
from mixsample.sampling import (
    ESTIMATORS,
    EstimatorKind,
    abs_error,
    eigenstate_estimate,
    estimate,
    heisenberg_diagonal_fraction,
    observable_bound,
    observable_estimate,
    optimal_rank_k_approx,
    random_phase_estimate,
    random_phase_states,
    truncation_order,
    worst_case_bound,
)
from conftest import random_density, random_hermitian

IDENTITY3 = Propagator(np.eye(3, dtype=complex))
RHO3 = DensityMatrix(np.array([0.5, 0.3, 0.2]), np.eye(3))
A3 = np.diag([1.0, 2.0, 3.0])  # tr(rho A) = 0.5 + 0.6 + 0.6


def haar_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_estimator_kind_parse():
    assert EstimatorKind.parse("rp+ts+bg") == EstimatorKind("rp", True, True)
    assert EstimatorKind.parse("eigen").ident == "eigen"
    assert [EstimatorKind.parse(e).ident for e in ESTIMATORS] == list(ESTIMATORS)
    for bad in ("rp+bg", "obs+ts", "foo", "eigen+xx"):
        with pytest.raises(ValueError):
            EstimatorKind.parse(bad)


def test_truncation_order_ties_keep_index_order():
    assert list(truncation_order([1.0, -3.0, 3.0, 0.5])) == [1, 2, 0, 3]


def test_optimal_rank_k_example():
    approx = optimal_rank_k_approx(np.diag([3.0, -5.0, 1.0]), 1)
    assert np.allclose(approx, np.diag([0, -5, 0]))
    with pytest.raises(ValueError):
        optimal_rank_k_approx(np.eye(3), 4)


@pytest.mark.parametrize(
    "kind, k, expected",
    [
        ("eigen", 1, 0.5),
        ("eigen", 2, 1.1),
        ("eigen+ts", 1, 1.5),
        ("eigen+ts", 2, 1.5),
        ("eigen+ts+bg", 1, 1.7),
        ("eigen+ts+bg", 2, 1.7),
        ("eigen", 3, 1.7),
    ],
)
def test_eigenstate_estimate_hand_values(kind, k, expected):
    assert eigenstate_estimate(RHO3, A3, IDENTITY3, k, kind).value == pytest.approx(expected)


def test_observable_estimate_hand_values():
    # projector on |1>: exact value is p_1 = 0.3
    proj = np.diag([0.0, 1.0, 0.0])
    assert observable_estimate(proj, RHO3, IDENTITY3, 1).value == pytest.approx(0.3)
    # A3 truncated to its largest eigenvalue 3 -> 3 * 0.2
    assert observable_estimate(A3, RHO3, IDENTITY3, 1).value == pytest.approx(0.6)


def test_worst_case_bound_hand_values():
    p = [0.5, 0.3, 0.2]
    assert worst_case_bound(p, 1).bound == pytest.approx(math.sqrt(0.13))
    assert worst_case_bound(p, 1, reduced=True).bound == pytest.approx(0.1)
    assert worst_case_bound(p, 3).bound == 0
    assert worst_case_bound(np.full(4, 0.25), 0, reduced=True).bound == 0
    assert observable_bound([1.0, -2.0, 0.5], 1).bound == pytest.approx(math.sqrt(1.25))


def test_k_out_of_range():
    with pytest.raises(ValueError):
        eigenstate_estimate(RHO3, A3, IDENTITY3, 0)
    with pytest.raises(ValueError):
        observable_estimate(A3, RHO3, IDENTITY3, 4)
    with pytest.raises(ValueError):
        random_phase_states(RHO3, 0)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        eigenstate_estimate(RHO3, np.eye(2), IDENTITY3, 1)


def test_random_phase_state_norms(rng):
    phi = random_phase_states(RHO3, 5, rng=rng)
    # every realization has squared norm sum(q)/N
    assert np.allclose(np.sum(np.abs(phi) ** 2, axis=0), 1 / 3)
    phi = random_phase_states(RHO3, 5, reduced=True, rng=rng)
    assert np.allclose(np.sum(np.abs(phi) ** 2, axis=0), 0.4 / 3)


def test_random_phase_seed_reproducible():
    a = random_phase_estimate(RHO3, A3, IDENTITY3, 4, "rp", rng=17)
    b = random_phase_estimate(RHO3, A3, IDENTITY3, 4, "rp", rng=17)
    assert a.value == b.value and a.seed == 17


def test_random_phase_diagonal_observable_is_exact():
    # in the eigenbasis of rho a diagonal observable sees no coherences
    for kind in ("rp", "rp+ts", "rp+ts+bg"):
        assert random_phase_estimate(RHO3, A3, IDENTITY3, 1, kind, rng=3).value == pytest.approx(1.7)


def test_random_phase_unbiased():
    rng = np.random.default_rng(8)
    n = 6
    rho = DensityMatrix.from_matrix(random_density(rng, n))
    a = random_hermitian(rng, n)
    prop = Propagator(haar_unitary(rng, n))
    exact = np.trace(a @ prop.unitary @ rho.matrix @ prop.unitary.conj().T).real
    values = [random_phase_estimate(rho, a, prop, 1, "rp", rng=s).value for s in range(4000)]
    stderr = np.std(values) / math.sqrt(len(values))
    assert abs(np.mean(values) - exact) <= 4 * stderr


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 12), data=st.data())
def test_eigen_error_within_bound(seed, n, data):
    rng = np.random.default_rng(seed)
    rho = DensityMatrix.from_matrix(random_density(rng, n))
    a = random_hermitian(rng, n)
    prop = Propagator(haar_unitary(rng, n))
    exact = np.trace(a @ prop.unitary @ rho.matrix @ prop.unitary.conj().T).real
    k = data.draw(st.integers(1, n))
    for kind, reduced in (("eigen", False), ("eigen+ts", False), ("eigen+ts+bg", True)):
        err = abs_error(exact, eigenstate_estimate(rho, a, prop, k, kind))
        assert err <= worst_case_bound(rho.populations, k, reduced).bound * hs_norm(a) + 1e-10


def test_estimate_dispatch():
    for ident in ESTIMATORS:
        value = estimate(ident, RHO3, A3, IDENTITY3, 3, rng=0).value
        if not ident.startswith("rp"):
            assert value == pytest.approx(1.7)


def test_heisenberg_diagonal_fraction_examples(sx, sz):
    ident = Propagator(np.eye(2, dtype=complex))
    assert heisenberg_diagonal_fraction(sz, ident, np.eye(2)) == pytest.approx(1.0)
    assert heisenberg_diagonal_fraction(sx, ident, np.eye(2)) == pytest.approx(0.0)
    assert heisenberg_diagonal_fraction(np.zeros((2, 2)), ident, np.eye(2)) == 0.0
