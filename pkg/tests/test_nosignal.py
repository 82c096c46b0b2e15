import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qfound.bell import singlet, spin_along
from qfound.ghz import ghz3
from qfound.linalg import SX, SZ, DensityOp, DimensionError, partial_trace, random_density, random_hermitian, random_unitary
from qfound.nosignal import (
    basis_independence, commutation_defect, joint_sum_marginal, no_signaling_check,
    reduced_by_summation, reduced_probabilities,
)

seeds = st.integers(0, 2**32 - 1)


def test_singlet_marginal():
    m = reduced_probabilities(singlet(), SZ, SZ)
    assert np.allclose(m.probs, [0.5, 0.5], atol=1e-15)


def test_product_state_gives_local_prediction(rng):
    r1, r2 = random_density(rng, (2,)), random_density(rng, (3,))
    rho = DensityOp(np.kron(r1.matrix, r2.matrix), (2, 3))
    ob = random_hermitian(rng, 3)
    vals, vecs = np.linalg.eigh(ob)
    local = [np.vdot(v, r2.matrix @ v).real for v in vecs.T]
    assert np.allclose(reduced_probabilities(rho, random_hermitian(rng, 2), ob).probs, local, atol=1e-12)


def test_ghz_third_particle_is_unbiased():
    m = reduced_probabilities(ghz3().to_density().matrix, np.eye(4), SX, (4, 2))
    assert np.allclose(m.probs, [0.5, 0.5], atol=1e-15)


def test_singlet_choices_all_agree():
    rep = no_signaling_check(singlet(), [SZ, SX, spin_along(math.radians(37))], SZ)
    assert rep.ok
    assert all(np.allclose(m, [0.5, 0.5], atol=1e-12) for m in rep.marginals)


def test_identity_choice_equals_no_measurement(rng):
    rho = random_density(rng, (2, 2))
    rep = no_signaling_check(rho, [np.eye(2), SZ], SX)
    assert np.abs(rep.marginals[0] - rep.reference).max() < 1e-12


@given(seeds, st.sampled_from([(2, 2), (2, 4), (3, 2)]))
def test_marginal_independent_of_choice(seed, dims):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, dims)
    rep = no_signaling_check(rho, [random_hermitian(rng, dims[0]) for _ in range(5)], random_hermitian(rng, dims[1]))
    assert rep.max_choice_discrepancy < 1e-12
    assert rep.max_path_discrepancy < 1e-12


def test_degenerate_observable_on_b(rng):
    rho = random_density(rng, (2, 4))
    ob = np.kron(SZ, np.eye(2))
    assert len(joint_sum_marginal(rho, SX, ob).probs) == 2


def test_needs_two_choices(rng):
    with pytest.raises(ValueError):
        no_signaling_check(random_density(rng, (2, 2)), [SZ], SZ)


def test_dimension_mismatch(rng):
    with pytest.raises(DimensionError):
        reduced_probabilities(random_density(rng, (2, 2)), np.eye(3), SZ)
    with pytest.raises(DimensionError):
        reduced_probabilities(random_density(rng, (4,)), SZ, SZ)


@given(seeds, st.sampled_from([(2, 2), (2, 4), (3, 3)]))
def test_summation_equals_partial_trace(seed, dims):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, dims)
    ref = partial_trace(rho, [1]).matrix
    assert np.abs(reduced_by_summation(rho, random_unitary(rng, dims[0])) - ref).max() < 1e-13


def test_basis_independence_on_singlet(rng):
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    rep = basis_independence(singlet(), [np.eye(2), h, random_unitary(rng, 2)])
    assert rep.max_discrepancy < 1e-12
    assert np.allclose(rep.reduced[0], np.eye(2) / 2)


def test_trivial_factor():
    rho = np.diag([0.3, 0.7])
    rep = basis_independence(rho, [np.eye(1)], (1, 2))
    assert np.allclose(rep.reduced[0], rho)


def test_non_orthonormal_basis_rejected(rng):
    with pytest.raises(ValueError):
        basis_independence(singlet(), [np.array([[1, 1], [0, 1]])])


def test_commutation_defect():
    z = [np.diag([1.0, 0, 0, 0]), np.diag([0, 1.0, 1, 1])]
    assert commutation_defect(z, [np.diag([1.0, 1, 0, 0]), np.diag([0, 0, 1.0, 1])]) == 0.0
    plus = np.full((4, 4), 0.25)
    assert commutation_defect(z, [plus]) > 0.1
