import numpy as np
import pytest
from hypothesis import given, strategies as st

from qfound.linalg import (
    SX, SY, SZ, DensityOp, DimensionError, StateVector, apply_local, check_projector_set,
    dump_json, eig_hermitian, evolution_operator, is_unitary, ket, measure_probs,
    pairs_to_matrix, partial_trace, projector, random_density, random_hermitian,
    random_state, random_unitary, spectral_projectors, tensor,
)

seeds = st.integers(0, 2**32 - 1)


def test_ket_ordering_first_factor_slowest():
    assert np.argmax(np.abs(ket("+", "-").amps)) == 1
    assert np.argmax(np.abs(ket("-", "+").amps)) == 2


def test_tensor_matches_kron():
    a, b = np.arange(4).reshape(2, 2), np.eye(3)
    assert np.array_equal(tensor(a, b), np.kron(a, b))


def test_state_rejects_bad_dims():
    with pytest.raises(DimensionError):
        StateVector(np.ones(6), (2, 2))


def test_density_validation_catches_negative_eigenvalue():
    with pytest.raises(ValueError):
        DensityOp(np.diag([1.5, -0.5])).validate()


@given(seeds, st.integers(1, 12))
def test_eig_matches_numpy(seed, d):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, d)
    vals, vecs = eig_hermitian(h)
    assert np.allclose(vals, np.linalg.eigvalsh(h), atol=1e-12)
    assert np.abs(vecs @ np.diag(vals) @ vecs.conj().T - h).max() < 1e-12
    assert is_unitary(vecs, 1e-12)


def test_eig_dimension_64_reconstruction(rng):
    h = random_hermitian(rng, 64)
    vals, vecs = eig_hermitian(h)
    assert np.abs(vecs @ np.diag(vals) @ vecs.conj().T - h).max() < 1e-11


def test_eig_rejects_non_hermitian_and_oversized():
    with pytest.raises(ValueError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))
    with pytest.raises(DimensionError):
        eig_hermitian(np.eye(65))


def test_eig_degenerate_spectrum():
    vals, _ = eig_hermitian(np.kron(SZ, np.eye(2)))
    assert np.allclose(vals, [-1, -1, 1, 1])
    values, projs = spectral_projectors(np.kron(SZ, np.eye(2)))
    assert len(projs) == 2 and all(np.trace(p).real == pytest.approx(2) for p in projs)


def test_evolution_operator_of_pauli():
    u = evolution_operator(SX, np.pi / 2)
    assert np.allclose(u, -1j * SX, atol=1e-12)


@given(seeds)
def test_partial_trace_pure_and_mixed_agree(seed):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, (2, 3, 2))
    a = partial_trace(psi, [0, 2]).matrix
    b = partial_trace(psi.to_density(), [0, 2]).matrix
    assert np.abs(a - b).max() < 1e-13
    assert abs(np.trace(a) - 1) < 1e-12


def test_partial_trace_of_product(rng):
    r1, r2 = random_density(rng, (2,)), random_density(rng, (3,))
    joint = DensityOp(np.kron(r1.matrix, r2.matrix), (2, 3))
    assert np.abs(partial_trace(joint, [1]).matrix - r2.matrix).max() < 1e-13
    with pytest.raises(IndexError):
        partial_trace(joint, [2])


def test_apply_local_equals_full_kron(rng):
    psi = random_state(rng, (2, 2, 2)).amps
    full = np.kron(np.kron(SX, SY), SZ) @ psi
    assert np.allclose(apply_local(psi, [SX, SY, SZ], (2, 2, 2)), full)


def test_measure_probs_and_projector_checks():
    up = projector(ket("+").amps)
    assert np.allclose(measure_probs(ket("+"), [up, np.eye(2) - up]), [1, 0])
    with pytest.raises(ValueError):
        check_projector_set([up])


@given(seeds, st.integers(1, 8))
def test_random_unitary_is_unitary(seed, d):
    assert is_unitary(random_unitary(np.random.default_rng(seed), d), 1e-12)


def test_json_pairs_round_trip(rng):
    m = random_unitary(rng, 3)
    import json
    assert np.array_equal(pairs_to_matrix(json.loads(dump_json(m))), m)
