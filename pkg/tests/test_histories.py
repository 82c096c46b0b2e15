import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qfound import histories as H
from qfound.linalg import DensityOp, measure_probs, projector, random_density, random_state, random_unitary

seeds = st.integers(0, 2**32 - 1)


def basis_projectors(u):
    return tuple(np.outer(u[:, j], u[:, j].conj()) for j in range(u.shape[0]))


def test_single_time_identity_gives_one(rng):
    grid = H.TimeGrid([1.0], dim=3)
    assert H.sequence_prob(random_density(rng, (3,)), grid, [np.eye(3)]) == pytest.approx(1.0)


def test_single_time_reduces_to_born_rule(rng):
    rho = random_density(rng, (3,))
    u = random_unitary(rng, 3)
    grid = H.TimeGrid([1.0], [u])
    projs = basis_projectors(random_unitary(rng, 3))
    evolved = DensityOp(u @ rho.matrix @ u.conj().T)
    born = measure_probs(evolved, projs)
    assert np.allclose([H.sequence_prob(rho, grid, [p]) for p in projs], born, atol=1e-12)


def test_sigma_x_then_z_probability():
    f = H.sigma_x_then_z_family()
    plus = f.projector_sets[0][0]
    one = f.projector_sets[1][1]
    assert H.sequence_prob(f.rho0, f.grid, [plus, one]) == pytest.approx(0.25, abs=1e-15)


@given(seeds, st.integers(2, 3), st.integers(2, 8))
def test_wigner_formula_matches_slicing(seed, times, d):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, (d,))
    grid = H.TimeGrid(range(1, times + 1), [random_unitary(rng, d) for _ in range(times)])
    projs = [projector(random_state(rng, (d,)).amps) for _ in range(times)]
    assert abs(H.sequence_prob(psi, grid, projs) - H.sequence_prob_pure(psi, grid, projs)) < 1e-12


def test_wigner_matches_slicing_200_instances():
    rng = np.random.default_rng(200)
    worst = 0.0
    for k in range(200):
        d, times = 2 + k % 7, 2 + k % 2
        psi = random_state(rng, (d,))
        grid = H.TimeGrid(range(times), [random_unitary(rng, d) for _ in range(times)])
        projs = [sum(projector(v) for v in random_unitary(rng, d).T[: 1 + k % 2]) for _ in range(times)]
        worst = max(worst, abs(H.sequence_prob(psi, grid, projs) - H.sequence_prob_pure(psi, grid, projs)))
    assert worst < 1e-12


@given(seeds)
def test_dropping_last_projector_leaves_probability(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, (3,))
    grid = H.TimeGrid([1, 2, 3], [random_unitary(rng, 3) for _ in range(3)])
    projs = [projector(random_state(rng, (3,)).amps) for _ in range(3)]
    c = H.class_operator(grid, projs)
    short = H.class_operator(H.TimeGrid([1, 2], grid.unitaries[:2]), projs[:2])
    last = grid.heisenberg(2, projs[2])
    full = np.trace(c @ rho.matrix @ c.conj().T).real
    dropped = np.trace(last @ short @ rho.matrix @ short.conj().T).real
    assert abs(full - dropped) < 1e-12


@given(seeds, st.integers(2, 4))
def test_probabilities_sum_to_one(seed, d):
    rng = np.random.default_rng(seed)
    grid = H.TimeGrid([1, 2, 3], [random_unitary(rng, d) for _ in range(3)])
    fam = H.HistoryFamily(grid, tuple(basis_projectors(random_unitary(rng, d)) for _ in range(3)), random_density(rng, (d,)))
    probs = H.family_probabilities(fam)
    assert len(probs) == d**3
    assert abs(sum(probs.values()) - 1) < 1e-10
    assert min(probs.values()) >= -1e-12


def test_sigma_x_z_is_inconsistent():
    f = H.sigma_x_then_z_family()
    strong = H.consistency_matrix(f, "strong")
    assert strong.max_violation == pytest.approx(0.25, abs=1e-12)
    assert H.consistency_matrix(f, "weak").max_violation == pytest.approx(0.25, abs=1e-12)


def test_weak_mode_ignores_imaginary_cross_terms():
    # |0>, then σx basis, then σy basis: cross terms are purely imaginary
    plus, minus = np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)
    py, my = np.array([1, 1j]) / np.sqrt(2), np.array([1, -1j]) / np.sqrt(2)
    z0 = np.diag([1.0, 0.0])
    fam = H.HistoryFamily(
        H.TimeGrid([1, 2], dim=2),
        ((projector(py), projector(my)), (projector(plus), projector(minus))),
        DensityOp(z0),
    )
    assert H.consistency_matrix(fam, "strong").max_violation > 0.1
    assert H.consistency_matrix(fam, "weak").max_violation < 1e-12


def test_single_time_family_consistent(rng):
    fam = H.HistoryFamily(H.TimeGrid([1.0], dim=3), (basis_projectors(random_unitary(rng, 3)),), random_density(rng, (3,)))
    assert H.consistency_matrix(fam).max_violation < 1e-15


def test_mode_validated():
    with pytest.raises(ValueError):
        H.consistency_matrix(H.sigma_x_then_z_family(), "medium")


def test_eigenbasis_family_mixed_qubit(rng):
    grid = H.TimeGrid([1, 2, 3], [random_unitary(rng, 2) for _ in range(3)])
    fam = H.build_consistent_family(DensityOp.maximally_mixed((2,)), grid)
    probs = H.family_probabilities(fam)
    assert len(probs) == 8
    nonzero = {h: p for h, p in probs.items() if p > 1e-12}
    assert set(nonzero) == {(0, 0, 0), (1, 1, 1)}
    assert all(p == pytest.approx(0.5) for p in nonzero.values())
    assert H.consistency_matrix(fam).max_violation < 1e-12


def test_eigenbasis_family_pure_state(rng):
    grid = H.TimeGrid([1, 2], [random_unitary(rng, 3) for _ in range(2)])
    fam = H.build_consistent_family(random_state(rng, (3,)).to_density(), grid)
    probs = [p for p in H.family_probabilities(fam).values() if p > 1e-12]
    assert probs == [pytest.approx(1.0)]


@given(seeds, st.integers(2, 4))
def test_coarse_graining_keeps_consistency_and_additivity(seed, d):
    rng = np.random.default_rng(seed)
    grid = H.TimeGrid([1, 2, 3], [random_unitary(rng, d) for _ in range(3)])
    fam = H.build_consistent_family(random_density(rng, (d,)), grid)
    grouping = [[[j] for j in range(d)], [[0, 1]] + [[j] for j in range(2, d)], [[j] for j in range(d)]]
    coarse = H.coarse_grain(fam, grouping)
    assert H.consistency_matrix(coarse).max_violation < 1e-12
    assert max(abs(r.delta) for r in H.additivity_report(fam, grouping)) < 1e-10


def test_grouping_everything_gives_one_history(rng):
    fam = H.build_consistent_family(random_density(rng, (3,)), H.TimeGrid([1, 2], dim=3))
    coarse = H.coarse_grain(fam, [[[0, 1, 2]], [[0, 1, 2]]])
    assert H.family_probabilities(coarse) == {(0, 0): pytest.approx(1.0)}


def test_inconsistent_coarse_graining_delta_is_twice_cross_term():
    f = H.sigma_x_then_z_family()
    rows = H.additivity_report(f, [[[0, 1]], [[0], [1]]])
    by_hist = {r.history: r for r in rows}
    assert by_hist[(0, 0)].delta == pytest.approx(0.5, abs=1e-12)
    for r in rows:
        assert r.delta == pytest.approx(2 * r.cross_terms, abs=1e-12)


def test_invalid_grouping():
    f = H.sigma_x_then_z_family()
    with pytest.raises(ValueError):
        H.coarse_grain(f, [[[0]], [[0], [1]]])


def test_invalid_family_inputs(rng):
    with pytest.raises(ValueError):
        H.TimeGrid([2.0, 1.0], dim=2)
    with pytest.raises(ValueError):
        H.TimeGrid([1.0], [np.array([[1, 1], [0, 1]])])
    with pytest.raises(ValueError):
        H.HistoryFamily(H.TimeGrid([1.0], dim=2), ((np.diag([1.0, 0.0]),),), DensityOp.maximally_mixed((2,)))
    with pytest.raises(ValueError):
        H.class_operator(H.TimeGrid([1.0], dim=2), [np.array([[1, 1], [0, 0]])])


def test_size_guard():
    f = H.sigma_x_then_z_family()
    big = H.HistoryFamily(H.TimeGrid(range(21), dim=2), (f.projector_sets[0],) * 21, f.rho0)
    with pytest.raises(ValueError):
        H.family_probabilities(big)


def test_degenerate_interference(rng):
    psi = random_state(rng, (3,))
    pieces = [np.eye(3)[0], np.eye(3)[1]]
    final = projector(random_state(rng, (3,)).amps)
    coherent = H.degenerate_interference(psi, pieces, final)
    assert abs(coherent.crossed) > 1e-6
    assert coherent.amplitude_sum - coherent.probability_sum == pytest.approx(coherent.crossed)
    env = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    recorded = H.degenerate_interference(psi, pieces, final, env)
    assert abs(recorded.crossed) < 1e-12
    same_env = H.degenerate_interference(psi, pieces, final, [env[0], env[0]])
    assert same_env.crossed == pytest.approx(coherent.crossed, abs=1e-12)


def test_family_json_round_trip(rng):
    fam = H.build_consistent_family(random_density(rng, (2,)), H.TimeGrid([1, 2], [random_unitary(rng, 2) for _ in range(2)]))
    text = json.dumps(H.family_to_dict(fam))
    back = H.load_family(text)
    a, b = H.family_probabilities(fam), H.family_probabilities(back)
    assert all(abs(a[h] - b[h]) < 1e-15 for h in a)


def test_family_json_accepts_real_matrices():
    doc = {"times": [1], "rho0": [[1, 0], [0, 0]], "projector_sets": [[[[1, 0], [0, 0]], [[0, 0], [0, 1]]]]}
    assert H.family_probabilities(H.family_from_dict(doc)) == {(0,): 1.0, (1,): 0.0}


@pytest.mark.parametrize(
    "text,fragment",
    [
        ('{"times": [1,\n 2', "line 2"),
        ("[1, 2]", "JSON object"),
        ('{"times": [1]}', "missing key"),
        ('{"times": [1], "rho0": [[1, 0], [0, 0]], "projector_sets": [[[[1, 0], [0, 0]]]]}', "identity"),
    ],
)
def test_family_json_errors(text, fragment):
    with pytest.raises(H.FamilySpecError, match=fragment):
        H.load_family(text)
