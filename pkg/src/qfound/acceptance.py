"""The end-to-end checks behind ``qfound verify-all``.

Each check returns a :class:`CheckResult`. Wall-clock time is kept apart
from the reported metrics so that a fixed seed always gives the same
report.
"""

from __future__ import annotations

import math
import time
from typing import Callable, NamedTuple

import numpy as np

from . import bell, contextuality, decoherence, ghz, hardy, histories, nosignal
from .linalg import random_density, random_hermitian, random_unitary

DEFAULT_SEED = 0xB311


class CheckResult(NamedTuple):
    number: int
    name: str
    passed: bool
    metrics: dict
    seconds: float

    def as_dict(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed, "metrics": self.metrics}


def check_chsh(rng: np.random.Generator) -> tuple[bool, dict]:
    t0 = time.perf_counter()
    opt = bell.chsh_optimize(bell.singlet())
    elapsed = time.perf_counter() - t0
    err = abs(abs(opt.value) - bell.TSIRELSON)
    return err < 1e-6 and elapsed < 1.0, {
        "value": abs(opt.value),
        "target": bell.TSIRELSON,
        "error": err,
        "within_time_budget": elapsed < 1.0,
    }


def check_singlet_law(rng: np.random.Generator) -> tuple[bool, dict]:
    rows = bell.singlet_sweep(360)
    half = np.radians(rows[:, 0]) / 2
    same = 0.5 * np.sin(half) ** 2
    opposite = 0.5 * np.cos(half) ** 2
    expected = np.column_stack([same, opposite, opposite, same])
    p_err = float(np.abs(rows[:, 1:5] - expected).max())
    e_err = float(np.abs(rows[:, 5] + np.cos(np.radians(rows[:, 0]))).max())
    return p_err < 1e-12 and e_err < 1e-12, {"points": len(rows), "max_prob_error": p_err, "max_corr_error": e_err}


def check_local_bound(rng: np.random.Generator, samples: int = 10_000) -> tuple[bool, dict]:
    t0 = time.perf_counter()
    det = max(abs(bell.lhv_chsh(bell.random_deterministic_model(rng))) for _ in range(samples))
    sto = max(
        abs(bell.stochastic_local_chsh(bell.random_stochastic_model(rng), bell.random_settings(rng)))
        for _ in range(samples)
    )
    elapsed = time.perf_counter() - t0
    ok = det <= 2.0 and sto <= 2.0 + 1e-12 and elapsed < 10.0
    return ok, {
        "deterministic_models": samples,
        "stochastic_models": samples,
        "max_deterministic": det,
        "max_stochastic": sto,
        "within_time_budget": elapsed < 10.0,
    }


def check_ghz(rng: np.random.Generator) -> tuple[bool, dict]:
    state = ghz.ghz3(-1)
    plus = [ghz.product_op_expectation(state, axes) for axes in ("yyx", "xyy", "yxy")]
    xxx = ghz.product_op_expectation(state, "xxx")
    parity = ghz.local_realist_parity()
    residual = max(r.residual for r in plus + [xxx])
    ok = (
        all(r.is_eigen and r.eigenvalue == 1 for r in plus)
        and xxx.is_eigen
        and xxx.eigenvalue == -1
        and residual < 1e-12
        and parity["total_assignments"] == 64
        and parity["contradiction"]
    )
    return ok, {
        "yyx_type_eigenvalues": [r.eigenvalue for r in plus],
        "xxx_eigenvalue": xxx.eigenvalue,
        "max_residual": residual,
        "assignments": parity["total_assignments"],
        "satisfying": parity["satisfying_assignments"],
        "local_xxx_products": parity["xxx_products"],
    }


def check_all_or_nothing(rng: np.random.Generator, per_n: int = 100) -> tuple[bool, dict]:
    corr_err = 0.0
    coherence = 0.0
    for n in range(2, 11):
        phi = float(rng.uniform(0, 2 * math.pi))
        st = ghz.AllOrNothingState.with_phase(n, phi)
        vec = st.vector()
        for _ in range(per_n):
            thetas = rng.uniform(0, 2 * math.pi, size=n)
            e = ghz.transverse_correlation(vec, thetas)
            corr_err = max(corr_err, abs(e - math.cos(thetas.sum() - phi)))
        coherence = max(coherence, ghz.subsystem_coherence(st, n - 1))
    return corr_err < 1e-10 and coherence < 1e-12, {
        "n_range": [2, 10],
        "angle_sets_per_n": per_n,
        "max_corr_error": corr_err,
        "max_reduced_coherence": coherence,
    }


def check_hardy(rng: np.random.Generator) -> tuple[bool, dict]:
    opt = hardy.hardy_maximize()
    sin2 = math.sin(opt.theta_star) ** 2
    thetas = (np.arange(1000) + 0.5) * (math.pi / 2) / 1000
    worst = 0.0
    for th in thetas:
        rep = hardy.verify_exclusions(hardy.hardy_state(float(th)))
        worst = max(worst, rep.overlap_first, rep.overlap_second, rep.overlap_minus_minus)
    err = abs(opt.p_star - hardy.P_OPT)
    ok = abs(opt.p_star - 0.090170) < 1e-6 and err < 1e-6 and worst < 1e-12
    return ok, {
        "p_star": opt.p_star,
        "theta_star": opt.theta_star,
        "sin2_theta_star": sin2,
        "closed_form_error": err,
        "sweep_points": len(thetas),
        "max_exclusion_overlap": worst,
    }


def check_bks(rng: np.random.Generator) -> tuple[bool, dict]:
    sq = contextuality.square_report()
    col = contextuality.coloring_search()
    s1 = contextuality.spin1_squares()
    residual = max(sq["row_residuals"] + sq["col_residuals"])
    ok = (
        residual < 1e-12
        and col["assignments_examined"] == 512
        and col["colorings_found"] == 0
        and max(s1["commutator_norms"].values()) < 1e-12
        and s1["sum_residual"] < 1e-12
    )
    return ok, {
        "max_product_residual": residual,
        "assignments_examined": col["assignments_examined"],
        "colorings_found": col["colorings_found"],
        "spin1_max_commutator": max(s1["commutator_norms"].values()),
        "spin1_sum_residual": s1["sum_residual"],
    }


def _random_overlap(rng: np.random.Generator) -> complex:
    return math.sqrt(rng.uniform()) * complex(np.exp(1j * rng.uniform(0, 2 * math.pi)))


def check_decoherence(rng: np.random.Generator, sets: int = 100) -> tuple[bool, dict]:
    worst = 0.0
    for k in range(sets):
        photons = 1 + k % 6
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        a /= np.linalg.norm(a)
        system = ghz.AllOrNothingState(3, complex(a[0]), complex(a[1]))
        overlaps = [_random_overlap(rng) for _ in range(photons)]
        closed = decoherence.reduced_after_scattering(system.alpha, system.beta, overlaps).matrix
        explicit = decoherence.spin_block(system, [decoherence.photon_modes(g) for g in overlaps]).matrix
        worst = max(worst, float(np.abs(closed - explicit).max()))
    return worst < 1e-12, {"overlap_sets": sets, "max_photons": 6, "max_error": worst}


def _sigma_x_z_oracle() -> float:
    """Cross term of the two σx branches ending in |0⟩, multiplied out by hand."""
    plus = np.array([[0.5, 0.5], [0.5, 0.5]])
    minus = np.array([[0.5, -0.5], [-0.5, 0.5]])
    z0 = np.array([[1.0, 0.0], [0.0, 0.0]])
    rho = np.array([[1.0, 0.0], [0.0, 0.0]])
    return float(abs(np.trace(z0 @ plus @ rho @ minus @ z0)))


def check_histories(rng: np.random.Generator, families: int = 20) -> tuple[bool, dict]:
    sum_err = 0.0
    consistent = 0.0
    grained = 0.0
    additivity = 0.0
    for k in range(families):
        d = 2 + k % 3
        grid = histories.TimeGrid([1.0, 2.0, 3.0], [random_unitary(rng, d) for _ in range(3)])
        rho = random_density(rng, (d,))
        fam = histories.build_consistent_family(rho, grid)
        sum_err = max(sum_err, abs(sum(histories.family_probabilities(fam).values()) - 1))
        consistent = max(consistent, histories.consistency_matrix(fam).max_violation)
        grouping = []
        for _ in range(3):
            labels = rng.integers(0, 2, size=d)
            labels[0], labels[-1] = 0, 1
            grouping.append([np.flatnonzero(labels == g).tolist() for g in (0, 1)])
        coarse = histories.coarse_grain(fam, grouping)
        grained = max(grained, histories.consistency_matrix(coarse).max_violation)
        additivity = max(additivity, max(abs(r.delta) for r in histories.additivity_report(fam, grouping)))
        # an arbitrary, generally inconsistent family still sums to one
        sets = []
        for _ in range(3):
            u = random_unitary(rng, d)
            sets.append(tuple(np.outer(u[:, j], u[:, j].conj()) for j in range(d)))
        arb = histories.HistoryFamily(grid, tuple(sets), rho)
        sum_err = max(sum_err, abs(sum(histories.family_probabilities(arb).values()) - 1))
    xz = histories.consistency_matrix(histories.sigma_x_then_z_family()).max_violation
    oracle = _sigma_x_z_oracle()
    ok = (
        sum_err < 1e-10
        and consistent < 1e-12
        and grained < 1e-12
        and additivity < 1e-10
        and abs(xz - 0.25) < 1e-12
        and abs(xz - oracle) < 1e-12
    )
    return ok, {
        "families": families,
        "max_sum_error": sum_err,
        "max_consistent_violation": consistent,
        "max_coarse_grained_violation": grained,
        "max_additivity_defect": additivity,
        "sigma_x_z_violation": xz,
        "sigma_x_z_oracle": oracle,
    }


def check_nosignal(rng: np.random.Generator, states: int = 100) -> tuple[bool, dict]:
    path = choice = 0.0
    for k in range(states):
        dims = (2, 2) if k % 2 == 0 else (2, 4)
        rho = random_density(rng, dims)
        choices = [random_hermitian(rng, dims[0]) for _ in range(3)]
        rep = nosignal.no_signaling_check(rho, choices, random_hermitian(rng, dims[1]))
        path = max(path, rep.max_path_discrepancy)
        choice = max(choice, rep.max_choice_discrepancy)
    return path < 1e-12 and choice < 1e-12, {
        "states": states,
        "max_choice_discrepancy": choice,
        "max_path_discrepancy": path,
    }


CHECKS: list[tuple[int, str, Callable[[np.random.Generator], tuple[bool, dict]]]] = [
    (1, "chsh_violation", check_chsh),
    (2, "singlet_law", check_singlet_law),
    (3, "local_bound", check_local_bound),
    (4, "ghz", check_ghz),
    (5, "all_or_nothing", check_all_or_nothing),
    (6, "hardy", check_hardy),
    (7, "bks", check_bks),
    (8, "decoherence", check_decoherence),
    (9, "histories", check_histories),
    (10, "no_signaling", check_nosignal),
]


def run_checks(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    children = np.random.SeedSequence(seed).spawn(len(CHECKS))
    out = []
    for (number, name, fn), child in zip(CHECKS, children):
        t0 = time.perf_counter()
        passed, metrics = fn(np.random.default_rng(child))
        out.append(CheckResult(number, name, bool(passed), metrics, time.perf_counter() - t0))
    return out


def run_all(seed: int = DEFAULT_SEED, render: Callable[[list[dict]], str] | None = None) -> list[CheckResult]:
    """Checks 1 to 10, then a second full run compared byte for byte with the first."""
    from .report import to_json

    render = render or (lambda rows: to_json(rows))
    first = run_checks(seed)
    t0 = time.perf_counter()
    second = run_checks(seed)
    same = render([r.as_dict() for r in first]) == render([r.as_dict() for r in second])
    first.append(CheckResult(11, "reproducibility", same, {"seed": seed, "identical_reports": same}, time.perf_counter() - t0))
    return first
