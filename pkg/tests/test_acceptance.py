"""One test per acceptance criterion, each printing a PASS/FAIL line."""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from qfound import acceptance

SEED = acceptance.DEFAULT_SEED
CHILDREN = dict(zip([n for n, _, _ in acceptance.CHECKS], np.random.SeedSequence(SEED).spawn(len(acceptance.CHECKS))))


@pytest.fixture
def report(capsys):
    def emit(number, name, passed, detail=""):
        with capsys.disabled():
            print(f"\nacceptance criterion {number:2d} ({name}): {'PASS' if passed else 'FAIL'} {detail}".rstrip())
    return emit


def run_check(number):
    _, name, fn = next(c for c in acceptance.CHECKS if c[0] == number)
    t0 = time.perf_counter()
    passed, metrics = fn(np.random.default_rng(CHILDREN[number]))
    return name, passed, metrics, time.perf_counter() - t0


def test_criterion_01_chsh_violation(report):
    name, passed, m, _ = run_check(1)
    ok = passed and abs(m["value"] - 2 * math.sqrt(2)) < 1e-6 and m["within_time_budget"]
    report(1, name, ok, f"value={m['value']:.12f}")
    assert ok


def test_criterion_02_singlet_law(report):
    name, passed, m, _ = run_check(2)
    ok = passed and m["points"] == 360 and m["max_prob_error"] < 1e-12 and m["max_corr_error"] < 1e-12
    report(2, name, ok, f"prob_err={m['max_prob_error']:.1e} corr_err={m['max_corr_error']:.1e}")
    assert ok


def test_criterion_03_local_bound(report):
    name, passed, m, seconds = run_check(3)
    ok = (
        passed
        and m["deterministic_models"] == m["stochastic_models"] == 10_000
        and m["max_deterministic"] <= 2.0
        and m["max_stochastic"] <= 2.0 + 1e-12
        and seconds < 10.0
    )
    report(3, name, ok, f"det={m['max_deterministic']} sto={m['max_stochastic']:.6f} t={seconds:.1f}s")
    assert ok


def test_criterion_04_ghz(report):
    name, passed, m, _ = run_check(4)
    ok = (
        passed
        and m["yyx_type_eigenvalues"] == [1, 1, 1]
        and m["xxx_eigenvalue"] == -1
        and m["max_residual"] < 1e-12
        and m["assignments"] == 64
        and m["local_xxx_products"] == [1]
    )
    report(4, name, ok, f"residual={m['max_residual']:.1e}")
    assert ok


def test_criterion_05_all_or_nothing(report):
    name, passed, m, _ = run_check(5)
    ok = passed and m["max_corr_error"] < 1e-10 and m["max_reduced_coherence"] < 1e-12 and m["angle_sets_per_n"] == 100
    report(5, name, ok, f"corr_err={m['max_corr_error']:.1e}")
    assert ok


def test_criterion_06_hardy(report):
    name, passed, m, _ = run_check(6)
    ok = (
        passed
        and abs(m["p_star"] - 0.090170) < 1e-6
        and abs(m["sin2_theta_star"] - (3 - math.sqrt(5)) / 2) < 1e-6
        and m["sweep_points"] == 1000
        and m["max_exclusion_overlap"] < 1e-12
    )
    report(6, name, ok, f"p*={m['p_star']:.9f}")
    assert ok


def test_criterion_07_bks(report):
    name, passed, m, _ = run_check(7)
    ok = (
        passed
        and m["max_product_residual"] < 1e-12
        and m["assignments_examined"] == 512
        and m["colorings_found"] == 0
        and m["spin1_max_commutator"] < 1e-12
        and m["spin1_sum_residual"] < 1e-12
    )
    report(7, name, ok, f"colorings={m['colorings_found']}")
    assert ok


def test_criterion_08_decoherence(report):
    name, passed, m, _ = run_check(8)
    ok = passed and m["overlap_sets"] == 100 and m["max_photons"] == 6 and m["max_error"] < 1e-12
    report(8, name, ok, f"err={m['max_error']:.1e}")
    assert ok


def test_criterion_09_histories(report):
    name, passed, m, _ = run_check(9)
    ok = (
        passed
        and m["max_sum_error"] < 1e-10
        and m["max_consistent_violation"] < 1e-12
        and m["max_coarse_grained_violation"] < 1e-12
        and m["max_additivity_defect"] < 1e-10
        and abs(m["sigma_x_z_violation"] - 0.25) < 1e-12
        and abs(m["sigma_x_z_oracle"] - 0.25) < 1e-12
    )
    report(9, name, ok, f"xz={m['sigma_x_z_violation']:.15f}")
    assert ok


def test_criterion_10_no_signaling(report):
    name, passed, m, _ = run_check(10)
    ok = passed and m["states"] == 100 and m["max_choice_discrepancy"] < 1e-12 and m["max_path_discrepancy"] < 1e-12
    report(10, name, ok, f"choice={m['max_choice_discrepancy']:.1e} path={m['max_path_discrepancy']:.1e}")
    assert ok


def test_criterion_11_reproducibility(report):
    cmd = [sys.executable, "-m", "qfound.cli", "verify-all", "--seed", "7", "--json"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    ok = first.returncode == 0 and second.returncode == 0 and first.stdout == second.stdout and len(first.stdout) > 0
    report(11, "reproducibility", ok, f"{len(first.stdout)} bytes")
    assert ok
