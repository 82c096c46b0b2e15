"""``qfound`` command line: one subcommand per demonstration plus ``verify-all``.

Exit status is 0 on success, 1 when a checked invariant fails and 2 on a
usage error (including an unreadable family file).
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import acceptance, bell, contextuality, decoherence, ghz, hardy, histories, nosignal
from .linalg import SX, SZ, random_density, random_hermitian
from .report import jsonable, to_json, write_csv

DEFAULT_SEED = acceptance.DEFAULT_SEED


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    tol: float | None = None
    output_format: str = "human"
    csv_path: str | None = None
    samples: int | None = None
    grid: int = 64

    def __post_init__(self):
        if self.samples is not None and self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.grid < 8:
            raise ValueError("grid must be at least 8")

    def tolerance(self, default: float) -> float:
        return default if self.tol is None else self.tol

    def count(self, default: int) -> int:
        return default if self.samples is None else self.samples


class Outcome:
    """What a subcommand produced: report, pass/fail, optional CSV table."""

    def __init__(self, report: dict, ok: bool = True, header=None, rows=None, lines=None):
        self.report = report
        self.ok = ok
        self.header = header
        self.rows = rows
        self.lines = lines


def _signs(mats) -> str:
    out = []
    for m in mats:
        s = int(round(np.trace(m).real / m.shape[0]))
        out.append(f"{s:+d}")
    return ",".join(out)


# ---------------------------------------------------------------- subcommands

def cmd_chsh(cfg: RunConfig, args) -> Outcome:
    state = bell.singlet()
    tol = cfg.tolerance(1e-6)
    if args.optimize:
        opt = bell.chsh_optimize(state, grid_size=cfg.grid)
        settings, value = opt.settings, opt.value
    else:
        settings = bell.OPTIMAL_SINGLET
        value = bell.chsh_value(state, settings)
    s = settings
    report = {
        "settings": {"a": s.a, "a_prime": s.a_prime, "b": s.b, "b_prime": s.b_prime},
        "value": value,
        "abs_value": abs(value),
        "tsirelson": bell.TSIRELSON,
        "local_bound": 2.0,
        "violates_local_bound": abs(value) > 2.0,
    }
    ok = abs(value) <= bell.TSIRELSON + tol
    if args.optimize:
        ok = ok and abs(abs(value) - bell.TSIRELSON) < tol
    rows = bell.singlet_sweep(360)
    return Outcome(report, ok, ["theta_deg", "p_pp", "p_pm", "p_mp", "p_mm", "E"], rows.tolist())


def cmd_lhv(cfg: RunConfig, args) -> Outcome:
    rng = np.random.default_rng(cfg.seed)
    n = cfg.count(10_000)
    det = np.array([bell.lhv_chsh(bell.random_deterministic_model(rng)) for _ in range(n)])
    sto = np.array([
        bell.stochastic_local_chsh(bell.random_stochastic_model(rng), bell.random_settings(rng)) for _ in range(n)
    ])
    tol = cfg.tolerance(1e-12)
    report = {
        "samples": n,
        "max_abs_deterministic": float(np.abs(det).max()),
        "max_abs_stochastic": float(np.abs(sto).max()),
        "uniform_mixture": bell.lhv_chsh(bell.uniform_strategy_mixture()),
        "bound": 2.0,
    }
    ok = np.abs(det).max() <= 2.0 and np.abs(sto).max() <= 2.0 + tol
    rows = [("deterministic", k, v) for k, v in enumerate(det)] + [("stochastic", k, v) for k, v in enumerate(sto)]
    return Outcome(report, bool(ok), ["model", "index", "value"], rows)


def cmd_ghz(cfg: RunConfig, args) -> Outcome:
    state = ghz.ghz3(-1)
    products = {axes: ghz.product_op_expectation(state, axes) for axes in ("yyx", "xyy", "yxy", "xxx")}
    parity = ghz.local_realist_parity()
    tol = cfg.tolerance(1e-12)
    report = {
        "products": {k: {"eigenvalue": r.eigenvalue, "residual": r.residual} for k, r in products.items()},
        "total_assignments": parity["total_assignments"],
        "satisfying_assignments": parity["satisfying_assignments"],
        "local_xxx_products": parity["xxx_products"],
        "contradiction": parity["contradiction"],
    }
    ok = parity["contradiction"] and all(r.residual < tol for r in products.values())
    rows = [(k, r.expectation, r.eigenvalue, r.residual) for k, r in products.items()]
    return Outcome(report, ok, ["axes", "expectation", "eigenvalue", "residual"], rows)


def cmd_allornothing(cfg: RunConfig, args) -> Outcome:
    if not 2 <= args.n <= ghz.MAX_SPINS:
        raise UsageError(f"--n must be in 2..{ghz.MAX_SPINS}")
    rng = np.random.default_rng(cfg.seed)
    st = ghz.AllOrNothingState.with_phase(args.n, args.phi)
    vec = st.vector()
    rows, worst = [], 0.0
    for k in range(cfg.count(100)):
        thetas = rng.uniform(0, 2 * math.pi, size=args.n)
        e = ghz.transverse_correlation(vec, thetas)
        expected = math.cos(thetas.sum() - args.phi)
        worst = max(worst, abs(e - expected))
        rows.append((k, float(thetas.sum()), e, expected))
    coherence = [ghz.subsystem_coherence(st, k) for k in range(1, args.n + 1)]
    tol = cfg.tolerance(1e-10)
    report = {
        "n": args.n,
        "phi": args.phi,
        "angle_sets": len(rows),
        "max_corr_error": worst,
        "subsystem_coherence": coherence,
    }
    ok = worst < tol and max(coherence[:-1]) < 1e-12
    return Outcome(report, ok, ["index", "sum_theta", "E", "cos_sum_minus_phi"], rows)


def cmd_hardy(cfg: RunConfig, args) -> Outcome:
    opt = hardy.hardy_maximize()
    tol = cfg.tolerance(1e-6)
    thetas = (np.arange(1000) + 0.5) * (math.pi / 2) / 1000
    overlap = 0.0
    rows = []
    for th in thetas:
        rep = hardy.verify_exclusions(hardy.hardy_state(float(th)))
        overlap = max(overlap, rep.overlap_first, rep.overlap_second, rep.overlap_minus_minus)
        rows.append((float(th), hardy.hardy_prob(float(th))))
    report = {
        "theta_star": opt.theta_star,
        "p_star": opt.p_star,
        "p_from_state": opt.p_from_state,
        "p_closed_form": hardy.P_OPT,
        "sin2_theta_star": math.sin(opt.theta_star) ** 2,
        "max_exclusion_overlap": overlap,
    }
    ok = abs(opt.p_star - hardy.P_OPT) < tol and overlap < 1e-12
    return Outcome(report, ok, ["theta", "p"], rows)


def cmd_bks(cfg: RunConfig, args) -> Outcome:
    sq = contextuality.mermin_square()
    rep = contextuality.square_report(sq)
    col = contextuality.coloring_search()
    s1 = contextuality.spin1_squares()
    tol = cfg.tolerance(1e-12)
    report = {
        "row_products": _signs(sq.row_products()),
        "col_products": _signs(sq.col_products()),
        "max_product_residual": max(rep["row_residuals"] + rep["col_residuals"]),
        "max_commutator": rep["max_commutator"],
        "assignments_examined": col["assignments_examined"],
        "colorings_found": col["colorings_found"],
        "spin1_commutator_norms": s1["commutator_norms"],
        "spin1_sum_residual": s1["sum_residual"],
        "categories": contextuality.wigner_category_count(),
    }
    ok = (
        col["colorings_found"] == 0
        and report["max_product_residual"] < tol
        and rep["max_commutator"] < tol
        and s1["sum_residual"] < tol
    )
    rows = [("row", k, s) for k, s in enumerate(sq.row_signs)] + [("col", k, s) for k, s in enumerate(sq.col_signs)]
    return Outcome(report, ok, ["line", "index", "sign"], rows)


def cmd_decoherence(cfg: RunConfig, args) -> Outcome:
    g = complex(args.g)
    if abs(g) > 1:
        raise UsageError("--g must satisfy |g| <= 1")
    curve = decoherence.decay_curve(g, args.photons)
    st = ghz.AllOrNothingState.with_phase(3, 0.0)
    worst = 0.0
    for m in range(0, 7):
        overlaps = [g] * m
        closed = decoherence.reduced_after_scattering(st.alpha, st.beta, overlaps).matrix
        explicit = decoherence.spin_block(st, [decoherence.photon_modes(x) for x in overlaps]).matrix
        worst = max(worst, float(np.abs(closed - explicit).max()))
    report = {
        "g": abs(g),
        "photons": args.photons,
        "final_coherence": float(curve[-1, 1]),
        "explicit_check_max_error": worst,
    }
    ok = worst < cfg.tolerance(1e-12)
    return Outcome(report, ok, ["n", "coherence"], [(int(n), c) for n, c in curve])


def cmd_histories(cfg: RunConfig, args) -> Outcome:
    if args.family:
        try:
            with open(args.family, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.family}: {exc.strerror}") from None
        try:
            family = histories.load_family(text)
        except histories.FamilySpecError as exc:
            raise UsageError(f"{args.family}: {exc}") from None
    else:
        family = histories.sigma_x_then_z_family()
    probs = histories.family_probabilities(family)
    rep = histories.consistency_matrix(family, args.mode)
    tol = cfg.tolerance(1e-12)
    total = sum(probs.values())
    report = {
        "n_histories": len(probs),
        "prob_sum": total,
        "max_violation": rep.max_violation,
        "mode": args.mode,
        "consistent": rep.max_violation < tol,
        "zero_probability_histories": sum(1 for p in probs.values() if abs(p) < tol),
    }
    ok = abs(total - 1) < 1e-10 and min(probs.values()) >= -1e-12
    rows = [("-".join(map(str, h)), p) for h, p in probs.items()]
    return Outcome(report, ok, ["history", "probability"], rows)


def cmd_nosignal(cfg: RunConfig, args) -> Outcome:
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tolerance(1e-12)
    singlet = nosignal.no_signaling_check(bell.singlet(), [SZ, SX, bell.spin_along(math.radians(37))], SZ)
    path = choice = 0.0
    rows = []
    for k in range(cfg.count(100)):
        dims = (2, 2) if k % 2 == 0 else (2, 4)
        rho = random_density(rng, dims)
        rep = nosignal.no_signaling_check(rho, [random_hermitian(rng, dims[0]) for _ in range(3)], random_hermitian(rng, dims[1]))
        path = max(path, rep.max_path_discrepancy)
        choice = max(choice, rep.max_choice_discrepancy)
        rows.append((k, f"{dims[0]}x{dims[1]}", rep.max_choice_discrepancy, rep.max_path_discrepancy))
    report = {
        "singlet_marginals": singlet.marginals,
        "states": len(rows),
        "max_choice_discrepancy": choice,
        "max_path_discrepancy": path,
    }
    ok = singlet.ok and path < tol and choice < tol
    return Outcome(report, ok, ["index", "dims", "choice_discrepancy", "path_discrepancy"], rows)


def cmd_verify_all(cfg: RunConfig, args) -> Outcome:
    results = acceptance.run_all(cfg.seed)
    lines = [f"[{'PASS' if r.passed else 'FAIL'}] {r.number:2d} {r.name}" for r in results]
    report = {"seed": cfg.seed, "criteria": [r.as_dict() for r in results], "all_passed": all(r.passed for r in results)}
    rows = [(r.number, r.name, "pass" if r.passed else "fail") for r in results]
    return Outcome(report, report["all_passed"], ["criterion", "name", "result"], rows, lines)


COMMANDS: dict[str, Callable[[RunConfig, argparse.Namespace], Outcome]] = {
    "chsh": cmd_chsh,
    "lhv": cmd_lhv,
    "ghz": cmd_ghz,
    "allornothing": cmd_allornothing,
    "hardy": cmd_hardy,
    "bks": cmd_bks,
    "decoherence": cmd_decoherence,
    "histories": cmd_histories,
    "nosignal": cmd_nosignal,
    "verify-all": cmd_verify_all,
}


# ---------------------------------------------------------------- plumbing

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--csv", metavar="PATH", default=None)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--grid", type=int, default=64)

    parser = _Parser(prog="qfound", description="Numerical checks of quantum foundations results.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    sub.add_parser("chsh", parents=[common], help="CHSH value for the singlet").add_argument("--optimize", action="store_true")
    sub.add_parser("lhv", parents=[common], help="random local models against the bound of 2")
    sub.add_parser("ghz", parents=[common], help="three-spin parity contradiction")
    p = sub.add_parser("allornothing", parents=[common], help="N-spin transverse correlations")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--phi", type=float, default=0.0)
    sub.add_parser("hardy", parents=[common], help="maximum probability of the forbidden event")
    sub.add_parser("bks", parents=[common], help="operator square and spin-1 squares")
    p = sub.add_parser("decoherence", parents=[common], help="coherence decay by scattering")
    p.add_argument("--g", type=float, default=0.99)
    p.add_argument("--photons", type=int, default=100)
    p = sub.add_parser("histories", parents=[common], help="history family probabilities and consistency")
    p.add_argument("--family", metavar="PATH", default=None)
    p.add_argument("--mode", choices=("strong", "weak"), default="strong")
    sub.add_parser("nosignal", parents=[common], help="remote marginals under local choices")
    sub.add_parser("verify-all", parents=[common], help="run every acceptance check")
    return parser


def _human(report, indent: int = 0) -> list[str]:
    out = []
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            out.append(f"{pad}{key}:")
            out.extend(_human(value, indent + 1))
        elif isinstance(value, float):
            out.append(f"{pad}{key}: {value:.15g}")
        else:
            out.append(f"{pad}{key}: {value}")
    return out


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        try:
            cfg = RunConfig(args.seed, args.tol, "json" if args.json else "human", args.csv, args.samples, args.grid)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        outcome = COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"qfound: error: {exc}", file=stderr)
        return 2

    if cfg.csv_path and outcome.header is not None:
        try:
            write_csv(cfg.csv_path, outcome.header, outcome.rows)
        except OSError as exc:
            print(f"qfound: error: cannot write {cfg.csv_path}: {exc.strerror}", file=stderr)
            return 2
    if cfg.output_format == "json":
        stdout.write(to_json(outcome.report))
    else:
        if outcome.lines:
            stdout.write("\n".join(outcome.lines) + "\n")
        else:
            stdout.write("\n".join(_human(jsonable(outcome.report))) + "\n")
    return 0 if outcome.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
