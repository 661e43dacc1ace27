"""Command-line entry point (``rasec``)."""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

from .avg_secrecy import avg_cs_mc, avg_cs_quad, optimize_alpha
from .config import ExperimentConfig, describe, load_config
from .errors import ConfigError, NonConvergent
from .experiments import FIGURES, run_figure, to_csv
from .geometry import alpha_max, alpha_upper, scenario_warnings
from .los_solver import solve_near_optimal
from .outage import sop_mc

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, help="Monte Carlo seed (overrides the config)")
    p.add_argument("--samples", type=int, help="Monte Carlo sample count (overrides the config)")
    p.add_argument("--tol", type=float, help="alpha tolerance of the line search")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="rasec", description="Secrecy capacity and outage tools for a rotatable antenna link.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", parents=[common], help="maximise E[C_s] over alpha")
    p.add_argument("config")
    p = sub.add_parser("los-solve", parents=[common], help="closed-form LoS boresight")
    p.add_argument("config")
    p = sub.add_parser("avg-capacity", parents=[common], help="E[C_s] at a given alpha")
    p.add_argument("config")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--method", choices=("mc", "quad"), default="quad")
    p = sub.add_parser("sop", parents=[common], help="secrecy outage probability")
    p.add_argument("config")
    p.add_argument("--rs", type=float, required=True, help="target secrecy rate, bps/Hz")
    p.add_argument("--alpha", type=float, help="boresight factor (default: LoS solution)")
    p = sub.add_parser("figure", parents=[common], help="write figure data as CSV")
    p.add_argument("name", choices=FIGURES)
    p.add_argument("config")
    p.add_argument("-o", "--output", help="CSV path (default: config [output] path or stdout)")
    p = sub.add_parser("validate", parents=[common], help="parse and check a config")
    p.add_argument("config")
    return parser


def _apply_overrides(cfg: ExperimentConfig, args, sop: bool = False) -> ExperimentConfig:
    est = cfg.estimator
    changes = {}
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed must be nonnegative")
        changes["seed"] = args.seed
    if args.samples is not None:
        if args.samples < 1:
            raise ConfigError("--samples must be >= 1")
        changes["samples"] = changes["sop_samples"] = args.samples
    if args.tol is not None:
        if not args.tol > 0:
            raise ConfigError("--tol must be > 0")
        changes["tol_alpha"] = args.tol
    return replace(cfg, estimator=replace(est, **changes)) if changes else cfg


def _check_alpha(s, alpha):
    hi = alpha_upper(s)
    if not (1.0 <= alpha <= hi * (1 + 1e-12)):
        raise ConfigError(f"--alpha must lie in [1, {hi:.12g}]")


def _run(args, out) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    s = cfg.scenario
    est = cfg.estimator
    if args.command == "validate":
        print("ok", file=out)
        for line in describe(cfg):
            print(line, file=out)
        for note in scenario_warnings(s):
            print(f"warning: {note}", file=out)
        return EXIT_OK
    if args.command == "optimize":
        r = optimize_alpha(s, est.tol_alpha, est.quadrature)
        print(f"alpha_opt = {r.alpha_opt:.12g}", file=out)
        print(f"avg_cs = {r.value.value:.12g}", file=out)
        print(f"alpha_max = {alpha_max(s):.12g}", file=out)
        print(f"iterations = {r.iterations}", file=out)
        print(f"bracket_width = {r.bracket_width:.3g}", file=out)
        return EXIT_OK
    if args.command == "los-solve":
        r = solve_near_optimal(s)
        print(f"branch = {r.branch}", file=out)
        print(f"alpha_opt = {r.alpha_opt:.12g}", file=out)
        print(f"alpha_max = {r.alpha_max:.12g}", file=out)
        if r.gamma0 is not None:
            db = 10 * math.log10(r.gamma0)
            print(f"gamma0 = {r.gamma0:.12g} (P = {db + s.sigma2_dbm:.6g} dBm)", file=out)
        print(f"cs_los = {r.capacity:.12g}", file=out)
        if r.clamped:
            print("note: interior root clamped to [1, alpha_max]", file=out)
        return EXIT_OK
    if args.command == "avg-capacity":
        _check_alpha(s, args.alpha)
        if args.method == "mc":
            r = avg_cs_mc(s, args.alpha, est.samples, est.seed)
            print(f"avg_cs = {r.value:.12g}", file=out)
            print(f"std_error = {r.std_error:.6g}", file=out)
            print(f"samples = {int(r.samples_or_tol)}", file=out)
        else:
            r = avg_cs_quad(s, args.alpha, est.quadrature)
            print(f"avg_cs = {r.value:.12g}", file=out)
            print(f"error_estimate = {r.error_estimate:.3g}", file=out)
        return EXIT_OK
    if args.command == "sop":
        if args.rs < 0:
            raise ConfigError("--rs must be >= 0")
        alpha = args.alpha
        if alpha is None:
            alpha = solve_near_optimal(s).alpha_opt
        else:
            _check_alpha(s, alpha)
        n = args.samples if args.samples is not None else est.sop_samples
        pt = sop_mc(s, alpha, args.rs, n, est.seed)
        print(f"alpha = {alpha:.12g}", file=out)
        if pt.sop_theory is not None:
            print(f"sop_theory = {pt.sop_theory:.12g}", file=out)
        print(f"sop_mc = {pt.sop_mc:.12g}", file=out)
        print(f"ci95 = [{pt.ci_low:.6g}, {pt.ci_high:.6g}]", file=out)
        return EXIT_OK
    if args.command == "figure":
        text = to_csv(run_figure(args.name, cfg))
        path = args.output or cfg.output
        if path is None or path == "-":
            out.write(text)
        else:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return EXIT_OK
    raise AssertionError(args.command)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return _run(args, out)
    except NonConvergent as exc:
        print(f"error: numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError) as exc:
        # geometry errors (degenerate positions, undefined alpha_max) are
        # problems with the scenario, so they share the config exit code
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
