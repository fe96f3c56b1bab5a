"""Command-line harness.

Subcommands: `solve` (one run), `bench` (config-driven eps matrix), `rates`
(classify a stored trace), `bounds` (print the closed-form predictors).
Exit codes: 0 success, 2 bad config, 3 safeguard termination, 4 I/O failure.
"""

import argparse
import json
import math
import sys

from . import bounds as bnd
from .bounds import HebParams
from .harness import ConfigError, run_experiment
from .rates import fit_rate
from .solvers import SAFEGUARD
from .trace import load_trace

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SAFEGUARD = 3
EXIT_IO = 4


def _load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc


def _apply_overrides(config, args):
    run_cfg = config.setdefault("run", {})
    if args.eps is not None:
        run_cfg["eps"] = args.eps
        run_cfg.pop("eps_grid", None)
    if args.seed is not None:
        config.setdefault("problem", {})["seed"] = args.seed
    if args.format is not None:
        run_cfg["format"] = args.format
    return config


def _cmd_solve(args):
    config = _apply_overrides(_load_config(args.config), args)
    config.setdefault("run", {}).pop("eps_grid", None)
    summaries, status = run_experiment(config, out_dir=args.out)
    if not args.quiet:
        json.dump(summaries[0], sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_SAFEGUARD if status == SAFEGUARD else EXIT_OK


def _cmd_bench(args):
    config = _apply_overrides(_load_config(args.config), args)
    summaries, status = run_experiment(config, out_dir=args.out)
    if not args.quiet:
        for s in summaries:
            ratio = s.get("measured_over_predicted")
            line = (
                f"eps={s['eps']:.3e} status={s['status']} "
                f"N={s['measured']['apgiter_total']} g={s['measured']['final_g_norm']:.3e}"
            )
            if ratio is not None:
                line += f" measured/predicted={ratio:.4f}"
            print(line)
    return EXIT_SAFEGUARD if status == SAFEGUARD else EXIT_OK


def _restart_series(records):
    """Per-restart mapping-norm series from trace rows: the last recorded norm
    of each outer index."""
    series = []
    by_t = {}
    for rec in records:
        by_t[rec.outer_t] = rec.g_map_norm
    for t in sorted(by_t):
        series.append((t, by_t[t]))
    return series


def _cmd_rates(args):
    try:
        records = load_trace(args.trace)
    except OSError as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.series == "restart":
        series = _restart_series(records)
    else:
        series = [(i, rec.g_map_norm) for i, rec in enumerate(records)]
    try:
        fit = fit_rate(series)
    except ValueError as exc:
        print(f"cannot fit: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = {
        "classification": fit.classification,
        "rate_param": fit.rate_param,
        "r2": fit.r2,
        "low_confidence": fit.low_confidence,
        "points": len(series),
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _cmd_bounds(args):
    spec = _load_config(args.config).get("bounds") if args.config else {}
    if spec is None:
        spec = {}
    for key in (
        "kappa", "rho", "theta", "beta", "gamma_inc", "gamma_reg",
        "lf", "l_min", "eps", "g0_norm", "sigma0", "dist", "delta0",
    ):
        val = getattr(args, key, None)
        if val is not None:
            spec[key] = val
    if args.eps is not None:
        spec["eps"] = args.eps
    try:
        theta = spec.get("theta", 0.5)
        beta = spec.get("beta", 1.0)
        gi = spec.get("gamma_inc", 2.0)
        gr = spec.get("gamma_reg", 2.0)
        lf = spec["lf"]
        l_min = spec.get("l_min", lf)
        eps = spec["eps"]
        out = {}
        if spec.get("dist") is not None:
            out["sigma_threshold"] = bnd.sigma_threshold(spec["dist"], eps, beta)
            if spec.get("sigma0") is not None and spec["sigma0"] >= out["sigma_threshold"]:
                out["ada_apg_bound"] = bnd.ada_apg_bound(
                    eps, spec["sigma0"], spec["dist"], beta, gi, gr, lf
                )
        if spec.get("kappa") is not None and spec.get("rho") is not None:
            heb = HebParams(spec["kappa"], spec["rho"])
            if heb.rho >= 2:
                out["sigma_bar"] = bnd.sigma_bar(heb, theta, beta, lf, l_min, eps=eps)
            elif spec.get("delta0") is not None:
                out["sigma_bar"] = bnd.sigma_bar(
                    heb, theta, beta, lf, l_min, delta0=spec["delta0"]
                )
            if heb.rho < 2 and spec.get("sigma0") is not None:
                out["eps_star"] = bnd.eps_star(heb, theta, gi, lf, l_min, spec["sigma0"])
            if spec.get("g0_norm") is not None and spec.get("sigma0") is not None:
                need_delta = heb.rho < 2
                if not need_delta or spec.get("delta0") is not None:
                    out["restart_bound"] = bnd.restart_scheme_bound(
                        heb, eps, spec["g0_norm"], spec["sigma0"], theta, beta,
                        gi, gr, lf, l_min, delta0=spec.get("delta0"),
                    )
    except (KeyError, ValueError) as exc:
        print(f"bad bounds inputs: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    json.dump(out, sys.stdout, indent=2, default=lambda o: repr(o))
    sys.stdout.write("\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="adapg",
        description="Adaptive accelerated proximal-gradient benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment config")
    common.add_argument("--out", help="output directory for traces/summary")
    common.add_argument("--format", choices=("csv", "json"), help="trace format")
    common.add_argument("--seed", type=int, help="override problem seed")
    common.add_argument("--eps", type=float, help="override target tolerance")
    common.add_argument("--quiet", action="store_true")

    p_solve = sub.add_parser("solve", parents=[common], help="run one experiment")
    p_solve.set_defaults(func=_cmd_solve)
    p_bench = sub.add_parser("bench", parents=[common], help="run an eps matrix")
    p_bench.set_defaults(func=_cmd_bench)

    p_rates = sub.add_parser("rates", parents=[common], help="fit rates from a trace")
    p_rates.add_argument("trace", help="trace CSV/JSON written by solve/bench")
    p_rates.add_argument(
        "--series", choices=("restart", "full"), default="restart",
        help="fit the per-restart norms (default) or every row",
    )
    p_rates.set_defaults(func=_cmd_rates)

    p_bounds = sub.add_parser(
        "bounds", parents=[common], help="print the closed-form predictors"
    )
    for key in ("kappa", "rho", "theta", "beta", "gamma_inc", "gamma_reg",
                "lf", "l_min", "g0_norm", "sigma0", "dist", "delta0"):
        p_bounds.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float)
    p_bounds.set_defaults(func=_cmd_bounds)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("solve", "bench") and not args.config:
        print("solve/bench require --config", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
