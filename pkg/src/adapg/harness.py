"""Config-driven experiment runner: build a problem, run a solver, write the
trace and a measured-vs-predicted summary."""

import json
import math
import time
from pathlib import Path

import numpy as np

from . import bounds as bnd
from .core import SolverParams
from .engine import pg_step
from .solvers import (
    CONVERGED,
    SAFEGUARD,
    ada_apg,
    apg_fixed_sigma,
    choose_sigma0,
    pg_solve,
    r_ada_apg,
)
from .testbed import (
    dist_to_opt,
    make_lasso,
    make_norm_power_nonsmooth,
    make_quadratic,
    make_sharp,
    make_smooth_power,
    phi_opt,
)
from .trace import export_trace

PROBLEM_KINDS = ("quadratic", "sharp", "norm-power", "smooth-power", "lasso")
SOLVER_KINDS = ("pg", "apg-fixed-sigma", "ada-apg", "r-ada-apg")

PARAM_KEYS = (
    "gamma_inc",
    "gamma_dec",
    "l_min",
    "gamma_reg",
    "beta",
    "theta",
    "eps",
    "max_oracle_calls",
)


class ConfigError(ValueError):
    pass


def build_problem(spec):
    kind = spec.get("kind")
    n = spec.get("n")
    p = spec.get("params", {})
    seed = spec.get("seed", 0)
    try:
        if kind == "quadratic":
            return make_quadratic(n, p.get("eig_min", 1.0), p.get("eig_max", 100.0), seed)
        if kind == "sharp":
            return make_sharp(n, p.get("x0_scale", 1.0))
        if kind == "norm-power":
            return make_norm_power_nonsmooth(n, p["rho"])
        if kind == "smooth-power":
            return make_smooth_power(n, p.get("p", 4))
        if kind == "lasso":
            return make_lasso(p.get("m", 2 * n), n, p.get("lam", 0.1), seed)
    except (TypeError, KeyError, ValueError) as exc:
        raise ConfigError(f"bad problem spec: {exc}") from exc
    raise ConfigError(f"problem.kind must be one of {PROBLEM_KINDS}, got {kind!r}")


def _resolve_x0(hp, run_cfg, seed):
    if "x0" in run_cfg and run_cfg["x0"] is not None:
        x0 = np.asarray(run_cfg["x0"], dtype=float)
        if x0.shape != hp.x0.shape:
            raise ConfigError(f"x0 length {x0.size} != problem dimension {hp.x0.size}")
        return x0
    radius = run_cfg.get("x0_offset_radius")
    if radius is not None:
        if hp.opt_point is None:
            raise ConfigError("x0_offset_radius needs a problem with analytic optimum")
        rng = np.random.default_rng(seed + 1)
        u = rng.standard_normal(hp.x0.size)
        return hp.opt_point + float(radius) * u / np.linalg.norm(u)
    return hp.x0.copy()


def _solver_params(cfg, eps, max_calls):
    kwargs = {k: cfg[k] for k in PARAM_KEYS if k in cfg}
    kwargs["eps"] = eps
    if max_calls is not None:
        kwargs["max_oracle_calls"] = int(max_calls)
    try:
        return SolverParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"bad solver params: {exc}") from exc


def run_single(config, eps, out_dir=None, tag=""):
    """One deterministic run; returns (summary dict, trace records)."""
    prob_cfg = config.get("problem", {})
    solver_cfg = config.get("solver", {})
    run_cfg = config.get("run", {})
    kind = solver_cfg.get("kind")
    if kind not in SOLVER_KINDS:
        raise ConfigError(f"solver.kind must be one of {SOLVER_KINDS}, got {kind!r}")

    hp = build_problem(prob_cfg)
    x0 = _resolve_x0(hp, run_cfg, prob_cfg.get("seed", 0))
    params = _solver_params(
        solver_cfg.get("params", {}), eps, run_cfg.get("max_oracle_calls")
    )
    l_init = solver_cfg.get("params", {}).get("l_init", params.l_min)
    clock = None
    if run_cfg.get("timing", False):
        start = time.perf_counter()
        clock = lambda: time.perf_counter() - start

    problem = hp.fresh_problem()
    eps0_mode = run_cfg.get("eps0_mode", "upper")
    extra = {}

    if kind == "pg":
        result, rows = pg_solve(
            problem, x0, l_init, eps, params, clock=clock,
            max_steps=int(solver_cfg.get("params", {}).get("max_steps", 10_000_000)),
        )
        restarts = 0
    elif kind == "apg-fixed-sigma":
        sigma = solver_cfg.get("params", {}).get("sigma")
        if sigma is None:
            raise ConfigError("apg-fixed-sigma needs solver.params.sigma")
        result, rows = apg_fixed_sigma(
            problem, x0, float(sigma), l_init, params,
            eps=eps,
            max_steps=int(solver_cfg.get("params", {}).get("max_steps", 10_000)),
            clock=clock,
        )
        restarts = 0
    elif kind == "ada-apg":
        sigma0 = solver_cfg.get("params", {}).get("sigma0")
        probe, _ = pg_step(problem, x0, l_init, params)
        extra["g0_norm"] = probe.g_norm
        if probe.g_norm <= eps:
            from .solvers import AdaApgResult

            result = AdaApgResult(
                sigma_final=math.nan, x=x0, x_prox=probe.point, M=probe.L,
                L=l_init, g_norm=probe.g_norm, status=CONVERGED,
                apgiter_total=0, loops=[],
            )
            rows = []
        else:
            if sigma0 is None:
                sigma0 = choose_sigma0(probe.L, probe.g_norm, eps, params.beta, eps0_mode)
            extra["sigma0"] = float(sigma0)
            result, rows = ada_apg(
                problem, x0, l_init, float(sigma0), eps, params,
                collect_trace=True, clock=clock,
            )
        restarts = 0
    else:
        result, rows = r_ada_apg(
            problem, x0, l_init, eps, params,
            sigma0=solver_cfg.get("params", {}).get("sigma0"),
            collect_trace=True, clock=clock,
        )
        restarts = max(0, len(result.records) - 1)
        extra["sigma0"] = result.sigma0
        if result.records:
            extra["g0_norm"] = result.records[0].g_norm_t

    summary = {
        "problem": prob_cfg,
        "solver": kind,
        "eps": eps,
        "status": result.status,
        "measured": {
            "apgiter_total": result.apgiter_total,
            "restarts": restarts,
            "final_g_norm": result.g_norm,
            "phi_final": problem.phi_uncounted(result.x_prox),
            "counters": {
                "f_evals": problem.counters.f_evals,
                "grad_evals": problem.counters.grad_evals,
                "prox_evals": problem.counters.prox_evals,
            },
        },
    }
    summary.update(extra)
    summary["predicted"] = _predictions(hp, x0, kind, eps, params, extra)
    if summary["predicted"].get("apgiter_bound") and result.apgiter_total:
        summary["measured_over_predicted"] = (
            result.apgiter_total / summary["predicted"]["apgiter_bound"]
        )

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        fmt = config.get("run", {}).get("format", "csv")
        trace_path = out_dir / f"trace-{kind}-{hp.name}{tag}.{fmt}"
        export_trace(rows, trace_path, fmt)
        summary["trace_path"] = str(trace_path)
    return summary, rows


def _predictions(hp, x0, kind, eps, params, extra):
    """Closed-form bounds, emitted only when their inputs are analytic."""
    pred = {}
    if hp.opt_point is None:
        return pred
    dist = dist_to_opt(hp, x0)
    if dist > 0 and eps > 0:
        pred["sigma_threshold"] = bnd.sigma_threshold(dist, eps, params.beta)
    if kind == "ada-apg" and "sigma0" in extra and dist > 0 and eps > 0:
        s0 = extra["sigma0"]
        if s0 >= pred["sigma_threshold"]:
            pred["apgiter_bound"] = bnd.ada_apg_bound(
                eps, s0, dist, params.beta, params.gamma_inc, params.gamma_reg,
                hp.lf_true,
            )
        else:
            pred["apgiter_bound"] = bnd.ada_apg_small_sigma_bound(
                s0, params.beta, params.gamma_inc, hp.lf_true
            )
    if kind == "r-ada-apg" and hp.heb is not None and "g0_norm" in extra:
        g0 = extra["g0_norm"]
        s0 = extra.get("sigma0")
        if g0 > 0 and s0 is not None and math.isfinite(s0) and eps > 0:
            delta0 = None
            if hp.heb.rho < 2:
                delta0 = hp.fresh_problem().phi_uncounted(x0) - phi_opt(hp)
            report = bnd.restart_scheme_bound(
                hp.heb, eps, g0, s0, params.theta, params.beta,
                params.gamma_inc, params.gamma_reg, hp.lf_true, params.l_min,
                delta0=delta0,
            )
            pred["restart_bound"] = report
            pred["apgiter_bound"] = report["n_total"]
            if hp.heb.rho < 2:
                pred["eps_star"] = report["eps_star"]
    return pred


def run_experiment(config, out_dir=None):
    """Run the configured experiment (single eps or an eps grid).

    Returns (summaries, status) where status is the worst exit status seen.
    Writes one trace per run plus summary.json when out_dir is given.
    """
    run_cfg = config.get("run", {})
    grid = run_cfg.get("eps_grid")
    eps_list = [float(e) for e in grid] if grid else [float(run_cfg.get("eps", 1e-8))]
    if not eps_list or any(e < 0 for e in eps_list):
        raise ConfigError("run.eps / run.eps_grid must be nonnegative")
    summaries = []
    status = CONVERGED
    for i, eps in enumerate(eps_list):
        tag = f"-eps{i}" if grid else ""
        summary, _ = run_single(config, eps, out_dir=out_dir, tag=tag)
        summaries.append(summary)
        if summary["status"] == SAFEGUARD:
            status = SAFEGUARD
    if out_dir is not None:
        path = Path(out_dir) / "summary.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(summaries if grid else summaries[0], fh, indent=2)
    return summaries, status
