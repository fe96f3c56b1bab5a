"""Adaptive regularization solver with sigma-halving outer loop, and its
gradient-mapping-norm restart scheme."""

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .core import SafeguardExceeded, as_vector
from .engine import EstimateState, apg_step, pg_step
from .trace import TraceRecord

CONVERGED = "converged"
SAFEGUARD = "safeguard"
EXHAUSTED = "exhausted"  # fixed-step runs that used their step budget

# Below this the regularization parameter has underflowed any useful scale;
# the run is reported as safeguarded rather than looping forever.
SIGMA_FLOOR = 1e-300

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class LoopSummary:
    """Per-sigma outer-loop digest: index j, sigma_j, APG steps run, exit kind."""

    j: int
    sigma: float
    steps: int
    exit: str  # "converged" | "a_growth" | "safeguard"


@dataclass
class AdaApgResult:
    sigma_final: float
    x: np.ndarray
    x_prox: np.ndarray
    M: float
    L: float
    g_norm: float
    status: str
    apgiter_total: int
    loops: List[LoopSummary] = field(default_factory=list)


@dataclass(frozen=True)
class RestartRecord:
    """One restart of the outer scheme, logged at its stopping test."""

    t: int
    eps_t: float
    sigma_t: float
    g_norm_t: float
    phi_plus_t: float
    apgiter_count: int


@dataclass
class RAdaApgResult:
    x: np.ndarray
    x_prox: np.ndarray
    M: float
    g_norm: float
    status: str
    records: List[RestartRecord]
    sigma0: float
    apgiter_total: int


def choose_sigma0(M, g_norm, eps, beta, mode="upper"):
    """Initial regularization parameter from the admissible interval.

    "upper" returns 2M/(1+sqrt(2)beta), independent of eps (enables the
    eps = 0 convergence mode); "lower" returns the eps-scaled endpoint
    2*eps*M/((1+sqrt(2)beta)*g_norm).  Requires g_norm >= eps > 0.
    """
    if not (eps > 0 and g_norm >= eps):
        raise ValueError("requires g_norm >= eps > 0")
    if not M > 0:
        raise ValueError("M must be positive")
    denom = 1.0 + SQRT2 * beta
    if mode == "upper":
        return 2.0 * M / denom
    if mode == "lower":
        return 2.0 * eps * M / (denom * g_norm)
    raise ValueError(f"unknown sigma0 mode {mode!r}")


def choose_sigma0_heb(problem, x_plus0, L0, eps0, params):
    """Restart-scheme initial sigma: one extra proximal-gradient probe.

    Runs a pg_step at x_plus0 and returns 2*eps0*M/((1+sqrt(2)beta)*||g||);
    falls back to the eps-free endpoint 2M/(1+sqrt(2)beta) when the probe's
    mapping norm is zero (x_plus0 already optimal).
    """
    if not eps0 > 0:
        raise ValueError("eps0 must be positive")
    probe, _ = pg_step(problem, x_plus0, L0, params)
    denom = 1.0 + SQRT2 * params.beta
    if probe.g_norm == 0.0:
        return 2.0 * probe.L / denom
    return 2.0 * eps0 * probe.L / (denom * probe.g_norm)


def _trace_row(problem, out, j, k, sigma, outer_t, clock):
    return TraceRecord(
        outer_t=outer_t,
        sigma_index_j=j,
        inner_k=k,
        sigma=sigma,
        A=out.A_next,
        M=out.M,
        g_map_norm=out.plain_map.g_norm,
        phi_val=problem.phi_uncounted(out.x_next),
        f_evals=problem.counters.f_evals,
        grad_evals=problem.counters.grad_evals,
        prox_evals=problem.counters.prox_evals,
        ls_passes=out.ls_passes,
        skipped_9b=out.skipped_9b,
        elapsed_s=clock() if clock is not None else 0.0,
    )


def ada_apg(
    problem,
    x0,
    L_init,
    sigma0,
    eps,
    params,
    test_9c=False,
    *,
    collect_trace=False,
    trace=None,
    outer_t=0,
    clock=None,
):
    """Adaptive accelerated proximal-gradient method.

    Outer loop j runs the accelerated iteration on the problem regularized by
    sigma_j = sigma0/gamma_reg^j around the fixed center x0, restarting the
    estimate sequence fresh each j and carrying the Lipschitz estimate
    forward.  Terminates once the unregularized mapping norm at the newest
    iterate drops to eps (reusing the T_M point computed inside the step, so
    the test is free); moves to j+1 when the estimate-sequence weight trips
    the growth criterion A >= 2(M+sigma_j)/(beta^2 sigma_j^2), which signals
    the current sigma_j is too large.

    eps = 0 runs until the oracle-call safeguard fires.  Returns
    (AdaApgResult, list of TraceRecord); rows are only collected when
    `collect_trace` (per-loop summaries are always returned on the result).
    """
    x0 = as_vector(x0)
    rows = trace if trace is not None else []
    loops: List[LoopSummary] = []
    total = 0
    L = L_init
    last_out = None
    last_x = x0
    sigma_j = sigma0
    j = 0
    problem.set_call_cap(params.max_oracle_calls)
    try:
        while True:
            sigma_j = sigma0 / params.gamma_reg**j
            if sigma_j < SIGMA_FLOOR:
                raise SafeguardExceeded("regularization parameter underflowed")
            state = EstimateState.fresh(x0, sigma_j)
            x = x0
            k = 0
            while True:
                out, state = apg_step(problem, x, state, L, params, test_9c)
                total += 1
                last_out, last_x = out, out.x_next
                x, L = out.x_next, out.L_next
                if collect_trace:
                    rows.append(_trace_row(problem, out, j, k, sigma_j, outer_t, clock))
                if out.plain_map.g_norm <= eps:
                    loops.append(LoopSummary(j, sigma_j, k + 1, "converged"))
                    result = AdaApgResult(
                        sigma_final=sigma_j,
                        x=out.x_next,
                        x_prox=out.plain_map.point,
                        M=out.M,
                        L=out.L_next,
                        g_norm=out.plain_map.g_norm,
                        status=CONVERGED,
                        apgiter_total=total,
                        loops=loops,
                    )
                    return result, rows
                if out.A_next >= 2.0 * (out.M + sigma_j) / (
                    params.beta**2 * sigma_j**2
                ):
                    loops.append(LoopSummary(j, sigma_j, k + 1, "a_growth"))
                    break
                k += 1
            j += 1
    except SafeguardExceeded:
        loops.append(LoopSummary(j, sigma_j, 0, "safeguard"))
        if last_out is not None:
            result = AdaApgResult(
                sigma_final=sigma_j,
                x=last_x,
                x_prox=last_out.plain_map.point,
                M=last_out.M,
                L=last_out.L_next,
                g_norm=last_out.plain_map.g_norm,
                status=SAFEGUARD,
                apgiter_total=total,
                loops=loops,
            )
        else:
            result = AdaApgResult(
                sigma_final=sigma_j,
                x=x0,
                x_prox=x0.copy(),
                M=math.nan,
                L=L_init,
                g_norm=math.nan,
                status=SAFEGUARD,
                apgiter_total=0,
                loops=loops,
            )
        return result, rows


def r_ada_apg(
    problem,
    x0,
    L_init,
    eps,
    params,
    *,
    sigma0=None,
    collect_trace=False,
    clock=None,
):
    """Restart scheme for the adaptive accelerated proximal-gradient method.

    Initializes with one proximal-gradient step, then repeatedly shrinks the
    gradient-mapping norm by the factor theta: each restart t re-centers the
    adaptive solver at the latest prox point with target theta*||g||, forcing
    the monotone-descent line-search condition, and threads sigma, L, and the
    iterate forward.  sigma0 defaults to the probe-based rule of
    `choose_sigma0_heb` evaluated after the initialization step.
    """
    x0 = as_vector(x0)
    records: List[RestartRecord] = []
    rows: List[TraceRecord] = []
    status = CONVERGED
    sigma_t = sigma0
    sigma0_used = sigma0 if sigma0 is not None else math.nan
    total = 0
    x_t, x_plus, M_t, g_t, L_t = x0, x0.copy(), math.nan, math.nan, L_init
    problem.set_call_cap(params.max_oracle_calls)
    try:
        init_map, L_t = pg_step(problem, x0, L_init, params)
        x_t, x_plus, M_t, g_t = x0, init_map.point, init_map.L, init_map.g_norm
        t = 0
        while True:
            eps_t = params.theta * g_t
            if g_t <= eps:
                records.append(
                    RestartRecord(
                        t=t,
                        eps_t=eps_t,
                        sigma_t=sigma_t if sigma_t is not None else math.nan,
                        g_norm_t=g_t,
                        phi_plus_t=problem.phi_uncounted(x_plus),
                        apgiter_count=0,
                    )
                )
                break
            if sigma_t is None:
                sigma_t = choose_sigma0_heb(problem, x_plus, L_t, eps_t, params)
                sigma0_used = sigma_t
            result, _ = ada_apg(
                problem,
                x_plus,
                L_t,
                sigma_t,
                eps_t,
                params,
                test_9c=True,
                collect_trace=collect_trace,
                trace=rows,
                outer_t=t,
                clock=clock,
            )
            records.append(
                RestartRecord(
                    t=t,
                    eps_t=eps_t,
                    sigma_t=sigma_t,
                    g_norm_t=g_t,
                    phi_plus_t=problem.phi_uncounted(x_plus),
                    apgiter_count=result.apgiter_total,
                )
            )
            total += result.apgiter_total
            x_t, x_plus = result.x, result.x_prox
            M_t, L_t = result.M, result.L
            sigma_t, g_t = result.sigma_final, result.g_norm
            if result.status == SAFEGUARD:
                status = SAFEGUARD
                break
            t += 1
    except SafeguardExceeded:
        status = SAFEGUARD
    return RAdaApgResult(
        x=x_t,
        x_prox=x_plus,
        M=M_t,
        g_norm=g_t,
        status=status,
        records=records,
        sigma0=sigma0_used,
        apgiter_total=total,
    ), rows


@dataclass
class ApgRunResult:
    x: np.ndarray
    x_prox: np.ndarray
    M: float
    g_norm: float
    status: str
    apgiter_total: int


def apg_fixed_sigma(
    problem,
    x0,
    sigma,
    L_init,
    params,
    *,
    eps=0.0,
    max_steps=1000,
    test_9c=False,
    collect_trace=True,
    clock=None,
):
    """Accelerated iteration at one fixed regularization parameter.

    No sigma schedule and no growth criterion; stops at ||g_M(x)|| <= eps or
    after max_steps.  Used to exercise the estimate-sequence guarantees in
    isolation and by the benchmark harness's fixed-sigma mode.
    """
    x0 = as_vector(x0)
    rows: List[TraceRecord] = []
    state = EstimateState.fresh(x0, sigma)
    x, L = x0, L_init
    out = None
    status = SAFEGUARD
    problem.set_call_cap(params.max_oracle_calls)
    steps = 0
    try:
        for k in range(max_steps):
            out, state = apg_step(problem, x, state, L, params, test_9c)
            steps += 1
            x, L = out.x_next, out.L_next
            if collect_trace:
                rows.append(_trace_row(problem, out, 0, k, sigma, 0, clock))
            if out.plain_map.g_norm <= eps:
                status = CONVERGED
                break
        else:
            status = EXHAUSTED
    except SafeguardExceeded:
        status = SAFEGUARD
    if out is None:
        return ApgRunResult(x0, x0.copy(), math.nan, math.nan, status, 0), rows
    return (
        ApgRunResult(x, out.plain_map.point, out.M, out.plain_map.g_norm, status, steps),
        rows,
    )


def pg_solve(
    problem, x0, L_init, eps, params, *, max_steps=10_000_000, collect_trace=True, clock=None
):
    """Plain proximal-gradient descent to ||g_M(x)|| <= eps (harness baseline)."""
    x0 = as_vector(x0)
    rows: List[TraceRecord] = []
    x, L = x0, L_init
    status = SAFEGUARD
    problem.set_call_cap(params.max_oracle_calls)
    res = None
    steps = 0
    try:
        for k in range(max_steps):
            res, L = pg_step(problem, x, L, params)
            steps += 1
            if collect_trace:
                rows.append(
                    TraceRecord(
                        outer_t=0,
                        sigma_index_j=-1,
                        inner_k=k,
                        sigma=0.0,
                        A=0.0,
                        M=res.L,
                        g_map_norm=res.g_norm,
                        phi_val=problem.phi_uncounted(res.point),
                        f_evals=problem.counters.f_evals,
                        grad_evals=problem.counters.grad_evals,
                        prox_evals=problem.counters.prox_evals,
                        ls_passes=0,
                        skipped_9b=0,
                        elapsed_s=clock() if clock is not None else 0.0,
                    )
                )
            if res.g_norm <= eps:
                status = CONVERGED
                break
            x = res.point
    except SafeguardExceeded:
        status = SAFEGUARD
    if res is None:
        return ApgRunResult(x0, x0.copy(), math.nan, math.nan, status, 0), rows
    return ApgRunResult(x, res.point, res.L, res.g_norm, status, steps), rows
