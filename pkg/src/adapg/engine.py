"""Single-step iteration engines: the accelerated step with its implicit
estimate sequence, and the plain proximal-gradient step, both with
backtracking line search."""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .core import OracleError, norm
from .mapping import MapResult, apg_conditions, leq_slack, reg_prox_grad_point


@dataclass(frozen=True)
class EstimateState:
    """Implicit representation of the accumulated lower model.

    Only (center, sigma, A, grad_sum) is stored; the model minimizer v is
    recovered in closed form by `estimate_min`, so memory stays constant.
    A = 0 with zero grad_sum is the fresh state psi_0 = 0.5*||x - center||^2.
    """

    center: np.ndarray
    sigma: float
    A: float
    grad_sum: np.ndarray

    @classmethod
    def fresh(cls, center, sigma):
        c = np.asarray(center, dtype=float)
        return cls(center=c, sigma=float(sigma), A=0.0, grad_sum=np.zeros_like(c))


def estimate_min(state, problem):
    """Minimizer v of the accumulated estimate model.

    v_0 = center; for A > 0, v = prox_{gamma*Psi}(w) with
    gamma = A/(1+sigma*A) and w = center - grad_sum/(1+sigma*A)
    (one prox charge).
    """
    if state.A == 0.0:
        return state.center.copy()
    denom = 1.0 + state.sigma * state.A
    w = state.center - state.grad_sum / denom
    return problem.prox(state.A / denom, w)


def solve_a(A, sigma, L):
    """Largest root a > 0 of a^2/(A+a) = 2(1+sigma*A)/L.

    Equivalent to a^2 - c*a - c*A = 0 with c = 2(1+sigma*A)/L; the
    (c + sqrt(c^2+4cA))/2 form avoids cancellation and is always positive.
    """
    c = 2.0 * (1.0 + sigma * A) / L
    return 0.5 * (c + math.sqrt(c * c + 4.0 * c * A))


@dataclass(frozen=True)
class ApgStepOutput:
    """One accelerated step: new iterate, settled moduli, and reusable maps.

    `plain_map` holds T_M(x_next) and ||g_M(x_next)|| computed during the
    final line-search pass, so the caller's stopping test costs nothing extra.
    `reg_map_norm` is ||g^sigma_{M+sigma}(x_next)||, NaN when the hint
    shortcut skipped that computation.  `phi_next` is phi(x_next) when a
    tested condition already evaluated it, else None.
    """

    x_next: np.ndarray
    M: float
    L_next: float
    A_next: float
    plain_map: MapResult
    reg_map_norm: float
    ls_passes: int
    skipped_9b: int
    phi_next: Optional[float]


def apg_step(problem, x, state, L_in, params, test_9c=False):
    """One accelerated proximal-gradient iteration on the regularized problem.

    Runs the backtracking loop (first trial at L_in, multiplying by gamma_inc)
    until the line-search conditions hold, then commits the extrapolation
    point, the prox step, and the estimate-state update.  Returns
    (ApgStepOutput, new EstimateState).

    Per line-search pass: exactly two gradient charges, at most three phi
    charges, and two or three prox charges; one extra prox for the model
    minimizer outside the loop when A > 0.
    """
    sigma, center, A = state.sigma, state.center, state.A
    v = estimate_min(state, problem)
    hint = problem.lipschitz_hint

    L = L_in / params.gamma_inc
    passes = 0
    skipped = 0
    while True:
        L *= params.gamma_inc
        if not math.isfinite(L):
            raise OracleError("line search diverged: trial modulus overflowed")
        passes += 1
        a = solve_a(A, sigma, L)
        y = v if A == 0.0 else (A * x + a * v) / (A + a)
        grad_y = problem.grad(y)
        z_map = reg_prox_grad_point(problem, sigma, center, y, L, grad_y=grad_y)
        skip_b = hint is not None and L >= hint
        check = apg_conditions(
            problem,
            sigma,
            center,
            y,
            z_map.point,
            L,
            grad_y=grad_y,
            test_c=test_9c,
            skip_b=skip_b,
        )
        if skip_b:
            skipped += 1
        if check.passed:
            break

    M = L
    A_next = A + a
    if not math.isfinite(A_next):
        raise OracleError("estimate-sequence weight overflowed")
    new_state = replace(state, A=A_next, grad_sum=state.grad_sum + a * check.grad_z)
    out = ApgStepOutput(
        x_next=z_map.point,
        M=M,
        L_next=max(params.l_min, M / params.gamma_dec),
        A_next=A_next,
        plain_map=check.plain_map,
        reg_map_norm=check.reg_map.g_norm if check.reg_map is not None else math.nan,
        ls_passes=passes,
        skipped_9b=skipped,
        phi_next=check.phi_z,
    )
    return out, new_state


def pg_step(problem, x, L_in, params):
    """One proximal-gradient iteration with backtracking line search.

    Backtracks from L_in (multiplying by gamma_inc) until the
    sufficient-decrease test holds, then returns (MapResult for T_M(x),
    L_next) with L_next = max(l_min, M/gamma_dec).  The gradient and f value
    at x are evaluated once and shared across passes.
    """
    grad_x = problem.grad(x)
    f_x = problem.f(x)
    L = L_in / params.gamma_inc
    while True:
        L *= params.gamma_inc
        if not math.isfinite(L):
            raise OracleError("line search diverged: trial modulus overflowed")
        point = problem.prox(1.0 / L, x - grad_x / L)
        d = point - x
        model = f_x + float(grad_x @ d) + 0.5 * L * float(d @ d) + problem.psi(point)
        if leq_slack(problem.phi(point), model):
            break
    M = L
    res = MapResult(point=point, g_norm=M * norm(x - point), L=M)
    return res, max(params.l_min, M / params.gamma_dec)
