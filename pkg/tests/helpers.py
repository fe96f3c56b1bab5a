"""Shared independent oracles for the test suite: 1-D convex minimization by
ternary search, simple problem builders, and counter snapshots."""

import numpy as np

from adapg import CompositeProblem, Regularizer, SmoothOracle, zero_regularizer


def ternary_min(fun, lo, hi, iters=200):
    """Minimize a unimodal scalar function on [lo, hi] by ternary search."""
    for _ in range(iters):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if fun(m1) <= fun(m2):
            hi = m2
        else:
            lo = m1
    return 0.5 * (lo + hi)


def coordinatewise_prox_oracle(psi_1d, step, y, radius=None):
    """Brute-force prox of a separable regularizer via per-coordinate search."""
    out = np.empty_like(y)
    for i, yi in enumerate(y):
        r = radius if radius is not None else abs(yi) + 1.0
        out[i] = ternary_min(
            lambda t: psi_1d(t) + (t - yi) ** 2 / (2.0 * step), yi - r, yi + r
        )
    return out


def ray_prox_oracle(psi_radial, step, y):
    """Brute-force prox of a radially symmetric regularizer along the ray
    through y (the minimizer lies on it)."""
    r = float(np.linalg.norm(y))
    if r == 0.0:
        return np.zeros_like(y)
    t = ternary_min(lambda t: psi_radial(t) + (t - r) ** 2 / (2.0 * step), 0.0, r)
    return (t / r) * y


def scalar_quadratic(lf=1.0, hint=True):
    """f(x) = (lf/2)||x||^2 with Psi = 0."""
    return CompositeProblem(
        SmoothOracle(
            value=lambda x: 0.5 * lf * float(x @ x),
            gradient=lambda x: lf * np.asarray(x, dtype=float),
            lipschitz_hint=lf if hint else None,
        ),
        zero_regularizer(),
    )


def problem_from(smooth_value, smooth_grad, reg=None, hint=None):
    return CompositeProblem(
        SmoothOracle(value=smooth_value, gradient=smooth_grad, lipschitz_hint=hint),
        reg if reg is not None else zero_regularizer(),
    )


def counters_tuple(problem):
    c = problem.counters
    return (c.f_evals, c.grad_evals, c.prox_evals)
