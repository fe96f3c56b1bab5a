"""Benchmark problem generators with analytically known smoothness and
error-bound data, plus a high-accuracy reference oracle for problems without
closed forms."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import HebParams
from .core import (
    CompositeProblem,
    Regularizer,
    SafeguardExceeded,
    SmoothOracle,
    SolverParams,
    norm,
)
from .engine import pg_step
from .prox import l1_regularizer, norm_power_regularizer, zero_regularizer


@dataclass
class HebProblem:
    """A composite test problem bundled with its certified constants.

    `opt_point`/`phi_star` are analytic when available, else None with the
    numeric `x_ref`/`phi_ref` reference standing in (an upper bound on the
    true distance when the solution set is not a singleton).  `x0` anchors the
    level set on which `lf_true` and the error bound are certified.
    """

    name: str
    smooth: SmoothOracle
    reg: Regularizer
    heb: Optional[HebParams]
    lf_true: float
    x0: np.ndarray
    opt_point: Optional[np.ndarray] = None
    phi_star: Optional[float] = None
    level_note: str = ""
    x_ref: Optional[np.ndarray] = None
    phi_ref: Optional[float] = None

    def fresh_problem(self, call_cap=None):
        """New counter-instrumented wrapper over the shared pure oracles."""
        return CompositeProblem(self.smooth, self.reg, call_cap=call_cap)


def dist_to_opt(hp, x):
    """Distance to the solution set: exact for analytic problems, else the
    distance to the cached numeric reference point (an upper bound)."""
    anchor = hp.opt_point if hp.opt_point is not None else hp.x_ref
    if anchor is None:
        raise ValueError(f"{hp.name}: no optimum reference available")
    return norm(np.asarray(x, dtype=float) - anchor)


def phi_opt(hp):
    """Optimal value: analytic when known, else the reference solve's value."""
    if hp.phi_star is not None:
        return hp.phi_star
    if hp.phi_ref is None:
        raise ValueError(f"{hp.name}: no optimal-value reference available")
    return hp.phi_ref


def make_quadratic(n, eig_min, eig_max, seed):
    """Diagonal quadratic 0.5*(x-x*)' D (x-x*) with log-spaced spectrum.

    kappa = eig_min/2 with exponent 2 (globally), L_f = eig_max, known
    minimizer, phi* = 0.
    """
    if not 0 < eig_min <= eig_max:
        raise ValueError("need 0 < eig_min <= eig_max")
    rng = np.random.default_rng(seed)
    d = np.logspace(math.log10(eig_min), math.log10(eig_max), n)
    x_star = rng.standard_normal(n)

    def value(x):
        r = x - x_star
        return 0.5 * float(r @ (d * r))

    def gradient(x):
        return d * (x - x_star)

    return HebProblem(
        name="quadratic",
        smooth=SmoothOracle(value=value, gradient=gradient, lipschitz_hint=eig_max),
        reg=zero_regularizer(),
        heb=HebParams(kappa=eig_min / 2.0, rho=2.0),
        lf_true=float(eig_max),
        x0=np.zeros(n),
        opt_point=x_star,
        phi_star=0.0,
        level_note="error bound holds globally (quadratic growth)",
    )


def _zero_oracle(n):
    return SmoothOracle(
        value=lambda x: 0.0,
        gradient=lambda x: np.zeros(n),
        lipschitz_hint=1.0,
    )


def make_sharp(n, x0_scale=1.0):
    """Sharp nonsmooth instance: f = 0, Psi = ||.||_1, minimizer {0}.

    ||x||_1 >= ||x||_2 gives kappa = 1 with exponent 1.  The zero smooth part
    declares Lipschitz hint 1 (any nonnegative constant is valid) so
    line-search preconditions hold with l_min = 1.
    """
    if not x0_scale > 0:
        raise ValueError("x0_scale must be positive")
    return HebProblem(
        name="sharp",
        smooth=_zero_oracle(n),
        reg=l1_regularizer(1.0),
        heb=HebParams(kappa=1.0, rho=1.0),
        lf_true=1.0,
        x0=x0_scale * np.ones(n),
        opt_point=np.zeros(n),
        phi_star=0.0,
        level_note="error bound holds globally; equality on coordinate axes",
    )


def make_norm_power_nonsmooth(n, rho):
    """Nonsmooth power instance: f = 0, Psi = ||.||_2^rho for rho in (1, 2).

    The error bound holds with equality everywhere (kappa = 1), which drives
    the superlinear restart regime.
    """
    if not 1.0 < rho < 2.0:
        raise ValueError("rho must lie in (1, 2)")
    return HebProblem(
        name="norm_power",
        smooth=_zero_oracle(n),
        reg=norm_power_regularizer(1.0, rho),
        heb=HebParams(kappa=1.0, rho=float(rho)),
        lf_true=1.0,
        x0=np.ones(n),
        opt_point=np.zeros(n),
        phi_star=0.0,
        level_note="error bound holds with equality everywhere",
    )


def make_smooth_power(n, p):
    """Smooth flat-minimum instance f = (1/p) sum x_i^p, even p >= 4, Psi = 0.

    One valid exponent-p construction: the power-mean inequality gives
    kappa = n^(-(p-2)/2)/p globally, while the gradient's Lipschitz constant
    is certified only on the level set of x0 = ones(n) via the Hessian bound
    (p-1) * r^(p-2) with r the level set's max-coordinate radius; monotone
    descent keeps solver iterates inside.
    """
    if p < 4 or p % 2 != 0:
        raise ValueError("p must be an even integer >= 4")
    x0 = np.ones(n)

    def value(x):
        return float(np.sum(x**p)) / p

    def gradient(x):
        return x ** (p - 1)

    phi0 = value(x0)
    r_box = (p * phi0) ** (1.0 / p)
    lf = (p - 1) * r_box ** (p - 2)
    return HebProblem(
        name="smooth_power",
        smooth=SmoothOracle(value=value, gradient=gradient, lipschitz_hint=lf),
        reg=zero_regularizer(),
        heb=HebParams(kappa=n ** (-(p - 2) / 2.0) / p, rho=float(p)),
        lf_true=lf,
        x0=x0,
        opt_point=np.zeros(n),
        phi_star=0.0,
        level_note=(
            f"L certified on lev(phi(x0)={phi0:.6g}): |x_i| <= {r_box:.6g}, "
            f"Hessian bound {lf:.6g}"
        ),
    )


def power_iteration_sq_norm(A, iters=10_000, rtol=1e-14, seed=0):
    """Largest eigenvalue of A'A (= squared top singular value of A)."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[1])
    v /= norm(v)
    lam = 0.0
    for _ in range(iters):
        w = A.T @ (A @ v)
        lam_new = float(np.linalg.norm(w))
        if lam_new == 0.0:
            return 0.0
        v = w / lam_new
        if abs(lam_new - lam) <= rtol * lam_new:
            return lam_new
        lam = lam_new
    return lam


def make_lasso(m, n, lam, seed):
    """Random-design soft-thresholded least squares (exponent-2 bound with
    unknown coefficient; adaptivity stressor).

    L_f comes from power iteration on A'A; the optimum and optimal value are
    numeric-only, supplied by a build-time reference solve to 1e-12.
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    lf = power_iteration_sq_norm(A, seed=seed)

    def value(x):
        r = A @ x - b
        return 0.5 * float(r @ r)

    def gradient(x):
        return A.T @ (A @ x - b)

    hp = HebProblem(
        name="lasso",
        smooth=SmoothOracle(value=value, gradient=gradient, lipschitz_hint=lf),
        reg=l1_regularizer(lam),
        heb=None,
        lf_true=lf,
        x0=np.zeros(n),
        level_note="exponent 2 with unknown coefficient; optimum numeric-only",
    )
    x_ref, phi_ref = reference_solve(hp.fresh_problem(), hp.x0, lf, tol=1e-12)
    hp.x_ref = x_ref
    hp.phi_ref = phi_ref
    return hp


def reference_solve(problem, x0, hint_L, tol=1e-12, max_steps=2_000_000):
    """Proximal-gradient polish to ||g_M(x)|| <= tol at a pinned modulus.

    Runs pg_step with gamma_dec = 1 and the modulus floored at hint_L, so the
    settled M is constant (= hint_L when the hint is valid) and the stopping
    test is evaluated at the same modulus on every visit: re-solving from the
    returned point exits immediately with zero change.  Returns (x_ref,
    phi(x_ref)); deterministic for fixed inputs.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    params = SolverParams(
        gamma_inc=2.0,
        gamma_dec=1.0,
        l_min=hint_L,
        gamma_reg=2.0,
        beta=1.0,
        theta=0.5,
        eps=tol,
    )
    x = np.asarray(x0, dtype=float)
    L = hint_L
    for _ in range(max_steps):
        res, L = pg_step(problem, x, L, params)
        if res.g_norm <= tol:
            return x, problem.phi(x)
        x = res.point
    raise SafeguardExceeded(
        f"reference solve did not reach tol={tol:g} in {max_steps} steps"
    )


def sample_level_set(hp, rng, count, spread=2.0):
    """Random points with phi <= phi(x0), by contracting misses toward the
    optimum (valid since phi is nondecreasing along rays from a minimizer)."""
    anchor = hp.opt_point if hp.opt_point is not None else hp.x_ref
    problem = hp.fresh_problem()
    level = problem.phi_uncounted(hp.x0)
    out = []
    while len(out) < count:
        x = anchor + spread * rng.standard_normal(hp.x0.size)
        for _ in range(60):
            if problem.phi_uncounted(x) <= level:
                out.append(x)
                break
            x = anchor + 0.5 * (x - anchor)
    return out
