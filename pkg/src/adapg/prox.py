"""Closed-form proximal operators and the shifted-quadratic augmentation."""

import math
from dataclasses import dataclass

import numpy as np

from .core import Regularizer, norm

ROOT_ATOL = 1e-14


def prox_zero(step, y):
    """Prox of the zero function: identity for any positive step."""
    if not step > 0:
        raise ValueError("step must be positive")
    return np.asarray(y, dtype=float).copy()


def prox_l1(step, weight, y):
    """Componentwise soft threshold at level step*weight.

    Computed as y - clip(y, -t, t) so the shrinkage residual reconstructs the
    input bitwise.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if weight < 0:
        raise ValueError("weight must be >= 0")
    y = np.asarray(y, dtype=float)
    t = step * weight
    return y - np.clip(y, -t, t)


def prox_l2norm(step, weight, y):
    """Block soft threshold: (1 - step*weight/||y||)_+ * y, zero at y = 0."""
    if not step > 0:
        raise ValueError("step must be positive")
    if weight < 0:
        raise ValueError("weight must be >= 0")
    y = np.asarray(y, dtype=float)
    r = norm(y)
    t = step * weight
    if r <= t:
        return np.zeros_like(y)
    return (1.0 - t / r) * y


def _power_root(c, rho, r):
    """Unique root t >= 0 of t + c*t**(rho-1) = r, safeguarded Newton.

    Solved in the substituted variable u = t**(rho-1), where the equation
    u**q + c*u = r (q = 1/(rho-1) > 1) is convex increasing with slope >= c,
    so Newton from the upper bracket min(r/c, r**(1/q)) descends monotonically
    to the root.  The t-space problem is ill-conditioned near rho = 1 (the
    root is exponentially small); u stays O(r/c).  Returns t with the original
    equation's residual near machine precision, well inside ROOT_ATOL.
    """
    if r == 0.0:
        return 0.0
    q = 1.0 / (rho - 1.0)

    def g(u):
        return u**q + c * u - r

    lo, hi = 0.0, min(r / c, r ** (1.0 / q))
    u = hi
    converged = False
    for _ in range(200):
        val = g(u)
        if val > 0:
            hi = u
        elif val < 0:
            lo = u
        else:
            converged = True
            break
        u_new = u - val / (q * u ** (q - 1.0) + c)
        if not (lo <= u_new <= hi):
            u_new = 0.5 * (lo + hi)
        done = abs(u_new - u) <= 1e-17 * u + 1e-300
        u = u_new
        if done:
            converged = True
            break
    if not converged and hi - lo > ROOT_ATOL * max(1.0, hi):
        raise RuntimeError(
            f"power-prox root finder failed to converge: rho={rho}, c={c!r}, "
            f"r={r!r}, bracket width {hi - lo!r}"
        )
    return u**q


def prox_norm_power(step, weight, rho, y):
    """Prox of weight*||.||_2^rho for rho in (1, 2).

    Reduces along the ray through y to the scalar equation
    t + step*weight*rho*t^(rho-1) = ||y||, solved to 1e-14.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if not weight > 0:
        raise ValueError("weight must be positive")
    if not 1.0 < rho < 2.0:
        raise ValueError("rho must lie in (1, 2)")
    y = np.asarray(y, dtype=float)
    r = norm(y)
    if r == 0.0:
        return np.zeros_like(y)
    t = _power_root(step * weight * rho, rho, r)
    return (t / r) * y


@dataclass(frozen=True)
class AugmentedRegularizer:
    """Psi plus a quadratic (sigma/2)*||x - center||^2 around a fixed center.

    sigma = 0 reduces value and prox exactly to the base regularizer.  Duck
    types as a Regularizer, so a CompositeProblem over the regularized
    objective can be formed directly.
    """

    base: Regularizer
    sigma: float
    center: np.ndarray

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")

    def value(self, x):
        if self.sigma == 0.0:
            return self.base.value(x)
        d = np.asarray(x, dtype=float) - self.center
        return self.base.value(x) + 0.5 * self.sigma * float(d @ d)

    def prox(self, step, y):
        return augmented_prox(self, step, y)


def augmented_prox(aug, step, y):
    """Prox of Psi + (sigma/2)||. - center||^2 via completing the square.

    argmin_x { Psi(x) + (sigma/2)||x-c||^2 + ||x-y||^2/(2*step) } equals the
    base prox with effective step step/(1+step*sigma) at the weighted average
    (y + step*sigma*c)/(1+step*sigma).
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if aug.sigma == 0.0:
        return np.asarray(aug.base.prox(step, y), dtype=float)
    y = np.asarray(y, dtype=float)
    scale = 1.0 + step * aug.sigma
    point = (y + step * aug.sigma * aug.center) / scale
    return np.asarray(aug.base.prox(step / scale, point), dtype=float)


def zero_regularizer():
    return Regularizer(value=lambda x: 0.0, prox=prox_zero)


def l1_regularizer(weight):
    w = float(weight)
    return Regularizer(
        value=lambda x: w * float(np.sum(np.abs(x))),
        prox=lambda step, y: prox_l1(step, w, y),
    )


def l2norm_regularizer(weight):
    w = float(weight)
    return Regularizer(
        value=lambda x: w * norm(x),
        prox=lambda step, y: prox_l2norm(step, w, y),
    )


def norm_power_regularizer(weight, rho):
    w, p = float(weight), float(rho)
    return Regularizer(
        value=lambda x: w * norm(x) ** p,
        prox=lambda step, y: prox_norm_power(step, w, p, y),
    )
