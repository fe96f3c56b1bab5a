"""Gradient-mapping machinery: quadratic model, prox-gradient points, and the
line-search condition predicates, for both the plain and sigma-regularized
objectives."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import norm

# Relative slack applied to every tested inequality so exact-equality boundary
# cases (which the theory permits) survive floating-point rounding.
REL_SLACK = 1e-12


def leq_slack(lhs, rhs):
    return lhs <= rhs + REL_SLACK * (1.0 + abs(rhs))


def geq_slack(lhs, rhs):
    return lhs >= rhs - REL_SLACK * (1.0 + abs(rhs))


@dataclass(frozen=True)
class MapResult:
    """A prox-gradient point with its mapping norm: g_norm = L * ||y - point||."""

    point: np.ndarray
    g_norm: float
    L: float


def model_value(problem, y, x, L, *, f_y=None, grad_y=None):
    """Quadratic upper model f(y) + <grad f(y), x-y> + (L/2)||x-y||^2 + Psi(x).

    +inf when x lies outside dom Psi.  Cached f_y/grad_y skip the oracle calls.
    """
    if not L > 0:
        raise ValueError("L must be positive")
    if f_y is None:
        f_y = problem.f(y)
    if grad_y is None:
        grad_y = problem.grad(y)
    d = x - y
    return f_y + float(grad_y @ d) + 0.5 * L * float(d @ d) + problem.psi(x)


def prox_grad_point(problem, y, L, *, grad_y=None):
    """T_L(y) = prox_{Psi/L}(y - grad f(y)/L) with its mapping norm.

    One gradient and one prox charge (the gradient skipped when cached).
    """
    if not L > 0:
        raise ValueError("L must be positive")
    if grad_y is None:
        grad_y = problem.grad(y)
    point = problem.prox(1.0 / L, y - grad_y / L)
    return MapResult(point=point, g_norm=L * norm(y - point), L=L)


def reg_prox_grad_point(problem, sigma, center, y, L, *, grad_y=None):
    """Regularized prox-gradient point for the objective phi + (sigma/2)||.-center||^2.

    Takes the plain-f gradient-step modulus L; the total modulus L + sigma is
    formed internally, so the returned mapping is g^sigma_{L+sigma} with
    g_norm = (L+sigma) * ||y - point||.  Computed via the completing-the-square
    reduction: one prox of the base regularizer at the shifted point.
    """
    if not L > 0:
        raise ValueError("L must be positive")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0.0:
        return prox_grad_point(problem, y, L, grad_y=grad_y)
    if grad_y is None:
        grad_y = problem.grad(y)
    total = L + sigma
    point = problem.prox(1.0 / total, (L * y - grad_y + sigma * center) / total)
    return MapResult(point=point, g_norm=total * norm(y - point), L=total)


def reg_prox_grad_point_total(problem, sigma, center, y, total, *, grad_y=None):
    """Same as `reg_prox_grad_point` but parameterized by the total modulus."""
    if not total > sigma:
        raise ValueError("total modulus must exceed sigma")
    return reg_prox_grad_point(
        problem, sigma, center, y, total - sigma, grad_y=grad_y
    )


def descent_condition(problem, y, L):
    """Sufficient-decrease test phi(T_L(y)) <= m_L(y; T_L(y)) (with slack)."""
    if not L > 0:
        raise ValueError("L must be positive")
    f_y = problem.f(y)
    grad_y = problem.grad(y)
    res = prox_grad_point(problem, y, L, grad_y=grad_y)
    m = model_value(problem, y, res.point, L, f_y=f_y, grad_y=grad_y)
    return leq_slack(problem.phi(res.point), m)


@dataclass
class ConditionCheck:
    """Outcome of the accelerated line-search tests plus reusable by-products.

    `plain_map` is T_L(z) (feeds the caller's stopping test for free);
    `reg_map` is T^sigma_{L+sigma}(z), None when the hint shortcut skipped it.
    Untested conditions report True.
    """

    cond_a: bool
    cond_b: bool
    cond_c: bool
    plain_map: MapResult
    reg_map: Optional[MapResult]
    grad_z: np.ndarray
    phi_z: Optional[float]
    skipped_b: bool

    @property
    def passed(self):
        return self.cond_a and self.cond_b and self.cond_c

    def as_tuple(self):
        return (self.cond_a, self.cond_b, self.cond_c)


def apg_conditions(
    problem, sigma, center, y, z, L, *, grad_y=None, test_c=True, skip_b=False
):
    """Test the three accelerated line-search conditions at trial modulus L.

    The caller supplies z = T^sigma_{L+sigma}(y) (and optionally its cached
    gradient at y).  Charges per call: one gradient at z (plus one at y when
    not cached), up to three phi evaluations (z, T_L(z), T^sigma_{L+sigma}(z)),
    and the prox calls for T_L(z) and, unless skipped, T^sigma_{L+sigma}(z).

    Condition (a): curvature bound linking grad f at y and z.
    Condition (b): regularized sufficient decrease one prox-step past z;
        skipped (reported True) when `skip_b`, valid once L >= L_f.
    Condition (c): plain-objective monotonicity phi(T_L(z)) <= phi(z);
        optional, reported True when `test_c` is False.
    """
    if grad_y is None:
        grad_y = problem.grad(y)
    grad_z = problem.grad(z)

    diff_g = grad_y - grad_z
    diff_x = y - z
    cond_a = geq_slack(float(diff_g @ diff_x), float(diff_g @ diff_g) / L)

    phi_z = None
    f_z = None

    reg_map = None
    cond_b = True
    if not skip_b:
        total = L + sigma
        reg_map = reg_prox_grad_point(problem, sigma, center, y=z, L=L, grad_y=grad_z)
        z2 = reg_map.point
        f_z = problem.f(z)
        dz2 = z2 - z
        dzc = z - center
        grad_sigma_z = grad_z + sigma * dzc
        f_sigma_z = f_z + 0.5 * sigma * float(dzc @ dzc)
        model = (
            f_sigma_z
            + float(grad_sigma_z @ dz2)
            + 0.5 * total * float(dz2 @ dz2)
            + problem.psi(z2)
        )
        d2c = z2 - center
        phi_sigma_z2 = problem.phi(z2) + 0.5 * sigma * float(d2c @ d2c)
        cond_b = leq_slack(phi_sigma_z2, model)

    plain_map = prox_grad_point(problem, z, L, grad_y=grad_z)

    cond_c = True
    if test_c:
        if f_z is None:
            f_z = problem.f(z)
        phi_z = f_z + problem.psi(z)
        cond_c = leq_slack(problem.phi(plain_map.point), phi_z)
    elif f_z is not None:
        phi_z = f_z + problem.psi(z)

    return ConditionCheck(
        cond_a=cond_a,
        cond_b=cond_b,
        cond_c=cond_c,
        plain_map=plain_map,
        reg_map=reg_map,
        grad_z=grad_z,
        phi_z=phi_z,
        skipped_b=skip_b,
    )
