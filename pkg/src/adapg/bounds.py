"""Closed-form iteration-complexity predictors used by the benchmark harness
to print measured-vs-predicted columns and by the acceptance suite as test
oracles."""

import math
from dataclasses import dataclass

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HebParams:
    """Error-bound data: phi(x) - phi* >= kappa * dist(x, X*)^rho on the
    initial level set."""

    kappa: float
    rho: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if not self.rho >= 1:
            raise ValueError("rho must be >= 1")


def sigma_threshold(dist, eps, beta):
    """Ideal regularization threshold eps/((1+sqrt(2)beta)*dist); +inf at dist 0.

    Below this value the adaptive solver's current outer loop must terminate.
    """
    if dist < 0:
        raise ValueError("dist must be >= 0")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if dist == 0.0:
        return math.inf
    return eps / ((1.0 + SQRT2 * beta) * dist)


def inner_loop_bound(sigma, beta, gamma_inc, lf):
    """Upper bound on one outer loop's APG steps when it exits by A-growth."""
    return 2.0 + (math.sqrt(2.0 * gamma_inc * lf / sigma) + 1.0) * math.log(
        (gamma_inc * lf + sigma) / (beta * sigma)
    )


def ls_pass_bound(k, L_last, L0, gamma_inc, gamma_dec):
    """Upper bound on total line-search passes over k+1 accelerated steps."""
    return (1.0 + math.log(gamma_dec) / math.log(gamma_inc)) * (k + 1) + math.log(
        L_last / L0
    ) / math.log(gamma_inc)


def estimate_growth_floor(k, sigma, gamma_inc, lf):
    """Guaranteed lower bound on the estimate-sequence weight A_k (k >= 1)."""
    base = 1.0 + math.sqrt(sigma / (2.0 * gamma_inc * lf))
    return (2.0 / (gamma_inc * lf)) * base ** (2 * (k - 1))


def ada_apg_loop_total_bound(sigma_ell, sigma0, beta, gamma_inc, gamma_reg, lf):
    """Total APG-step bound when the adaptive run exits at sigma_ell."""
    logterm = math.log((gamma_inc * lf + sigma_ell) / (beta * sigma_ell))
    t1 = (
        (math.sqrt(2.0 * gamma_inc * lf) / (math.sqrt(gamma_reg) - 1.0))
        * (math.sqrt(gamma_reg / sigma_ell) - math.sqrt(1.0 / sigma0))
        * logterm
    )
    t2 = (1.0 + math.log(sigma0 / sigma_ell) / math.log(gamma_reg)) * (2.0 + logterm)
    return t1 + t2


def ada_apg_bound(eps, sigma0, dist, beta, gamma_inc, gamma_reg, lf):
    """Worst-case APG-step count for the adaptive run with sigma0 above the
    ideal threshold, in terms of the true distance to the solution set."""
    s = sigma_threshold(dist, eps, beta)
    if not sigma0 >= s:
        raise ValueError("requires sigma0 >= sigma_threshold(dist, eps, beta)")
    logterm = math.log(gamma_reg * gamma_inc * lf / (beta * s) + 1.0 / beta)
    t1 = (
        (math.sqrt(2.0 * gamma_inc * lf) / (math.sqrt(gamma_reg) - 1.0))
        * (gamma_reg * math.sqrt(1.0 / s) - math.sqrt(1.0 / sigma0))
        * logterm
    )
    t2 = (2.0 + math.log(sigma0 / s) / math.log(gamma_reg)) * (2.0 + logterm)
    return t1 + t2


def ada_apg_small_sigma_bound(sigma0, beta, gamma_inc, lf):
    """APG-step bound when sigma0 already sits below the ideal threshold."""
    return inner_loop_bound(sigma0, beta, gamma_inc, lf)


def n_bound(eps, sigma_star, C, g0_norm, sigma0, theta, beta, gamma_inc, gamma_reg, lf):
    """Restart-scheme step-count template N(eps, sigma_*, C); 0 when the
    initial mapping norm already meets eps."""
    if g0_norm <= eps:
        return 0.0
    logterm = math.log((gamma_inc * lf + sigma_star) / (beta * sigma_star))
    t1 = (
        1.0
        + math.log(g0_norm / eps) / math.log(1.0 / theta)
        + math.log(sigma0 / sigma_star) / math.log(gamma_reg)
    ) * (2.0 + logterm)
    t2 = (
        (math.sqrt(2.0 * gamma_inc * lf) / (math.sqrt(gamma_reg) - 1.0))
        * (math.sqrt(1.0 / sigma_star) - math.sqrt(1.0 / sigma0))
        * logterm
    )
    t3 = C * math.sqrt(2.0 * gamma_inc * lf) * logterm
    return t1 + t2 + t3


def sigma_bar(heb, theta, beta, lf, l_min, eps=None, delta0=None):
    """Guaranteed floor scale for the restart scheme's regularization parameter.

    rho >= 2 uses the target tolerance (the exponent vanishes at rho = 2);
    rho < 2 uses the initial functional gap delta0 instead.
    """
    lead = theta / (1.0 + SQRT2 * beta)
    ratio = lf / l_min + 1.0
    rho, kappa = heb.rho, heb.kappa
    if rho >= 2.0:
        if eps is None or not eps > 0:
            raise ValueError("rho >= 2 branch needs eps > 0")
        return (
            lead
            * kappa ** (1.0 / (rho - 1.0))
            * ratio ** (-1.0 / (rho - 1.0))
            * eps ** ((rho - 2.0) / (rho - 1.0))
        )
    if delta0 is None or not delta0 > 0:
        raise ValueError("rho < 2 branch needs delta0 > 0")
    return lead * kappa ** (2.0 / rho) / ratio * delta0 ** (-(2.0 - rho) / rho)


def sigma_star_value(sigma0, sbar, gamma_reg):
    """Running floor for the threaded sigma: sigma0 itself when it starts at or
    below sbar, else sbar/gamma_reg."""
    return sigma0 if sigma0 <= sbar else sbar / gamma_reg


def eps_star(heb, theta, gamma_inc, lf, l_min, sigma0):
    """Mapping-norm threshold where the rho < 2 regimes change character.

    rho = 1: kappa*(lf/l_min+1)^-1, below which the latest prox point is
    exactly optimal.  rho in (1,2): the superlinear-onset threshold.  Hard
    error for rho >= 2 (no such threshold exists).
    """
    rho, kappa = heb.rho, heb.kappa
    ratio = lf / l_min + 1.0
    if rho == 1.0:
        return kappa / ratio
    if 1.0 < rho < 2.0:
        lead = (1.0 + SQRT2) / theta * (gamma_inc * lf + sigma0)
        return (
            lead ** (-(rho - 1.0) / (2.0 - rho))
            * kappa ** (1.0 / (2.0 - rho))
            * ratio ** (-1.0 / (2.0 - rho))
        )
    raise ValueError("eps_star is defined only for 1 <= rho < 2")


def restart_scheme_bound(
    heb,
    eps,
    g0_norm,
    sigma0,
    theta,
    beta,
    gamma_inc,
    gamma_reg,
    lf,
    l_min,
    delta0=None,
):
    """Total APG-step bound for the restart scheme, per error-bound exponent.

    Returns a dict with the bound ("n_total") and the intermediates the CLI
    reports: sigma_bar, sigma_star, the constant C, and (rho < 2) eps_star.
    For rho > 2 both pieces entering the min(sigma_*^(0), sigma^(0)) constant
    are included.
    """
    rho, kappa = heb.rho, heb.kappa
    out = {"rho": rho, "kappa": kappa, "sigma0": sigma0}
    common = dict(
        g0_norm=g0_norm,
        sigma0=sigma0,
        theta=theta,
        beta=beta,
        gamma_inc=gamma_inc,
        gamma_reg=gamma_reg,
        lf=lf,
    )

    if rho >= 2.0:
        sbar = sigma_bar(heb, theta, beta, lf, l_min, eps=eps)
    else:
        sbar = sigma_bar(heb, theta, beta, lf, l_min, delta0=delta0)
    sstar = sigma_star_value(sigma0, sbar, gamma_reg)
    out["sigma_bar"] = sbar
    out["sigma_star"] = sstar

    log_itheta = math.log(1.0 / theta)
    if rho == 2.0:
        C = math.sqrt(1.0 / sstar) * (1.0 + math.log(g0_norm / eps) / log_itheta)
        out["C"] = C
        out["n_total"] = n_bound(eps, sstar, C, **common)
    elif rho > 2.0:
        ratio = lf / l_min + 1.0
        sstar0 = (
            theta
            / (1.0 + SQRT2 * beta)
            * kappa ** (1.0 / (rho - 1.0))
            * ratio ** (-1.0 / (rho - 1.0))
            * g0_norm ** ((rho - 2.0) / (rho - 1.0))
        )
        out["sigma_star0"] = sstar0
        out["min_branch"] = min(sstar0, sigma0)
        if sigma0 >= sbar:
            w = theta ** ((rho - 2.0) / (rho - 1.0))
            C = math.sqrt(1.0 / sigma0) * (
                1.0
                + (rho - 1.0)
                / (rho - 2.0)
                * math.log(sstar0 / min(sstar0, sigma0))
                / log_itheta
            ) + math.sqrt(gamma_reg) / (1.0 - math.sqrt(w)) * (
                math.sqrt(1.0 / sbar) - math.sqrt(w) * math.sqrt(1.0 / sigma0)
            )
            out["C"] = C
            out["n_total"] = n_bound(eps, sstar, C, **common)
        else:
            C = math.sqrt(1.0 / sigma0) * (1.0 + math.log(g0_norm / eps) / log_itheta)
            out["C"] = C
            out["n_total"] = n_bound(eps, sigma0, C, **common)
    elif rho > 1.0:
        est = eps_star(heb, theta, gamma_inc, lf, l_min, sigma0)
        em = max(eps, est)
        C = math.sqrt(1.0 / sstar) * (1.0 + math.log(g0_norm / em) / log_itheta)
        power = (rho - 1.0) / (2.0 - rho)
        extra = (1.0 / math.log(1.0 / (rho - 1.0))) * (
            math.log(math.log(est / (theta**power * min(eps, est))))
            - math.log(math.log(theta**-power))
        )
        out["eps_star"] = est
        out["C"] = C
        out["n_total"] = 1.0 + n_bound(em, sstar, C, **common) + extra
    else:
        est = eps_star(heb, theta, gamma_inc, lf, l_min, sigma0)
        em = max(eps, est)
        C = math.sqrt(1.0 / sstar) * (1.0 + math.log(g0_norm / em) / log_itheta)
        out["eps_star"] = est
        out["C"] = C
        out["n_total"] = 1.0 + n_bound(em, sstar, C, **common)
    return out
