"""Problem abstraction: smooth oracle + proximable regularizer with call counting."""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class OracleError(RuntimeError):
    """A user oracle returned NaN/Inf, or the run hit a numerically invalid state."""


class SafeguardExceeded(RuntimeError):
    """The oracle-call cap was exhausted before the solver terminated."""


def as_vector(x):
    """Validate and return a finite 1-D float64 array of length >= 1."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ValueError(f"expected a 1-D vector of length >= 1, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise OracleError("vector contains NaN/Inf entries")
    return v


def inner_product(a, b):
    """Euclidean inner product; hard error on dimension mismatch."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.dot(a, b))


def norm(x):
    """Euclidean norm induced by `inner_product`."""
    return float(np.linalg.norm(np.asarray(x, dtype=float)))


def combine(coeffs, vectors):
    """Linear combination sum_i coeffs[i] * vectors[i]; hard error on mismatch."""
    if len(coeffs) != len(vectors):
        raise ValueError(f"{len(coeffs)} coefficients for {len(vectors)} vectors")
    if not vectors:
        raise ValueError("empty combination")
    shape = np.asarray(vectors[0]).shape
    out = np.zeros(shape)
    for c, v in zip(coeffs, vectors):
        v = np.asarray(v, dtype=float)
        if v.shape != shape:
            raise ValueError(f"dimension mismatch: {v.shape} vs {shape}")
        out += float(c) * v
    return out


@dataclass(frozen=True)
class SmoothOracle:
    """First-order oracle for the smooth part: value f(x) and gradient.

    `lipschitz_hint`, when given, must be a valid upper bound on the gradient's
    Lipschitz constant over the region the solver visits; it enables the
    line-search shortcut that skips one model test per pass.
    """

    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    lipschitz_hint: Optional[float] = None


@dataclass(frozen=True)
class Regularizer:
    """Proximable convex regularizer.

    `value(x)` may return +inf (indicator-type); `prox(step, y)` returns
    argmin_x { value(x) + ||x - y||^2 / (2 * step) }.
    """

    value: Callable[[np.ndarray], float]
    prox: Callable[[float, np.ndarray], np.ndarray]


@dataclass
class OracleCounters:
    f_evals: int = 0
    grad_evals: int = 0
    prox_evals: int = 0

    def total(self):
        return self.f_evals + self.grad_evals + self.prox_evals

    def snapshot(self):
        return (self.f_evals, self.grad_evals, self.prox_evals)


class CompositeProblem:
    """Pairing of a smooth oracle f and a regularizer Psi, phi = f + Psi.

    Every f, gradient, or prox call routed through this wrapper increments
    exactly one counter.  A Psi evaluation is charged together with the f
    evaluation at the same point (one "phi evaluation"); Psi alone is free.
    An optional call cap turns exhaustion into `SafeguardExceeded`.
    """

    def __init__(self, smooth, reg, call_cap=None):
        self.smooth = smooth
        self.reg = reg
        self.counters = OracleCounters()
        self.call_cap = call_cap

    @property
    def lipschitz_hint(self):
        return self.smooth.lipschitz_hint

    def set_call_cap(self, cap):
        self.call_cap = cap

    def _charge(self, kind):
        c = self.counters
        if kind == "f":
            c.f_evals += 1
        elif kind == "grad":
            c.grad_evals += 1
        else:
            c.prox_evals += 1
        if self.call_cap is not None and c.total() > self.call_cap:
            raise SafeguardExceeded(
                f"oracle-call cap {self.call_cap} exhausted "
                f"(f={c.f_evals}, grad={c.grad_evals}, prox={c.prox_evals})"
            )

    def f(self, x):
        self._charge("f")
        val = float(self.smooth.value(x))
        if not math.isfinite(val):
            raise OracleError(f"smooth oracle returned {val!r} at ||x||={norm(x):.3e}")
        return val

    def grad(self, x):
        self._charge("grad")
        g = np.asarray(self.smooth.gradient(x), dtype=float)
        if not np.all(np.isfinite(g)):
            raise OracleError(f"gradient oracle returned NaN/Inf at ||x||={norm(x):.3e}")
        return g

    def prox(self, step, y):
        self._charge("prox")
        p = np.asarray(self.reg.prox(step, y), dtype=float)
        if not np.all(np.isfinite(p)):
            raise OracleError(f"prox oracle returned NaN/Inf (step={step:.3e})")
        return p

    def psi(self, x):
        """Regularizer value; +inf allowed, NaN rejected.  Not charged."""
        val = float(self.reg.value(x))
        if math.isnan(val):
            raise OracleError("regularizer returned NaN")
        return val

    def phi(self, x):
        """phi(x) = f(x) + Psi(x); one f_evals increment, +inf outside dom Psi."""
        return self.f(x) + self.psi(x)

    def phi_uncounted(self, x):
        """phi for telemetry/diagnostics; bypasses the counters."""
        return float(self.smooth.value(x)) + float(self.reg.value(x))


@dataclass(frozen=True)
class SolverParams:
    """Line-search, regularization-schedule, and restart tunables.

    gamma_inc/gamma_dec drive the backtracking line search, l_min floors the
    Lipschitz estimate, gamma_reg is the sigma-shrink ratio, beta times the
    A-growth criterion, theta the per-restart residue ratio; eps is the default
    target tolerance (eps = 0 is the pure-convergence mode) and
    max_oracle_calls the runaway safeguard.
    """

    gamma_inc: float = 2.0
    gamma_dec: float = 2.0
    l_min: float = 1.0
    gamma_reg: float = 2.0
    beta: float = 1.0
    theta: float = 0.5
    eps: float = 1e-8
    max_oracle_calls: int = 10_000_000

    def __post_init__(self):
        if not self.gamma_inc > 1:
            raise ValueError("gamma_inc must be > 1")
        if not self.gamma_dec >= 1:
            raise ValueError("gamma_dec must be >= 1")
        if not self.l_min > 0:
            raise ValueError("l_min must be > 0")
        if not self.gamma_reg > 1:
            raise ValueError("gamma_reg must be > 1")
        if not 0 < self.beta <= 1:
            raise ValueError("beta must be in (0, 1]")
        if not 0 < self.theta < 1:
            raise ValueError("theta must be in (0, 1)")
        if not self.eps >= 0:
            raise ValueError("eps must be >= 0")
        if not self.max_oracle_calls > 0:
            raise ValueError("max_oracle_calls must be positive")


def phi(problem, x):
    """Module-level phi(x) = f(x) + Psi(x) (one charged phi evaluation)."""
    return problem.phi(x)
