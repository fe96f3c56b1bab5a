import math

import numpy as np
import pytest

from adapg import (
    CompositeProblem,
    OracleError,
    Regularizer,
    SafeguardExceeded,
    SmoothOracle,
    SolverParams,
    combine,
    inner_product,
    norm,
    phi,
    prox_l1,
    zero_regularizer,
)
from adapg.core import as_vector

from helpers import scalar_quadratic


def test_inner_product_hand_values():
    assert inner_product(np.array([1.0, 2.0]), np.array([3.0, 4.0])) == 11.0
    z = np.zeros(5)
    assert inner_product(z, np.arange(5.0)) == 0.0


def test_inner_product_is_squared_norm(rng):
    for _ in range(20):
        x = rng.standard_normal(7)
        assert inner_product(x, x) == pytest.approx(norm(x) ** 2, rel=1e-14)


def test_inner_product_dimension_mismatch():
    with pytest.raises(ValueError):
        inner_product(np.ones(3), np.ones(4))


def test_norm_hand_values(rng):
    assert norm(np.array([3.0, 4.0])) == 5.0
    assert norm(np.zeros(4)) == 0.0
    for _ in range(20):
        x = rng.standard_normal(6)
        c = rng.standard_normal()
        assert norm(c * x) == pytest.approx(abs(c) * norm(x), rel=1e-13)


def test_combine_identity_and_midpoint(rng):
    x = rng.standard_normal(5)
    y = rng.standard_normal(5)
    np.testing.assert_allclose(combine([1.0, 0.0], [x, y]), x, rtol=0, atol=0)
    np.testing.assert_allclose(combine([0.5, 0.5], [x, x]), x, rtol=1e-15)
    # (A*x + a*v)/(A+a) with A=2, a=2, x=(4), v=(0) -> (2)
    out = combine([2.0 / 4.0, 2.0 / 4.0], [np.array([4.0]), np.array([0.0])])
    assert out[0] == 2.0


def test_combine_errors():
    with pytest.raises(ValueError):
        combine([1.0], [np.ones(2), np.ones(2)])
    with pytest.raises(ValueError):
        combine([1.0, 1.0], [np.ones(2), np.ones(3)])


def test_phi_values():
    p = CompositeProblem(
        SmoothOracle(lambda x: 0.5 * float(x @ x), lambda x: x),
        Regularizer(lambda x: float(np.sum(np.abs(x))), lambda s, y: prox_l1(s, 1.0, y)),
    )
    assert phi(p, np.array([2.0])) == 4.0
    assert p.counters.f_evals == 1

    box = Regularizer(
        value=lambda x: 0.0 if np.all((x >= 0) & (x <= 1)) else math.inf,
        prox=lambda s, y: np.clip(y, 0.0, 1.0),
    )
    p2 = CompositeProblem(SmoothOracle(lambda x: 0.0, lambda x: np.zeros_like(x)), box)
    assert phi(p2, np.array([2.0])) == math.inf

    p3 = CompositeProblem(
        SmoothOracle(lambda x: 0.0, lambda x: np.zeros_like(x)),
        Regularizer(lambda x: float(np.sum(np.abs(x))), lambda s, y: prox_l1(s, 1.0, y)),
    )
    assert phi(p3, np.array([1.0, -1.0])) == 2.0


def test_counters_increment_exactly_once():
    p = scalar_quadratic()
    x = np.array([1.0, 2.0])
    p.f(x)
    assert p.counters.snapshot() == (1, 0, 0)
    p.grad(x)
    assert p.counters.snapshot() == (1, 1, 0)
    p.prox(1.0, x)
    assert p.counters.snapshot() == (1, 1, 1)
    p.phi(x)
    assert p.counters.snapshot() == (2, 1, 1)
    p.psi(x)  # free
    assert p.counters.snapshot() == (2, 1, 1)


def test_call_cap_raises_safeguard():
    p = scalar_quadratic()
    p.set_call_cap(2)
    x = np.ones(2)
    p.f(x)
    p.grad(x)
    with pytest.raises(SafeguardExceeded):
        p.f(x)


def test_nan_oracle_aborts():
    bad = CompositeProblem(
        SmoothOracle(lambda x: math.nan, lambda x: np.full_like(x, math.inf)),
        zero_regularizer(),
    )
    with pytest.raises(OracleError):
        bad.f(np.ones(2))
    with pytest.raises(OracleError):
        bad.grad(np.ones(2))


def test_as_vector_rejects_bad_input():
    with pytest.raises(OracleError):
        as_vector(np.array([1.0, math.nan]))
    with pytest.raises(ValueError):
        as_vector(np.ones((2, 2)))


@pytest.mark.parametrize(
    "field,value",
    [
        ("gamma_inc", 1.0),
        ("gamma_dec", 0.9),
        ("l_min", 0.0),
        ("gamma_reg", 1.0),
        ("beta", 0.0),
        ("beta", 1.5),
        ("theta", 0.0),
        ("theta", 1.0),
        ("eps", -1e-9),
        ("max_oracle_calls", 0),
    ],
)
def test_solver_params_range_checks(field, value):
    with pytest.raises(ValueError):
        SolverParams(**{field: value})


def test_solver_params_eps_zero_allowed():
    assert SolverParams(eps=0.0).eps == 0.0
