import math

import numpy as np
import pytest

from adapg import (
    CompositeProblem,
    EstimateState,
    SmoothOracle,
    SolverParams,
    apg_step,
    estimate_min,
    l1_regularizer,
    norm,
    pg_step,
    solve_a,
    zero_regularizer,
)

from helpers import counters_tuple, scalar_quadratic


def test_solve_a_closed_forms():
    assert solve_a(0.0, 1.0, 2.0) == pytest.approx(1.0)
    assert solve_a(0.0, 5.0, 0.5) == pytest.approx(4.0)  # A=0 -> a = 2/L
    a = solve_a(1.0, 0.0, 2.0)  # c=1 -> golden ratio
    assert a == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-12)
    # residual of the defining equation a^2/(A+a) = c
    c = 2 * (1 + 0.0 * 1.0) / 2.0
    assert abs(a * a / (1.0 + a) - c) <= 1e-12


def test_solve_a_positive_random(rng):
    for _ in range(200):
        A = rng.uniform(0, 1e6)
        sigma = rng.uniform(0, 10)
        L = rng.uniform(1e-3, 1e3)
        a = solve_a(A, sigma, L)
        assert a > 0
        c = 2 * (1 + sigma * A) / L
        assert a * a / (A + a) == pytest.approx(c, rel=1e-10)


def test_estimate_min_fresh_returns_center():
    p = scalar_quadratic()
    center = np.array([3.0, -1.0])
    state = EstimateState.fresh(center, 1.0)
    v = estimate_min(state, p)
    np.testing.assert_array_equal(v, center)
    assert v is not state.center  # copy, no aliasing
    assert counters_tuple(p) == (0, 0, 0)  # v0 free


def test_estimate_min_linear_case():
    # Psi=0, sigma=1, A=1, center=0, grad_sum=(2,) -> w=-1, v=-1
    p = scalar_quadratic()
    state = EstimateState(
        center=np.array([0.0]), sigma=1.0, A=1.0, grad_sum=np.array([2.0])
    )
    v = estimate_min(state, p)
    assert v[0] == -1.0
    assert counters_tuple(p) == (0, 0, 1)


def _explicit_estimate_argmin(center, sigma, history, reg_scaled_prox, n, iters=400):
    """Independent minimizer of the explicitly accumulated lower model
    psi(x) = 0.5||x-c||^2 + sum a_i [f(x_i) + <g_i, x-x_i> + Psi_sigma(x)]
    via proximal gradient with a deliberately mismatched step."""
    A = sum(a for a, _ in history)
    gsum = np.zeros(n)
    for a, g in history:
        gsum += a * g
    mu = 1.0 + sigma * A  # curvature of the smooth quadratic part

    def smooth_grad(x):
        return (x - center) + sigma * A * (x - center) + gsum

    C = 3.7 * mu  # valid but non-matching modulus: independent fixed point path
    x = center.copy()
    for _ in range(iters):
        x = reg_scaled_prox(A / C, x - smooth_grad(x) / C)
    return x


def test_estimate_min_matches_explicit_accumulation(rng):
    # random 3-step histories, n=3, l1 regularizer
    reg = l1_regularizer(0.8)
    p = CompositeProblem(
        SmoothOracle(lambda x: 0.0, lambda x: np.zeros_like(x)), reg
    )
    for _ in range(10):
        n = 3
        center = rng.standard_normal(n)
        sigma = rng.uniform(0.2, 2)
        history = [
            (rng.uniform(0.1, 3), rng.standard_normal(n)) for _ in range(3)
        ]
        A = sum(a for a, _ in history)
        gsum = sum(a * g for a, g in history)
        state = EstimateState(center=center, sigma=sigma, A=A, grad_sum=gsum)
        v = estimate_min(state, p)
        v_oracle = _explicit_estimate_argmin(
            center, sigma, history, lambda s, y: reg.prox(s, y), n
        )
        np.testing.assert_allclose(v, v_oracle, atol=1e-6)


def test_apg_step_worked_example():
    # f=x^2/2, Psi=0, sigma=1, center=2, A=0, L_in=1=L_f:
    # a=2, A1=2, y=2, z=(1*2-2+1*2)/2=1, M=1, single pass
    p = scalar_quadratic()
    params = SolverParams(l_min=1.0)
    state = EstimateState.fresh(np.array([2.0]), 1.0)
    out, new_state = apg_step(p, np.array([2.0]), state, 1.0, params)
    assert out.x_next[0] == 1.0
    assert out.M == 1.0
    assert out.A_next == 2.0
    assert out.ls_passes == 1
    assert new_state.A == 2.0
    np.testing.assert_allclose(new_state.grad_sum, [2.0])  # a * grad f(x_1) = 2*1
    # plain map at x_1=1 with M=1: T(1)=0, g_norm=1
    assert out.plain_map.point[0] == 0.0
    assert out.plain_map.g_norm == 1.0


def test_apg_step_single_pass_with_hint(rng):
    p = scalar_quadratic(lf=4.0)
    params = SolverParams(l_min=0.5)
    state = EstimateState.fresh(rng.standard_normal(3), 0.7)
    out, _ = apg_step(p, state.center.copy(), state, 4.0, params)
    assert out.ls_passes == 1


def test_apg_step_counter_envelope(rng):
    # <= 3 f, exactly 2 grad, <= 3 prox per pass, plus one prox for v when A>0
    for hint in (True, False):
        for test_c in (True, False):
            p = scalar_quadratic(lf=3.0, hint=hint)
            params = SolverParams(l_min=0.1, gamma_dec=4.0)
            state = EstimateState.fresh(rng.standard_normal(4), 0.9)
            x = state.center.copy()
            L = 0.1
            for _ in range(6):
                before = counters_tuple(p)
                had_a = state.A > 0
                out, state = apg_step(p, x, state, L, params, test_9c=test_c)
                x, L = out.x_next, out.L_next
                df, dg, dp = np.subtract(counters_tuple(p), before)
                k = out.ls_passes
                assert dg == 2 * k
                assert dp == 2 * k + (k - out.skipped_9b) + (1 if had_a else 0)
                expected_f = (3 if test_c else 2) * (k - out.skipped_9b) + (
                    2 if test_c else 0
                ) * out.skipped_9b
                assert df == expected_f
                assert df <= 3 * k and dp <= 3 * k + 1


def test_apg_step_backtracks_until_valid():
    p = scalar_quadratic(lf=10.0, hint=False)
    params = SolverParams(l_min=0.5, gamma_inc=2.0)
    state = EstimateState.fresh(np.array([1.0]), 0.5)
    out, _ = apg_step(p, np.array([1.0]), state, 0.5, params)
    assert out.M >= 10.0 / 2.0  # conditions force L near L_f
    assert out.ls_passes >= 4


def test_pg_step_quadratic():
    p = scalar_quadratic()
    params = SolverParams(l_min=1.0, gamma_dec=2.0)
    res, L_next = pg_step(p, np.array([2.0]), 1.0, params)
    assert res.point[0] == 0.0
    assert res.L == 1.0
    assert L_next == max(1.0, 1.0 / 2.0)


def test_pg_step_descends_and_respects_envelope(rng):
    p = scalar_quadratic(lf=7.0, hint=False)
    params = SolverParams(l_min=0.25, gamma_inc=2.0, gamma_dec=2.0)
    x = rng.standard_normal(5) * 3
    L = 0.25
    for _ in range(30):
        phi_before = p.phi_uncounted(x)
        res, L = pg_step(p, x, L, params)
        assert p.phi_uncounted(res.point) <= phi_before + 1e-12
        assert res.L <= params.gamma_inc * 7.0  # M_k <= gamma_inc L_f
        assert res.L >= params.l_min
        x = res.point


def test_pg_step_lemma6_linesearch_count(rng):
    # passes bounded by 1 + log(gdec)/log(ginc) + log(L_next*gdec/L_in)/log(ginc)
    p = scalar_quadratic(lf=5.0, hint=False)
    params = SolverParams(l_min=0.1, gamma_inc=2.0, gamma_dec=3.0)
    x = rng.standard_normal(4)
    L_in = 0.1
    before = counters_tuple(p)
    res, L_next = pg_step(p, x, L_in, params)
    passes = counters_tuple(p)[2] - before[2]
    M = res.L
    bound = (
        1
        + math.log(params.gamma_dec) / math.log(params.gamma_inc)
        + math.log(max(L_next, M / params.gamma_dec) / L_in) / math.log(params.gamma_inc)
    )
    assert passes <= bound + 1e-9
