import numpy as np
import pytest

from adapg import (
    dist_to_opt,
    make_lasso,
    make_norm_power_nonsmooth,
    make_quadratic,
    make_sharp,
    make_smooth_power,
    norm,
    phi_opt,
    prox_grad_point,
    reference_solve,
    sample_level_set,
)
from adapg.testbed import power_iteration_sq_norm

ALL_ANALYTIC = [
    lambda: make_quadratic(6, 1.0, 10.0, seed=3),
    lambda: make_sharp(5, x0_scale=2.0),
    lambda: make_norm_power_nonsmooth(4, rho=1.5),
    lambda: make_smooth_power(3, p=4),
]


def test_quadratic_constants():
    hp = make_quadratic(2, 1.0, 10.0, seed=0)
    assert hp.heb.kappa == 0.5 and hp.heb.rho == 2.0 and hp.lf_true == 10.0
    g = hp.smooth.gradient(hp.opt_point)
    assert norm(g) == 0.0


def test_quadratic_isotropic_heb_equality(rng):
    hp = make_quadratic(4, 1.0, 1.0, seed=1)
    prob = hp.fresh_problem()
    for _ in range(20):
        x = rng.standard_normal(4)
        lhs = prob.phi_uncounted(x) - 0.0
        rhs = 0.5 * dist_to_opt(hp, x) ** 2
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_sharp_problem_shape():
    hp = make_sharp(3, x0_scale=5.0)
    prob = hp.fresh_problem()
    # phi = ||x||_1 >= ||x||_2, equality on axes
    e1 = np.array([2.0, 0.0, 0.0])
    assert prob.phi_uncounted(e1) == dist_to_opt(hp, e1)
    # soft threshold with L=1 zeroes any |x_i| <= 1
    res = prox_grad_point(prob, np.array([0.8, -0.3, 0.9]), 1.0)
    assert np.all(res.point == 0.0)


def test_smooth_power_constants():
    hp = make_smooth_power(1, p=4)
    assert hp.heb.kappa == pytest.approx(0.25)
    assert hp.lf_true == pytest.approx(3.0)  # Hessian 3x^2 <= 3 on |x| <= 1
    hp5 = make_smooth_power(5, p=4)
    assert hp5.heb.kappa == pytest.approx(0.25 / 5.0)
    assert hp5.lf_true == pytest.approx(3.0 * 5.0 ** 0.5)


def test_smooth_power_gradient_consistency(rng):
    hp = make_smooth_power(4, p=4)
    for _ in range(50):
        x = rng.uniform(-1, 1, size=4)
        g = hp.smooth.gradient(x)
        h = 1e-6
        for i in range(4):
            e = np.zeros(4)
            e[i] = h
            fd = (hp.smooth.value(x + e) - hp.smooth.value(x - e)) / (2 * h)
            assert fd == pytest.approx(g[i], rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("make", ALL_ANALYTIC)
def test_gradient_matches_finite_differences(rng, make):
    hp = make()
    n = hp.x0.size
    for _ in range(50):
        x = rng.uniform(-0.9, 0.9, size=n)
        g = hp.smooth.gradient(x)
        h = 1e-6
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            fd = (hp.smooth.value(x + e) - hp.smooth.value(x - e)) / (2 * h)
            assert fd == pytest.approx(g[i], rel=1e-6, abs=1e-8)


@pytest.mark.parametrize("make", ALL_ANALYTIC)
def test_mapping_vanishes_at_optimum(make):
    hp = make()
    prob = hp.fresh_problem()
    for L in (hp.lf_true, 2 * hp.lf_true, 10 * hp.lf_true):
        res = prox_grad_point(prob, hp.opt_point, L)
        assert res.g_norm <= 1e-9


@pytest.mark.parametrize("make", ALL_ANALYTIC)
def test_heb_inequality_on_level_set(rng, make):
    hp = make()
    prob = hp.fresh_problem()
    pts = sample_level_set(hp, rng, 1000)
    for x in pts:
        lhs = prob.phi_uncounted(x) - phi_opt(hp)
        rhs = hp.heb.kappa * dist_to_opt(hp, x) ** hp.heb.rho
        assert lhs >= rhs - 1e-9


@pytest.mark.parametrize("make", ALL_ANALYTIC)
def test_declared_lipschitz_valid_on_level_set(rng, make):
    hp = make()
    pts = sample_level_set(hp, rng, 400)
    for i in range(0, 400, 2):
        x, y = pts[i], pts[i + 1]
        gap = norm(
            np.asarray(hp.smooth.gradient(x)) - np.asarray(hp.smooth.gradient(y))
        )
        assert gap <= hp.lf_true * norm(x - y) + 1e-9


def test_lasso_lf_matches_dense_eigensolver():
    for seed in range(5):
        rng = np.random.default_rng(seed)
        A = rng.standard_normal((15, 8))
        lam = power_iteration_sq_norm(A, seed=seed)
        dense = float(np.linalg.eigvalsh(A.T @ A)[-1])
        assert lam == pytest.approx(dense, rel=1e-8)


def test_lasso_reference_residual():
    hp = make_lasso(12, 6, lam=0.5, seed=4)
    prob = hp.fresh_problem()
    res = prox_grad_point(prob, hp.x_ref, hp.lf_true)
    assert res.g_norm <= 1e-12
    assert hp.phi_ref == pytest.approx(prob.phi_uncounted(hp.x_ref), rel=1e-14)


def test_lasso_large_lambda_zero_solution():
    hp = make_lasso(10, 5, lam=1.0, seed=7)
    rng = np.random.default_rng(7)
    A = rng.standard_normal((10, 5))
    b = rng.standard_normal(10)
    lam_big = float(np.max(np.abs(A.T @ b))) * 1.5
    hp2 = make_lasso(10, 5, lam=lam_big, seed=7)
    assert norm(hp2.x_ref) <= 1e-12
    assert hp2.phi_ref == pytest.approx(0.5 * float(b @ b), rel=1e-12)


def test_reference_solve_quadratic():
    hp = make_quadratic(3, 1.0, 4.0, seed=9)
    x_ref, phi_ref = reference_solve(hp.fresh_problem(), hp.x0, hp.lf_true, tol=1e-12)
    assert norm(x_ref - hp.opt_point) <= 1e-11
    assert abs(phi_ref) <= 1e-20


def test_reference_solve_sharp_exact_zero():
    hp = make_sharp(4, x0_scale=3.0)
    x_ref, phi_ref = reference_solve(hp.fresh_problem(), hp.x0, 1.0, tol=1e-10)
    assert np.all(x_ref == 0.0)
    assert phi_ref == 0.0


def test_reference_solve_idempotent():
    hp = make_lasso(10, 5, lam=0.3, seed=11)
    tol = 1e-12
    x1, p1 = reference_solve(hp.fresh_problem(), hp.x0, hp.lf_true, tol=tol)
    x2, p2 = reference_solve(hp.fresh_problem(), x1, hp.lf_true, tol=tol)
    assert abs(p2 - p1) <= tol * tol
    np.testing.assert_array_equal(x1, x2)


def test_dist_to_opt_hand_values():
    hp = make_sharp(2)
    assert dist_to_opt(hp, np.array([3.0, 4.0])) == 5.0
    assert dist_to_opt(hp, np.zeros(2)) == 0.0
    hq = make_quadratic(2, 1.0, 2.0, seed=5)
    assert dist_to_opt(hq, hq.opt_point) == 0.0
