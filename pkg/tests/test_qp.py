import numpy as np
import pytest

from pursuit.qp import (IllFormed, QpStatus, QuadraticProgram, check_kkt,
                        solve)


def test_unconstrained_minimum():
    # min (x-1)^2 + (y+2)^2
    qp = QuadraticProgram(H=2 * np.eye(2), g=np.array([-2.0, 4.0]))
    sol = solve(qp)
    assert sol.status is QpStatus.OPTIMAL
    assert np.allclose(sol.x, [1.0, -2.0], atol=1e-7)


def test_equality_constrained():
    # min x^2 + y^2  s.t.  x + y = 2  ->  (1, 1)
    qp = QuadraticProgram(H=2 * np.eye(2), g=np.zeros(2),
                          A_eq=np.array([[1.0, 1.0]]), b_eq=np.array([2.0]))
    sol = solve(qp)
    assert sol.status is QpStatus.OPTIMAL
    assert np.allclose(sol.x, [1.0, 1.0], atol=1e-7)
    assert sol.kkt_residual <= 1e-6


def test_active_inequality():
    # min x^2 + y^2  s.t.  x >= 1  ->  (1, 0), multiplier 2
    qp = QuadraticProgram(H=2 * np.eye(2), g=np.zeros(2),
                          A_in=np.array([[-1.0, 0.0]]), b_in=np.array([-1.0]))
    sol = solve(qp)
    assert np.allclose(sol.x, [1.0, 0.0], atol=1e-7)
    assert sol.in_multipliers[0] == pytest.approx(2.0, abs=1e-6)


def test_inactive_inequality():
    qp = QuadraticProgram(H=2 * np.eye(2), g=np.array([-2.0, 0.0]),
                          A_in=np.array([[1.0, 0.0]]), b_in=np.array([5.0]))
    sol = solve(qp)
    assert np.allclose(sol.x, [1.0, 0.0], atol=1e-7)
    assert sol.in_multipliers[0] == pytest.approx(0.0, abs=1e-9)


def test_infeasible_certified():
    qp = QuadraticProgram(H=np.eye(2), g=np.zeros(2),
                          A_in=np.array([[1.0, 0.0], [-1.0, 0.0]]),
                          b_in=np.array([-1.0, -1.0]))
    sol = solve(qp)
    assert sol.status is QpStatus.INFEASIBLE
    assert np.all(np.isnan(sol.x))


def test_semidefinite_hessian():
    # flat direction: H has a zero eigenvalue; constrained answer unique
    H = np.array([[2.0, 0.0], [0.0, 0.0]])
    qp = QuadraticProgram(H=H, g=np.array([0.0, 1.0]),
                          A_in=np.array([[0.0, -1.0]]), b_in=np.array([0.0]))
    sol = solve(qp)
    assert sol.status is QpStatus.OPTIMAL
    assert np.allclose(sol.x, [0.0, 0.0], atol=1e-6)


def test_indefinite_rejected():
    with pytest.raises(IllFormed):
        QuadraticProgram(H=np.array([[1.0, 0.0], [0.0, -1.0]]), g=np.zeros(2))


def test_asymmetric_rejected():
    with pytest.raises(IllFormed):
        QuadraticProgram(H=np.array([[1.0, 1.0], [0.0, 1.0]]), g=np.zeros(2))


def test_dimension_mismatch_rejected():
    with pytest.raises(IllFormed):
        QuadraticProgram(H=np.eye(2), g=np.zeros(2),
                         A_in=np.eye(3), b_in=np.zeros(3))


def test_warm_start_same_answer():
    rng = np.random.default_rng(4)
    L = rng.normal(size=(3, 3))
    qp = QuadraticProgram(H=L @ L.T + 0.1 * np.eye(3), g=rng.normal(size=3),
                          A_in=np.vstack([np.eye(3), -np.eye(3)]),
                          b_in=np.ones(6))
    cold = solve(qp)
    warm = solve(qp, initial_guess=cold.x)
    assert np.allclose(cold.x, warm.x, atol=1e-7)
    assert warm.iterations <= cold.iterations


def test_infeasible_guess_falls_back_to_phase1():
    qp = QuadraticProgram(H=2 * np.eye(2), g=np.zeros(2),
                          A_in=np.array([[-1.0, 0.0]]), b_in=np.array([-1.0]))
    sol = solve(qp, initial_guess=np.array([-10.0, 0.0]))
    assert np.allclose(sol.x, [1.0, 0.0], atol=1e-7)


def test_check_kkt_flags_wrong_point():
    qp = QuadraticProgram(H=2 * np.eye(2), g=np.zeros(2),
                          A_in=np.array([[-1.0, 0.0]]), b_in=np.array([-1.0]))
    res = check_kkt(qp, np.array([3.0, 3.0]), in_multipliers=np.zeros(1))
    assert res.max() > 1.0


def _random_qp(rng, n):
    L = rng.normal(size=(n, n))
    H = L @ L.T + 0.5 * np.eye(n)
    g = rng.normal(size=n)
    m = rng.integers(1, 2 * n + 1)
    A = rng.normal(size=(m, n))
    x0 = rng.normal(size=n)
    b = A @ x0 + rng.uniform(0.1, 2.0, size=m)  # x0 strictly feasible
    return QuadraticProgram(H=H, g=g, A_in=A, b_in=b)


def test_random_instances_kkt_and_reference():
    # cross-check against scipy's trust-constr on dense random problems
    from scipy.optimize import LinearConstraint, minimize

    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(2, 7))
        qp = _random_qp(rng, n)
        sol = solve(qp)
        assert sol.status is QpStatus.OPTIMAL
        assert sol.kkt_residual <= 1e-6
        ref = minimize(lambda x: qp.objective(x), np.zeros(n),
                       jac=lambda x: qp.H @ x + qp.g,
                       constraints=[LinearConstraint(qp.A_in, -np.inf, qp.b_in)],
                       method="SLSQP")
        assert sol.objective <= ref.fun + 1e-6


def test_deterministic():
    rng = np.random.default_rng(5)
    qp = _random_qp(rng, 5)
    a = solve(qp)
    b = solve(qp)
    assert np.array_equal(a.x, b.x)
    assert a.iterations == b.iterations
