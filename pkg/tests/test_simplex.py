import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from lhvkit.simplex import LPSizeError, solve_lp


def check_dual(res, c, A, b, tol=1e-8):
    assert (A.T @ res.dual <= c + tol).all()
    assert res.dual @ b == pytest.approx(res.objective, abs=tol)


def test_small_known_optimum():
    # min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6 ; optimum at (8/5, 6/5)
    A = np.array([[1, 2, 1, 0], [3, 1, 0, 1]], dtype=float)
    b = np.array([4.0, 6.0])
    c = np.array([-1, -1, 0, 0], dtype=float)
    res = solve_lp(c, A, b)
    assert res.status == "optimal"
    np.testing.assert_allclose(res.x[:2], [1.6, 1.2], atol=1e-12)
    assert res.objective == pytest.approx(-2.8)
    check_dual(res, c, A, b)


def test_beale_cycling_example_terminates():
    # classic example on which the textbook largest-coefficient rule cycles
    A = np.array([[1, 0, 0, 0.25, -8, -1, 9],
                  [0, 1, 0, 0.5, -12, -0.5, 3],
                  [0, 0, 1, 0, 0, 1, 0]])
    b = np.array([0.0, 0.0, 1.0])
    c = np.array([0, 0, 0, -0.75, 20, -0.5, 6])
    res = solve_lp(c, A, b)
    assert res.status == "optimal"
    assert res.objective == pytest.approx(-1.25, abs=1e-12)
    check_dual(res, c, A, b)


def test_infeasible_with_farkas():
    # x + y = 1 and x + y = 2
    A = np.array([[1.0, 1.0], [1.0, 1.0]])
    b = np.array([1.0, 2.0])
    res = solve_lp(np.zeros(2), A, b)
    assert res.status == "infeasible"
    y = res.farkas
    assert (A.T @ y <= 1e-12).all() and y @ b > 0


def test_negative_rhs_handled():
    # -x = -3
    res = solve_lp([1.0], [[-1.0]], [-3.0])
    assert res.status == "optimal"
    assert res.x[0] == pytest.approx(3)
    check_dual(res, np.array([1.0]), np.array([[-1.0]]), np.array([-3.0]))


def test_unbounded():
    # min -x s.t. x - y = 0
    res = solve_lp([-1.0, 0.0], [[1.0, -1.0]], [0.0])
    assert res.status == "unbounded"


def test_redundant_rows_are_dropped():
    A = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0], [0.0, 1.0, 1.0]])
    b = np.array([1.0, 2.0, 1.0])
    c = np.array([1.0, 2.0, 0.0])
    res = solve_lp(c, A, b)
    assert res.status == "optimal"
    assert res.objective == pytest.approx(1.0)
    check_dual(res, c, A, b)


def test_size_guard():
    with pytest.raises(LPSizeError):
        solve_lp(np.zeros(10 ** 6 + 1), np.zeros((1, 10 ** 6 + 1)), [0.0])


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1), m=st.integers(1, 6), n=st.integers(1, 10))
def test_agrees_with_scipy(seed, m, n):
    rng = np.random.default_rng(seed)
    A = rng.integers(-3, 4, size=(m, n)).astype(float)
    x0 = rng.integers(0, 3, size=n).astype(float)
    # half the cases use an unrelated rhs, which is often infeasible
    b = A @ x0 if seed % 2 else rng.integers(-3, 4, size=m).astype(float)
    c = rng.integers(-2, 5, size=n).astype(float)
    ours = solve_lp(c, A, b)
    ref = linprog(c, A_eq=A, b_eq=b, bounds=[(0, None)] * n, method="highs")
    expected = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
    assert ours.status == expected
    if expected == "optimal":
        assert ours.objective == pytest.approx(ref.fun, abs=1e-8)
        assert np.abs(A @ ours.x - b).max() <= 1e-8 and (ours.x >= 0).all()
        check_dual(ours, c, A, b)
    elif expected == "infeasible":
        y = ours.farkas
        assert (A.T @ y <= 1e-9).all() and y @ b > 1e-9
