import numpy as np
import pytest
from scipy.optimize import linprog

from helpers import lp_vertex_max
from localsecrecy.optimizer import simplex


def test_textbook_max():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
    res = simplex(
        np.array([3.0, 5.0]),
        np.array([[1.0, 0.0], [0.0, 2.0], [3.0, 2.0]]),
        np.array([4.0, 12.0, 18.0]),
        np.zeros((0, 2)),
        np.zeros(0),
    )
    assert res.status == "optimal"
    assert res.value == pytest.approx(36.0)
    np.testing.assert_allclose(res.x, [2.0, 6.0], atol=1e-12)


def test_infeasible():
    res = simplex(np.ones(2), np.zeros((0, 2)), np.zeros(0), np.array([[1.0, 1.0], [1.0, 1.0]]), np.array([1.0, 2.0]))
    assert res.status == "infeasible"


def test_unbounded():
    res = simplex(np.array([1.0, 0.0]), np.zeros((0, 2)), np.zeros(0), np.array([[0.0, 1.0]]), np.array([1.0]))
    assert res.status == "unbounded"


def test_redundant_equalities():
    a_eq = np.array([[1.0, 1.0, 1.0], [2.0, 2.0, 2.0]])
    res = simplex(np.array([1.0, 2.0, 3.0]), np.zeros((0, 3)), np.zeros(0), a_eq, np.array([1.0, 2.0]))
    assert res.status == "optimal"
    assert res.value == pytest.approx(3.0)


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook largest-coefficient rule
    c = np.array([0.75, -150.0, 0.02, -6.0])
    a = np.array([[0.25, -60.0, -0.04, 9.0], [0.5, -90.0, -0.02, 3.0], [0.0, 0.0, 1.0, 0.0]])
    res = simplex(c, a, np.array([0.0, 0.0, 1.0]), np.zeros((0, 4)), np.zeros(0))
    assert res.status == "optimal"
    assert res.value == pytest.approx(0.05)


def _lp_like_p_step(rng, n, nx):
    """Random instance with the shape of the P_U subproblem."""
    l = rng.standard_normal((n, nx))
    p0 = rng.dirichlet(np.ones(n))
    l -= (p0 @ l)[None, :]  # p0 is feasible for the equalities
    c = rng.uniform(0, 1, n)
    a_ub = np.vstack([np.sum(l * l, axis=1), rng.uniform(0, 1, n)])
    b_ub = np.array([a_ub[0] @ p0 * 1.5, a_ub[1] @ p0 * 1.5])
    a_eq = np.vstack([l.T, np.ones((1, n))])
    b_eq = np.zeros(nx + 1)
    b_eq[-1] = 1.0
    return c, a_ub, b_ub, a_eq, b_eq


def test_against_vertex_enumeration_and_scipy(rng):
    for _ in range(60):
        n, nx = int(rng.integers(2, 6)), int(rng.integers(1, 3))
        c, a_ub, b_ub, a_eq, b_eq = _lp_like_p_step(rng, n, nx)
        res = simplex(c, a_ub, b_ub, a_eq, b_eq)
        assert res.status == "optimal"
        vmax, _ = lp_vertex_max(c, a_ub, b_ub, a_eq, b_eq)
        ref = linprog(-c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        assert res.value == pytest.approx(vmax, abs=1e-9)
        assert res.value == pytest.approx(-ref.fun, abs=1e-8)
        assert np.all(res.x >= -1e-12)
        assert np.max(np.abs(a_eq @ res.x - b_eq)) <= 1e-10
        assert np.all(a_ub @ res.x <= b_ub + 1e-10)


def test_deterministic(rng):
    args = _lp_like_p_step(rng, 5, 2)
    a, b = simplex(*args), simplex(*args)
    assert np.array_equal(a.x, b.x) and a.iterations == b.iterations
