"""Shared builders for randomized tests."""

import itertools

import numpy as np

from localsecrecy.channel import Channel
from localsecrecy.optimizer import SecrecyProblem
from localsecrecy.prob_core import Distribution


def random_pmf(rng, n, floor=0.05):
    w = rng.dirichlet(np.ones(n))
    w = floor + (1 - floor * n) * w
    return w / w.sum()


def random_channel(rng, n_out, n_in):
    w = rng.dirichlet(np.ones(n_out), size=n_in).T
    w = 0.02 + w
    return Channel(w / w.sum(axis=0))


def random_problem(rng, nx, nu, *, epsilon=None, r=None, theta=None):
    px = Distribution(random_pmf(rng, nx))
    main = random_channel(rng, int(rng.integers(2, 4)), nx)
    eaves = random_channel(rng, int(rng.integers(2, 4)), nx)
    return SecrecyProblem.from_channels(
        main,
        eaves,
        px,
        float(rng.uniform(0.1, 1.0)) if r is None else r,
        float(rng.uniform(0.005, 0.5)) if theta is None else theta,
        float(rng.choice([1e-3, 1e-2, 1e-1])) if epsilon is None else epsilon,
        nu,
    )


def lp_vertex_max(c, a_ub, b_ub, a_eq, b_eq, tol=1e-9):
    """Max of c.x over {a_ub x <= b_ub, a_eq x = b_eq, x >= 0} by vertex enumeration."""
    n = len(c)
    g = np.vstack([a_ub, -np.eye(n)])
    h = np.concatenate([b_ub, np.zeros(n)])
    best, arg = -np.inf, None
    for k in range(n + 1):
        for subset in itertools.combinations(range(g.shape[0]), k):
            a = np.vstack([a_eq, g[list(subset)]]) if subset else a_eq
            b = np.concatenate([b_eq, h[list(subset)]]) if subset else b_eq
            if np.linalg.matrix_rank(a, tol=1e-10) < n:
                continue
            x, *_ = np.linalg.lstsq(a, b, rcond=None)
            if np.max(np.abs(a @ x - b)) > tol * max(1.0, np.max(np.abs(b))):
                continue
            if np.any(g @ x > h + tol * np.maximum(1.0, np.abs(h))):
                continue
            val = float(c @ x)
            if val > best:
                best, arg = val, x
    return best, arg
