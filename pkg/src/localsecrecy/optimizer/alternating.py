"""Alternating maximization over L (QCQP step) and P_U (LP step)."""

from __future__ import annotations

import logging
from typing import Callable, Optional

import numpy as np

from ..errors import LPInfeasibleError
from ..prob_core import Distribution
from .kkt import recover_xi_mu
from .problem import SecrecyProblem, Solution, objective
from .steps import lp_step, qcqp_step

log = logging.getLogger(__name__)

Callback = Callable[[int, np.ndarray, np.ndarray], None]


def _initial_pu(rng: np.random.Generator, n: int, restart: int) -> Distribution:
    if restart == 0:
        return Distribution.uniform(n)
    w = rng.dirichlet(np.ones(n))
    w = 0.02 / n + (1 - 0.02) * w
    return Distribution.normalized(w)


def _run_once(prob, p0, tol, max_iter, callback) -> Optional[Solution]:
    l0 = np.zeros((prob.u_size, prob.x_size))
    history = []
    qres = None
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        qres = qcqp_step(prob, p0.probs, l0)
        l1 = qres.l
        try:
            p1 = lp_step(prob, l1, p0)
        except LPInfeasibleError as exc:
            log.debug("LP step failed at iteration %d: %s", it, exc)
            return None
        dead = p1.probs < prob.policy.freeze_tol
        l1 = l1.copy()
        l1[dead] = 0.0
        history.append(objective(prob, p1.probs, l1))
        if callback is not None:
            callback(it, p1.probs, l1)
        p_err = float(np.linalg.norm(p1.probs - p0.probs))
        l0, p0 = l1, p1
        if p_err < tol:
            converged = True
            break
    xi, mu = recover_xi_mu(prob, p0.probs, l0, qres.nu, qres.rho)
    return Solution(
        p_u=p0,
        l=l0,
        objective=history[-1],
        nu=qres.nu,
        rho=qres.rho,
        xi=xi,
        mu=mu,
        iterations=it,
        converged=converged,
        history=history,
    )


def alternate(
    prob: SecrecyProblem,
    seed: int = 0,
    *,
    tol: float = 1e-6,
    max_iter: int = 500,
    restarts: int = 8,
    callback: Optional[Callback] = None,
) -> Solution:
    """Run the alternating scheme from ``restarts`` initializations; keep the best.

    Restart 0 starts from uniform P_U; the rest from Dirichlet draws of a
    Philox stream keyed by ``seed``. Each run stops once successive P_U
    differ by less than ``tol`` in Euclidean norm, or after ``max_iter``
    iterations. Ties between restarts go to the lowest index.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    best: Optional[Solution] = None
    for k in range(max(1, restarts)):
        p0 = _initial_pu(rng, prob.u_size, k)
        sol = _run_once(prob, p0, tol, max_iter, callback)
        if sol is None:
            continue
        if best is None or sol.objective > best.objective + 1e-12 * max(1.0, abs(best.objective)):
            best = sol
    if best is None:
        raise LPInfeasibleError("every restart failed in the LP step")
    return best
