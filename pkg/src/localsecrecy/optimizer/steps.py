"""The two half-steps of the alternating scheme.

QCQP step (P_U fixed)
    Substituting ``M_u = sqrt(P_U(u)) L_u`` turns the step into a trace
    program over ``X = sum_u M_u M_u^T`` restricted to the complement of
    sqrt(P_X). Two trace constraints leave a rank-one optimum, so the step is
    solved exactly through its dual::

        min_{nu >= 0}  nu * Theta~ + R~ * max(0, lambda_max(V_s - nu Lam_s))

    with ``rho = max(0, lambda_max(.))`` and ``K_s = -V_s + nu Lam_s + rho I``
    positive semidefinite on the subspace. The optimal L_u are null vectors of
    K_s scaled by a profile ``s(u)`` with ``sum_u P_U(u) s(u) = 0``. A projected
    gradient ascent is kept as fallback for when the recovered primal does
    not close the duality gap.

LP step (L fixed)
    Linear in P_U; solved with the dense simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..channel import GramMatrix
from ..errors import DimensionError, LPInfeasibleError
from ..prob_core import Distribution
from .problem import SecrecyProblem, _quad, feasibility_residuals, is_feasible, objective
from .simplex import simplex


def k_matrix(nu: float, rho: float, v, lam) -> np.ndarray:
    """K(nu, rho) = -V + nu * Lambda + rho * I."""
    if nu < 0 or rho < 0:
        raise ValueError(f"multipliers must be nonnegative, got nu={nu!r}, rho={rho!r}")
    vm = v.m if isinstance(v, GramMatrix) else np.asarray(v, dtype=float)
    lm = lam.m if isinstance(lam, GramMatrix) else np.asarray(lam, dtype=float)
    return -vm + nu * lm + rho * np.eye(vm.shape[0])


@dataclass
class QcqpResult:
    l: np.ndarray         # (|U|, |X|)
    objective: float
    nu: float
    rho: float
    dual_value: float
    method: str           # "dual" | "ascent" | "zero" | "init"


@dataclass
class _DualSolution:
    nu: float
    rho: float
    value: float
    direction: np.ndarray  # unit vector in subspace coordinates
    scale: float           # t in X = t y y^T


def _top_eig(a: np.ndarray):
    w, q = np.linalg.eigh(a)
    return w[-1], q[:, -1]


def _solve_dual(vs: np.ndarray, ls: np.ndarray, r_budget: float, t_budget: float) -> _DualSolution:
    k = vs.shape[0]
    if k == 0 or r_budget == 0.0:
        return _DualSolution(0.0, max(0.0, float(np.linalg.eigvalsh(vs)[-1])) if k else 0.0,
                             0.0, np.zeros(k), 0.0)
    top0, _ = _top_eig(vs)
    if not math.isfinite(t_budget):
        nu = 0.0
    else:

        def slope(nu_):
            top, y = _top_eig(vs - nu_ * ls)
            if top <= 0:
                return t_budget
            return t_budget - r_budget * float(y @ ls @ y)

        def bisect(lo, hi, go_right):
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if mid <= lo or mid >= hi:
                    break
                if go_right(slope(mid)):
                    lo = mid
                else:
                    hi = mid
            return lo, hi

        # the minimizers form an interval; a flat stretch of the dual means
        # both budgets bind along it, and its midpoint is reported
        s_tol = 1e-12 * max(t_budget, r_budget * float(np.max(np.abs(ls), initial=0.0)))
        s0 = slope(0.0)
        if s0 > s_tol:
            nu = 0.0
        else:
            cap = max(top0, 0.0) * r_budget / t_budget
            cap = cap * (1 + 1e-9) + 1e-300
            while slope(cap) <= s_tol:  # only reachable through rounding
                cap *= 2.0
            left = 0.0
            if s0 < -s_tol:
                left = 0.5 * sum(bisect(0.0, cap, lambda s: s < -s_tol))
            right = 0.5 * sum(bisect(left, cap, lambda s: s <= s_tol))
            nu = 0.5 * (left + right)
    a = vs - nu * ls
    w, q = np.linalg.eigh(a)
    scale = max(1.0, float(np.max(np.abs(vs))), nu * float(np.max(np.abs(ls))))
    rho = float(w[-1])
    if rho <= 1e-13 * scale:  # rounding residue of the bisection
        rho = 0.0
    value = rho * r_budget + (nu * t_budget if nu > 0 else 0.0)

    # null space of K_s = rho I - a, i.e. eigenvalues of a within tolerance of rho
    kappa = rho - w
    null = np.flatnonzero(kappa <= 1e-10 * scale)
    if null.size == 0:
        null = np.array([k - 1])
    basis = q[:, null]
    lam_null = basis.T @ ls @ basis
    lw, lq = np.linalg.eigh(0.5 * (lam_null + lam_null.T))
    ratio = t_budget / r_budget
    target = min(max(ratio, lw[0]), lw[-1])
    if lw[-1] - lw[0] <= 1e-15 * max(1.0, abs(lw[-1])):
        c = lq[:, 0]
    else:
        sin2 = (target - lw[0]) / (lw[-1] - lw[0])
        c = math.sqrt(1.0 - sin2) * lq[:, 0] + math.sqrt(sin2) * lq[:, -1]
    y = basis @ c
    y /= np.linalg.norm(y)
    ray = float(y @ ls @ y)
    t = r_budget if ray <= 0 else min(r_budget, t_budget / ray)
    return _DualSolution(float(nu), float(rho), float(value), y, float(t))


def _profile(p_u: np.ndarray, live: np.ndarray) -> np.ndarray:
    """Unit vector f on the live symbols orthogonal to sqrt(P_U)."""
    sp = np.sqrt(p_u[live])
    e = np.zeros(live.size)
    e[int(np.argmax(p_u[live]))] = 1.0
    f = e - sp * (sp @ e)
    return f / np.linalg.norm(f)


def _rescale_into_budget(prob: SecrecyProblem, p_u, l) -> np.ndarray:
    rb, lb = prob.rate_budget, prob.leakage_budget
    rate = float(p_u @ np.sum(l * l, axis=1))
    leak = float(p_u @ _quad(prob.lam.m, l))
    s = 1.0
    if rate > rb:
        s = min(s, math.sqrt(rb / rate)) if rate > 0 else s
    if math.isfinite(lb) and leak > lb:
        s = min(s, math.sqrt(lb / leak))
    return l * s


def _center(p_u, l, sqrt_px):
    l = l - np.outer(l @ sqrt_px, sqrt_px)
    return l - (p_u @ l)[None, :]


def projected_ascent(
    prob: SecrecyProblem,
    p_u,
    l_init=None,
    *,
    restarts: int = 8,
    steps: int = 2000,
    seed: int = 0,
) -> np.ndarray:
    """Gradient ascent on the objective with centering and budget rescaling.

    Each iterate is projected onto ``<sqrt(P_X), L_u> = 0``, centered so that
    ``sum_u P_U(u) L_u = 0``, and scaled down onto the budget region; since
    the objective is homogeneous of degree two the scaled point keeps the
    best achievable value along its ray.
    """
    p = np.asarray(p_u, dtype=float)
    live = p >= prob.policy.freeze_tol
    sx = prob.p_x.sqrt
    rng = np.random.Generator(np.random.Philox(seed))
    vm = prob.v.m
    starts = [] if l_init is None else [np.asarray(l_init, dtype=float)]
    while len(starts) < restarts:
        starts.append(rng.standard_normal((p.size, prob.x_size)))
    best, best_val = np.zeros((p.size, prob.x_size)), 0.0
    for l0 in starts:
        l = l0.copy()
        l[~live] = 0.0
        l = _center(p, l, sx)
        l[~live] = 0.0
        l = _grow(prob, p, l)
        for _ in range(steps):
            grad = 2.0 * p[:, None] * (l @ vm)
            g_norm = np.linalg.norm(grad)
            if g_norm == 0:
                break
            step = np.linalg.norm(l) / g_norm
            cand = _center(p, l + step * grad, sx)
            cand[~live] = 0.0
            cand = _grow(prob, p, cand)
            if np.max(np.abs(cand - l)) <= 1e-13 * max(1.0, np.max(np.abs(l))):
                l = cand
                break
            l = cand
        val = objective(prob, p, l)
        if val > best_val:
            best, best_val = l, val
    return best


def _grow(prob: SecrecyProblem, p, l) -> np.ndarray:
    """Scale l so the tighter of the two budgets binds."""
    rate = float(p @ np.sum(l * l, axis=1))
    if rate <= 0:
        return l
    s = math.sqrt(prob.rate_budget / rate)
    leak = float(p @ _quad(prob.lam.m, l))
    if math.isfinite(prob.leakage_budget) and leak > 0:
        s = min(s, math.sqrt(prob.leakage_budget / leak))
    return l * s


def qcqp_step(prob: SecrecyProblem, p_u, l_init=None) -> QcqpResult:
    """Best L for fixed P_U. Never returns a worse objective than ``l_init``."""
    p = np.asarray(p_u, dtype=float)
    if p.shape != (prob.u_size,):
        raise DimensionError(f"P_U has length {p.size}, problem has |U| = {prob.u_size}")
    if l_init is not None:
        l_init = np.asarray(l_init, dtype=float)
        if l_init.shape != (prob.u_size, prob.x_size):
            raise DimensionError(f"L has shape {l_init.shape}, expected {(prob.u_size, prob.x_size)}")

    qb = prob.subspace
    vs = qb.T @ prob.v.m @ qb
    ls = qb.T @ prob.lam.m @ qb
    vs, ls = 0.5 * (vs + vs.T), 0.5 * (ls + ls.T)
    dual = _solve_dual(vs, ls, prob.rate_budget, prob.leakage_budget)

    live = np.flatnonzero(p >= prob.policy.freeze_tol)
    l = np.zeros((prob.u_size, prob.x_size))
    method = "zero"
    if live.size >= 2 and dual.scale > 0:
        f = _profile(p, live)
        s = math.sqrt(dual.scale) * f / np.sqrt(p[live])
        l[live] = np.outer(s, qb @ dual.direction)
        l = _rescale_into_budget(prob, p, l)
        method = "dual"
    val = objective(prob, p, l)

    # the dual bound is exact for >= 2 live symbols; otherwise only L = 0 is feasible
    bound = dual.value if live.size >= 2 else 0.0
    gap_tol = 1e-9 * max(1.0, abs(bound))
    if method == "dual" and bound - val > gap_tol:
        alt = projected_ascent(prob, p, l)
        alt_val = objective(prob, p, alt)
        if alt_val > val:
            l, val, method = alt, alt_val, "ascent"

    if l_init is not None and is_feasible(prob, p, l_init):
        init_val = objective(prob, p, l_init)
        if init_val > val + 1e-12 * max(1.0, abs(val)):
            l, val, method = l_init.copy(), init_val, "init"
    return QcqpResult(l, val, dual.nu, dual.rho, bound, method)


def lp_step(prob: SecrecyProblem, l, p_prev=None) -> Distribution:
    """Best P_U for fixed L.

    Ties: all-zero L returns uniform; otherwise the incoming ``p_prev`` is kept
    when it is feasible and already optimal, so the outer loop can settle.
    """
    l = np.asarray(l, dtype=float)
    if l.shape != (prob.u_size, prob.x_size):
        raise DimensionError(f"L has shape {l.shape}, expected {(prob.u_size, prob.x_size)}")
    n = prob.u_size
    if not np.any(l):
        return Distribution.uniform(n)
    gain = _quad(prob.v.m, l)
    a_ub = [np.sum(l * l, axis=1)]
    b_ub = [prob.rate_budget]
    if math.isfinite(prob.leakage_budget):
        a_ub.append(_quad(prob.lam.m, l))
        b_ub.append(prob.leakage_budget)
    a_eq = np.vstack([l.T, np.ones((1, n))])
    b_eq = np.zeros(a_eq.shape[0])
    b_eq[-1] = 1.0
    res = simplex(gain, np.array(a_ub), np.array(b_ub), a_eq, b_eq)
    if res.status != "optimal":
        raise LPInfeasibleError(
            f"LP over P_U is {res.status} for the current L; re-initialize the perturbations"
        )
    p_new = Distribution.normalized(res.x)
    new_val = float(p_new.probs @ gain)
    if p_prev is not None:
        pp = np.asarray(p_prev, dtype=float)
        if is_feasible(prob, pp, l):
            old_val = float(pp @ gain)
            if old_val >= new_val - 1e-12 * max(1.0, abs(new_val)):
                return p_prev if isinstance(p_prev, Distribution) else Distribution.normalized(pp)
    if not is_feasible(prob, p_new.probs, l, tol=1e-7):
        raise LPInfeasibleError(
            "LP solution violates the constraints beyond tolerance: "
            f"{feasibility_residuals(prob, p_new.probs, l)}"
        )
    return p_new
