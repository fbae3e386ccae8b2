"""Dense two-phase tableau simplex with Bland's anti-cycling rule.

Sized for the P_U subproblem: tens of variables and a handful of rows.
Solves::

    maximize c^T x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class SimplexResult:
    x: np.ndarray
    value: float
    status: str  # "optimal" | "infeasible" | "unbounded" | "iteration_limit"
    iterations: int


def _normalize_rows(a: np.ndarray, b: np.ndarray):
    scale = np.max(np.abs(np.hstack([a, b[:, None]])), axis=1)
    scale[scale == 0] = 1.0
    return a / scale[:, None], b / scale


def _pivot(t: np.ndarray, row: int, col: int):
    t[row] /= t[row, col]
    for i in range(t.shape[0]):
        if i != row and t[i, col] != 0.0:
            t[i] -= t[i, col] * t[row]


def _run(t, basis, cost, allowed, tol, max_iter):
    """Minimize cost^T z over the tableau in canonical form. Mutates t, basis."""
    for it in range(max_iter):
        reduced = cost - cost[basis] @ t[:, :-1]
        entering = next((j for j in allowed if reduced[j] < -tol), None)
        if entering is None:
            return "optimal", it
        col = t[:, entering]
        best, leave = None, None
        for i in np.flatnonzero(col > tol):
            ratio = t[i, -1] / col[i]
            if (
                best is None
                or ratio < best - tol
                or (abs(ratio - best) <= tol and basis[i] < basis[leave])
            ):
                best, leave = ratio, i
        if leave is None:
            return "unbounded", it
        _pivot(t, leave, entering)
        basis[leave] = entering
    return "iteration_limit", max_iter


def simplex(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, *, tol=1e-10, max_iter=10_000):
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    if A_ub.size:
        A_ub, b_ub = _normalize_rows(A_ub, b_ub)
    if A_eq.size:
        A_eq, b_eq = _normalize_rows(A_eq, b_eq)

    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq
    # columns: x (n) | slacks (m_ub) | artificials (one per row that needs one)
    needs_art = [b_ub[i] < 0 for i in range(m_ub)] + [True] * m_eq
    n_art = sum(needs_art)
    width = n + m_ub + n_art
    t = np.zeros((m, width + 1))
    basis = [0] * m
    art = n + m_ub
    for i in range(m_ub):
        sign = -1.0 if b_ub[i] < 0 else 1.0
        t[i, :n] = sign * A_ub[i]
        t[i, n + i] = sign
        t[i, -1] = sign * b_ub[i]
        if needs_art[i]:
            t[i, art] = 1.0
            basis[i] = art
            art += 1
        else:
            basis[i] = n + i
    for k in range(m_eq):
        i = m_ub + k
        sign = -1.0 if b_eq[k] < 0 else 1.0
        t[i, :n] = sign * A_eq[k]
        t[i, -1] = sign * b_eq[k]
        t[i, art] = 1.0
        basis[i] = art
        art += 1

    total_iter = 0
    art_cols = list(range(n + m_ub, width))
    if n_art:
        cost1 = np.zeros(width)
        cost1[art_cols] = 1.0
        status, it = _run(t, basis, cost1, range(width), tol, max_iter)
        total_iter += it
        if status != "optimal":
            return SimplexResult(np.full(n, np.nan), np.nan, status, total_iter)
        if float(cost1[basis] @ t[:, -1]) > 1e-9:
            return SimplexResult(np.full(n, np.nan), np.nan, "infeasible", total_iter)
        # drive zero-valued artificials out of the basis; drop redundant rows
        keep = []
        for i in range(t.shape[0]):
            if basis[i] in art_cols:
                cand = [j for j in range(n + m_ub) if abs(t[i, j]) > 1e-9]
                if not cand:
                    continue
                _pivot(t, i, cand[0])
                basis[i] = cand[0]
            keep.append(i)
        t = t[keep]
        basis = [basis[i] for i in keep]
        t = np.delete(t, art_cols, axis=1)

    width = n + m_ub
    cost2 = np.zeros(width)
    cost2[:n] = -c
    status, it = _run(t, basis, cost2, range(width), tol, max_iter)
    total_iter += it
    if status != "optimal":
        return SimplexResult(np.full(n, np.nan), np.nan, status, total_iter)
    z = np.zeros(width)
    for i, j in enumerate(basis):
        z[j] = t[i, -1]
    x = np.clip(z[:n], 0.0, None)
    return SimplexResult(x, float(c @ x), "optimal", total_iter)
