"""First-order certification of a candidate solution.

Stationarity of the Lagrangian in L_u reads::

    2 P_U(u) K L_u + xi(u) sqrt(P_X) + P_U(u) mu = 0,   K = -V + nu Lam + rho I

At an optimum ``mu = -(sum xi) sqrt(P_X)``, ``xi = (sum xi) P_U`` and
``K L_u = 0``. We report ``c(u) = <K L_u, sqrt(P_X)>`` separately from the
residual orthogonal to sqrt(P_X).

Positive semidefiniteness of K is checked on the complement of sqrt(P_X),
the only directions the orthogonality constraint leaves free. The full-space
minimum eigenvalue is reported too; when it is negative a caveat is added
but the verdict does not depend on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .problem import SecrecyProblem, Solution, feasibility_residuals, leakage, rate
from .steps import k_matrix


@dataclass
class KktReport:
    stationarity_residual: float
    c_values: np.ndarray
    k_min_eigenvalue: float
    k_min_eigenvalue_full: float
    complementary_slackness: dict
    mu_colinearity: float
    xi_proportionality: float
    lagrangian_residual: float
    feasibility: dict
    passed: bool
    caveats: list = field(default_factory=list)

    def __bool__(self):
        return self.passed

    def lines(self) -> list[str]:
        cs = self.complementary_slackness
        out = [
            f"stationarity_residual   {self.stationarity_residual:.3e}",
            f"max |c(u)|              {float(np.max(np.abs(self.c_values), initial=0.0)):.3e}",
            f"k_min_eigenvalue        {self.k_min_eigenvalue:.6e}  (complement of sqrt(P_X))",
            f"k_min_eigenvalue_full   {self.k_min_eigenvalue_full:.6e}",
            f"slackness (rate)        {cs['rate']:.3e}",
            f"slackness (leakage)     {cs['leakage']:.3e}",
            f"mu_colinearity          {self.mu_colinearity:.3e}",
            f"xi_proportionality      {self.xi_proportionality:.3e}",
            f"lagrangian_residual     {self.lagrangian_residual:.3e}",
            "feasibility             "
            + ", ".join(f"{k}={v:.1e}" for k, v in self.feasibility.items()),
        ]
        out += [f"caveat: {c}" for c in self.caveats]
        out.append("verdict                 " + ("PASS" if self.passed else "FAIL"))
        return out


def recover_xi_mu(prob: SecrecyProblem, p_u, l, nu: float, rho: float):
    """Least-squares (minimum-norm) xi, mu for the stationarity equations."""
    p = np.asarray(p_u, dtype=float)
    l = np.asarray(l, dtype=float)
    n_u, n_x = l.shape
    s = prob.p_x.sqrt
    kl = l @ k_matrix(nu, rho, prob.v, prob.lam).T
    a = np.zeros((n_u * n_x, n_u + n_x))
    b = np.zeros(n_u * n_x)
    for u in range(n_u):
        rows = slice(u * n_x, (u + 1) * n_x)
        a[rows, u] = s
        a[rows, n_u:] = p[u] * np.eye(n_x)
        b[rows] = -2.0 * p[u] * kl[u]
    z, *_ = np.linalg.lstsq(a, b, rcond=None)
    return z[:n_u], z[n_u:]


def kkt_check(prob: SecrecyProblem, sol: Solution) -> KktReport:
    pol = prob.policy
    p = sol.p_u.probs
    l = np.asarray(sol.l, dtype=float)
    s = prob.p_x.sqrt
    caveats = []
    nu, rho = float(sol.nu), float(sol.rho)
    if nu < 0 or rho < 0:
        caveats.append("negative multiplier")
    k = k_matrix(max(nu, 0.0), max(rho, 0.0), prob.v, prob.lam)

    live = np.flatnonzero(p >= pol.freeze_tol)
    kl = l[live] @ k.T
    c = kl @ s
    resid = kl - np.outer(c, s)
    stationarity = float(np.max(np.linalg.norm(resid, axis=1), initial=0.0))

    qb = prob.subspace
    k_sub = qb.T @ k @ qb
    k_min = float(np.linalg.eigvalsh(0.5 * (k_sub + k_sub.T))[0]) if k_sub.size else 0.0
    k_min_full = float(np.linalg.eigvalsh(k)[0])
    if k_min_full < -pol.psd_tol:
        caveats.append(
            "K is indefinite along sqrt(P_X) (nu + rho - 1 < 0); that direction is "
            "removed by the orthogonality constraint, so only the complement is tested"
        )

    rate_gap = rate(prob, p, l) - prob.rate_budget
    slack = {"rate": abs(rho * rate_gap), "leakage": 0.0}
    if math.isfinite(prob.leakage_budget):
        slack["leakage"] = abs(nu * (leakage(prob, p, l) - prob.leakage_budget))
    elif nu != 0:
        slack["leakage"] = math.inf

    xi = np.asarray(sol.xi, dtype=float)
    mu = np.asarray(sol.mu, dtype=float)
    total_xi = float(xi.sum()) if xi.size else 0.0
    mu_col = float(np.max(np.abs(mu + total_xi * s))) if mu.size == s.size else math.inf
    xi_prop = float(np.max(np.abs(xi - total_xi * p))) if xi.size == p.size else math.inf

    full = 2.0 * p[:, None] * (l @ k.T) + np.outer(xi, s) + p[:, None] * mu[None, :] \
        if (xi.size == p.size and mu.size == s.size) else np.full((1, 1), math.inf)
    lagr = float(np.max(np.abs(full), initial=0.0))

    feas = feasibility_residuals(prob, p, l)
    passed = (
        nu >= 0
        and rho >= 0
        and stationarity <= pol.stationarity_tol
        and k_min >= -pol.psd_tol
        and max(slack.values()) <= pol.slackness_tol
        and float(np.max(np.abs(c), initial=0.0)) <= pol.c_tol
        and all(v <= pol.feasibility_tol for v in feas.values())
    )
    return KktReport(
        stationarity_residual=stationarity,
        c_values=c,
        k_min_eigenvalue=k_min,
        k_min_eigenvalue_full=k_min_full,
        complementary_slackness=slack,
        mu_colinearity=mu_col,
        xi_proportionality=xi_prop,
        lagrangian_residual=lagr,
        feasibility=feas,
        passed=bool(passed),
        caveats=caveats,
    )
