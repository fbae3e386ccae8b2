"""Problem and solution containers for the local secrecy program.

The program, in spherical coordinates with budgets ``2R/eps^2`` and
``2*Theta/eps^2``::

    maximize    sum_u P_U(u) L_u^T V L_u
    subject to  sum_u P_U(u) ||L_u||^2        <= 2R/eps^2        (rate)
                sum_u P_U(u) L_u^T Lam L_u    <= 2Theta/eps^2    (leakage)
                <sqrt(P_X), L_u> = 0                  for all u
                sum_u P_U(u) L_u = 0
                P_U in the probability simplex
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.linalg import null_space

from ..channel import Channel, GramMatrix, gram_of
from ..errors import DimensionError
from ..policy import DEFAULT_POLICY, NumericPolicy
from ..prob_core import Distribution


def _as_gram(g) -> GramMatrix:
    return g if isinstance(g, GramMatrix) else GramMatrix(g)


@dataclass(frozen=True)
class SecrecyProblem:
    """Inputs of the local secrecy program.

    ``theta=math.inf`` drops the leakage constraint. ``r=0`` is accepted and
    makes the zero perturbation the only feasible point.
    """

    v: GramMatrix
    lam: GramMatrix
    p_x: Distribution
    r: float
    theta: float
    epsilon: float
    u_size: Optional[int] = None
    policy: NumericPolicy = field(default=DEFAULT_POLICY, repr=False, compare=False)

    def __post_init__(self):
        v, lam = _as_gram(self.v), _as_gram(self.lam)
        p_x = self.p_x if isinstance(self.p_x, Distribution) else Distribution(self.p_x)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "p_x", p_x)
        n = len(p_x)
        if v.size != n or lam.size != n:
            raise DimensionError(
                f"V is {v.m.shape}, Lambda is {lam.m.shape}, but |X| = {n}"
            )
        if not p_x.is_relint:
            raise DimensionError("input pmf must be strictly positive")
        s = p_x.sqrt
        for name, g in (("V", v.m), ("Lambda", lam.m)):
            scale = max(1.0, float(np.max(np.abs(g))))
            if np.max(np.abs(g - g.T)) > self.policy.symmetry_tol * scale:
                raise ValueError(f"{name} is not symmetric")
            if np.max(np.abs(g @ s - s)) > self.policy.spectral_tol * scale:
                raise ValueError(
                    f"sqrt(P_X) is not a unit-eigenvalue eigenvector of {name}; "
                    "is it the Gram matrix of a DTM built at this input pmf?"
                )
        if not (self.r >= 0 and math.isfinite(self.r)):
            raise ValueError(f"rate budget must be finite and >= 0, got {self.r!r}")
        if not self.theta > 0:
            raise ValueError(f"leakage budget must be > 0, got {self.theta!r}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
        u = n if self.u_size is None else int(self.u_size)
        if u < 2:
            raise ValueError("|U| must be at least 2")
        object.__setattr__(self, "u_size", u)

    @classmethod
    def from_channels(
        cls,
        main: Channel,
        eaves: Channel,
        p_x,
        r: float,
        theta: float,
        epsilon: float,
        u_size: Optional[int] = None,
        policy: NumericPolicy = DEFAULT_POLICY,
    ) -> "SecrecyProblem":
        p_x = p_x if isinstance(p_x, Distribution) else Distribution(p_x)
        return cls(gram_of(main, p_x), gram_of(eaves, p_x), p_x, r, theta, epsilon, u_size, policy)

    @property
    def x_size(self) -> int:
        return len(self.p_x)

    @property
    def rate_budget(self) -> float:
        return 2.0 * self.r / self.epsilon**2

    @property
    def leakage_budget(self) -> float:
        return 2.0 * self.theta / self.epsilon**2

    @cached_property
    def subspace(self) -> np.ndarray:
        """Orthonormal basis (columns) of the complement of sqrt(P_X)."""
        return null_space(self.p_x.sqrt[None, :])

    def with_budgets(self, r=None, theta=None, epsilon=None) -> "SecrecyProblem":
        return SecrecyProblem(
            self.v,
            self.lam,
            self.p_x,
            self.r if r is None else r,
            self.theta if theta is None else theta,
            self.epsilon if epsilon is None else epsilon,
            self.u_size,
            self.policy,
        )


def _quad(m: np.ndarray, l: np.ndarray) -> np.ndarray:
    return np.einsum("ux,xy,uy->u", l, m, l)


def objective(prob: SecrecyProblem, p_u, l) -> float:
    return float(np.asarray(p_u, dtype=float) @ _quad(prob.v.m, np.asarray(l, dtype=float)))


def rate(prob: SecrecyProblem, p_u, l) -> float:
    l = np.asarray(l, dtype=float)
    return float(np.asarray(p_u, dtype=float) @ np.sum(l * l, axis=1))


def leakage(prob: SecrecyProblem, p_u, l) -> float:
    return float(np.asarray(p_u, dtype=float) @ _quad(prob.lam.m, np.asarray(l, dtype=float)))


def feasibility_residuals(prob: SecrecyProblem, p_u, l) -> dict:
    """Constraint violations; quadratic budgets are scaled by max(1, budget)."""
    p = np.asarray(p_u, dtype=float)
    l = np.asarray(l, dtype=float)
    if l.shape != (p.size, prob.x_size):
        raise DimensionError(f"L has shape {l.shape}, expected {(p.size, prob.x_size)}")
    rb, lb = prob.rate_budget, prob.leakage_budget
    leak_res = 0.0
    if math.isfinite(lb):
        leak_res = max(0.0, leakage(prob, p, l) - lb) / max(1.0, lb)
    return {
        "rate": max(0.0, rate(prob, p, l) - rb) / max(1.0, rb),
        "leakage": leak_res,
        "orthogonality": float(np.max(np.abs(l @ prob.p_x.sqrt))) if l.size else 0.0,
        "coupling": float(np.max(np.abs(p @ l))) if l.size else 0.0,
        "simplex": max(abs(float(p.sum()) - 1.0), max(0.0, -float(p.min()))),
    }


def is_feasible(prob: SecrecyProblem, p_u, l, tol: Optional[float] = None) -> bool:
    tol = prob.policy.feasibility_tol if tol is None else tol
    return all(v <= tol for v in feasibility_residuals(prob, p_u, l).values())


@dataclass
class Solution:
    p_u: Distribution
    l: np.ndarray
    objective: float
    nu: float
    rho: float
    xi: np.ndarray
    mu: np.ndarray
    iterations: int = 0
    converged: bool = True
    history: list = field(default_factory=list, repr=False)

    def information(self, epsilon: float) -> float:
        """Objective rescaled by eps^2/2: the approximate I(U;Y) in nats."""
        return 0.5 * epsilon**2 * self.objective

    def to_json_dict(self) -> dict:
        return {
            "p_u": [float(x) for x in self.p_u.probs],
            "l": [[float(x) for x in row] for row in self.l],
            "objective": float(self.objective),
            "nu": float(self.nu),
            "rho": float(self.rho),
            "xi": [float(x) for x in self.xi],
            "mu": [float(x) for x in self.mu],
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Solution":
        keys = {"p_u", "l", "objective", "nu", "rho", "xi", "mu", "iterations", "converged"}
        missing = keys - d.keys()
        if missing:
            raise ValueError(f"solution is missing keys: {sorted(missing)}")
        return cls(
            p_u=Distribution.normalized(d["p_u"]),
            l=np.array(d["l"], dtype=float),
            objective=float(d["objective"]),
            nu=float(d["nu"]),
            rho=float(d["rho"]),
            xi=np.array(d["xi"], dtype=float),
            mu=np.array(d["mu"], dtype=float),
            iterations=int(d["iterations"]),
            converged=bool(d["converged"]),
        )
