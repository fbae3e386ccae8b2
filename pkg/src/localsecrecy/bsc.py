"""Closed-form analysis of the binary symmetric wiretap channel.

With uniform input, both DTMs equal their transition matrices and the two
Gram matrices are diagonalized by ``[sqrt(P_X), tau]`` with second
eigenvalues ``(1-2p)^2`` (main) and ``(1-2q)^2`` (eavesdropper).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .channel import bsc
from .errors import DegradednessError
from .optimizer.problem import SecrecyProblem, Solution
from .optimizer.kkt import recover_xi_mu
from .policy import DEFAULT_POLICY, NumericPolicy
from .prob_core import Distribution


def binary_entropy(x: float) -> float:
    """H_b(x) in nats."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log1p(-x)


def exact_secrecy_capacity_bsc(p: float, q: float) -> float:
    """H_b(q) - H_b(p) nats, for a degraded pair p <= q <= 1/2."""
    if p > q:
        raise DegradednessError(f"need p <= q for a degraded pair, got p={p!r}, q={q!r}")
    if not (0.0 <= p and q <= 0.5):
        raise ValueError(f"crossovers must satisfy 0 <= p <= q <= 1/2, got p={p!r}, q={q!r}")
    return binary_entropy(q) - binary_entropy(p)


class Regime(enum.Enum):
    BOTH_BINDING = "BothBinding"
    LEAKAGE_ONLY = "LeakageOnly"
    RATE_ONLY = "RateOnly"


@dataclass(frozen=True)
class BscWiretapInstance:
    p: float
    q: float
    r: float
    theta: float
    epsilon: float
    policy: NumericPolicy = field(default=DEFAULT_POLICY, repr=False, compare=False)

    def __post_init__(self):
        for name in ("p", "q"):
            val = getattr(self, name)
            if not 0.0 <= val <= 0.5:
                raise ValueError(f"{name} must lie in [0, 1/2], got {val!r}")
        if not self.r > 0 or not self.theta > 0:
            raise ValueError("rate and leakage budgets must be positive")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")

    @property
    def lambda_v(self) -> float:
        return (1.0 - 2.0 * self.p) ** 2

    @property
    def lambda_lam(self) -> float:
        return (1.0 - 2.0 * self.q) ** 2

    @property
    def delta(self) -> float:
        return self.theta / self.r

    @cached_property
    def tau(self) -> np.ndarray:
        return np.array([1.0, -1.0]) / math.sqrt(2.0)

    @property
    def p_x(self) -> Distribution:
        return Distribution(np.array([0.5, 0.5]))

    def problem(self, u_size: int = 2) -> SecrecyProblem:
        return SecrecyProblem.from_channels(
            bsc(self.p), bsc(self.q), self.p_x, self.r, self.theta, self.epsilon, u_size, self.policy
        )


def _check_degraded(inst: BscWiretapInstance):
    if inst.lambda_lam > inst.lambda_v:
        raise DegradednessError(
            "eavesdropper channel better than legitimate; degradedness assumption violated "
            f"(lambda_Lambda={inst.lambda_lam!r} > lambda_V={inst.lambda_v!r})"
        )


def rate_branch(inst: BscWiretapInstance) -> float:
    return 2.0 / inst.epsilon**2 * inst.r * inst.lambda_v


def leakage_branch(inst: BscWiretapInstance) -> float:
    return 2.0 / inst.epsilon**2 * (inst.theta / inst.lambda_lam) * inst.lambda_v


def approx_secrecy_capacity(inst: BscWiretapInstance) -> float:
    """Piecewise local capacity, in the units of the program objective.

    Multiply by eps^2/2 for the approximate information in nats.
    """
    _check_degraded(inst)
    if inst.lambda_lam <= inst.delta:
        return rate_branch(inst)
    return leakage_branch(inst)


def regime_classify(inst: BscWiretapInstance) -> Regime:
    _check_degraded(inst)
    if abs(inst.lambda_lam - inst.delta) <= inst.policy.regime_tol:
        return Regime.BOTH_BINDING
    if inst.lambda_lam > inst.delta:
        return Regime.LEAKAGE_ONLY
    return Regime.RATE_ONLY


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    nu: float
    rho: float
    capacity: float
    caveats: tuple = ()


def analyze(inst: BscWiretapInstance) -> RegimeReport:
    """Regime, the multipliers it predicts, and any caveats.

    In the both-binding case the multipliers are only pinned down by
    ``nu*lambda_Lambda + rho = lambda_V``; the midpoint of that segment is
    returned.
    """
    regime = regime_classify(inst)
    lv, ll = inst.lambda_v, inst.lambda_lam
    caveats = []
    if regime is Regime.LEAKAGE_ONLY:
        nu, rho = lv / ll, 0.0
    elif regime is Regime.RATE_ONLY:
        nu, rho = 0.0, lv
        if lv < 1.0:
            caveats.append(
                "rate-only derivation asks for lambda_V >= 1 (nu + rho - 1 >= 0), which no "
                f"noisy BSC meets (lambda_V={lv:.6g}); the rate branch value is still used"
            )
    else:
        nu, rho = (0.5 * lv / ll if ll > 0 else 0.0), (0.5 * lv if ll > 0 else lv)
    return RegimeReport(regime, nu, rho, approx_secrecy_capacity(inst), tuple(caveats))


def analytic_solution(inst: BscWiretapInstance) -> Solution:
    """``L_u = s(u) tau`` with uniform P_U and the regime's multipliers."""
    report = analyze(inst)
    prob = inst.problem()
    t = report.capacity / inst.lambda_v if inst.lambda_v > 0 else prob.rate_budget
    s = math.sqrt(t)
    l = np.vstack([s * inst.tau, -s * inst.tau])
    p_u = Distribution(np.array([0.5, 0.5]))
    xi, mu = recover_xi_mu(prob, p_u.probs, l, report.nu, report.rho)
    return Solution(p_u, l, report.capacity, report.nu, report.rho, xi, mu, 0, True)
