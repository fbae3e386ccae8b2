"""Local secrecy program: alternating solver and KKT certification."""

from .alternating import alternate
from .kkt import KktReport, kkt_check, recover_xi_mu
from .problem import (
    SecrecyProblem,
    Solution,
    feasibility_residuals,
    is_feasible,
    leakage,
    objective,
    rate,
)
from .simplex import SimplexResult, simplex
from .steps import QcqpResult, k_matrix, lp_step, projected_ascent, qcqp_step

__all__ = [
    "KktReport",
    "QcqpResult",
    "SecrecyProblem",
    "SimplexResult",
    "Solution",
    "alternate",
    "feasibility_residuals",
    "is_feasible",
    "k_matrix",
    "kkt_check",
    "leakage",
    "lp_step",
    "objective",
    "projected_ascent",
    "qcqp_step",
    "rate",
    "recover_xi_mu",
    "simplex",
]
