"""Numeric tolerances used across the package.

All thresholds live in one frozen object so a run can be reproduced by
passing the same policy everywhere. Functions default to ``DEFAULT_POLICY``.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericPolicy:
    sum_tol: float = 1e-12            # pmf sums, zero-sum perturbations
    orth_tol: float = 1e-10           # <l, sqrt(p)> for spherical perturbations
    marginal_tol: float = 1e-10       # sum_u P_U(u) J_u = 0
    spectral_tol: float = 1e-10       # DTM / Gram eigen-structure
    symmetry_tol: float = 1e-12
    feasibility_tol: float = 1e-8     # constraints of the local problem
    stationarity_tol: float = 1e-6
    psd_tol: float = 1e-8
    slackness_tol: float = 1e-6
    c_tol: float = 1e-6
    freeze_tol: float = 1e-12         # P_U(u) below this is a dead symbol
    regime_tol: float = 1e-10
    stochastic_tol: float = 1e-12     # channel columns
    file_stochastic_tol: float = 1e-9


DEFAULT_POLICY = NumericPolicy()
