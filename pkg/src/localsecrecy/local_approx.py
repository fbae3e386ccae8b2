"""Quadratic approximations of I(U;X), I(U;Y), I(U;Z) and their exact values.

The approximations drop every o(eps^2) term. The exact routines evaluate the
KL-decomposition of mutual information directly and exist so the dropped
remainder can be measured.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .channel import Channel, Dtm, GramMatrix, dtm
from .errors import DimensionError, EpsilonRangeError, InvalidFamilyError
from .policy import DEFAULT_POLICY, NumericPolicy
from .prob_core import Distribution, PerturbationFamily, kl_divergence, validate_family


@dataclass(frozen=True)
class Conditionals:
    """Explicit ``P_{X|U=u}`` rows, for cases no perturbation can express
    (for example a deterministic split at the edge of the simplex)."""

    p_u: Distribution
    rows: np.ndarray  # shape (|U|, |X|)

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[0] != len(self.p_u):
            raise DimensionError("need one conditional pmf per symbol of U")
        if np.any(rows < 0) or np.any(np.abs(rows.sum(axis=1) - 1) > 1e-12):
            raise InvalidFamilyError("conditional rows must be pmfs")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    def marginal(self) -> np.ndarray:
        return self.p_u.probs @ self.rows


FamilyLike = Union[PerturbationFamily, Conditionals]


@dataclass(frozen=True)
class InfoTriple:
    i_ux: float
    i_uy: float
    i_uz: float


def _check_family(f: PerturbationFamily, policy: NumericPolicy):
    report = validate_family(f, policy)
    if not report.passed:
        if np.any(report.positivity_margins <= 0):
            bound = float(np.min(report.positivity_margins + f.epsilon))
            raise EpsilonRangeError(f.epsilon, bound)
        raise InvalidFamilyError(
            "perturbation family violates the zero-sum or marginal-preservation "
            f"constraints (sums {report.sum_residuals}, marginal {report.marginal_residual})"
        )


def _matrix(g) -> np.ndarray:
    if isinstance(g, Dtm):
        return g.b
    if isinstance(g, GramMatrix):
        return g.m
    return np.asarray(g, dtype=float)


def approx_encoding_info(f: PerturbationFamily, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    _check_family(f, policy)
    l = f.spherical()
    return 0.5 * f.epsilon**2 * float(f.p_u.probs @ np.sum(l * l, axis=1))


def approx_channel_info(
    g: Union[Dtm, GramMatrix], f: PerturbationFamily, policy: NumericPolicy = DEFAULT_POLICY
) -> float:
    """(eps^2/2) sum_u P_U(u) ||B L_u||^2.

    Accepts the DTM itself or its Gram matrix; ``L^T (B^T B) L`` equals
    ``||B L||^2`` so either works for the main channel and the eavesdropper.
    """
    _check_family(f, policy)
    l = f.spherical()
    m = _matrix(g)
    if isinstance(g, GramMatrix):
        if m.shape[0] != l.shape[1]:
            raise DimensionError(f"Gram matrix is {m.shape}, perturbations have length {l.shape[1]}")
        quad = np.einsum("ux,xy,uy->u", l, m, l)
    else:
        if m.shape[1] != l.shape[1]:
            raise DimensionError(f"DTM is {m.shape}, perturbations have length {l.shape[1]}")
        bl = l @ m.T
        quad = np.sum(bl * bl, axis=1)
    return 0.5 * f.epsilon**2 * float(f.p_u.probs @ quad)


def _rows_and_marginal(f: FamilyLike, policy: NumericPolicy):
    if isinstance(f, Conditionals):
        return f.p_u.probs, f.rows, f.marginal()
    _check_family(f, policy)
    return f.p_u.probs, f.conditionals(), f.base.probs


def exact_encoding_info(f: FamilyLike, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """I(U;X) = sum_u P_U(u) D(P_{X|U=u} || P_X), exactly."""
    pu, rows, px = _rows_and_marginal(f, policy)
    return float(sum(pu[u] * kl_divergence(rows[u], px) for u in range(len(pu)) if pu[u] > 0))


def exact_markov_info(ch: Channel, f: FamilyLike, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """I(U;Y) for U -> X -> Y, through the pushed-forward conditionals W P_{X|U=u}."""
    pu, rows, px = _rows_and_marginal(f, policy)
    if rows.shape[1] != ch.input_size:
        raise DimensionError(
            f"conditionals have length {rows.shape[1]}, channel expects {ch.input_size}"
        )
    py = ch.w @ px
    pushed = rows @ ch.w.T
    return float(sum(pu[u] * kl_divergence(pushed[u], py) for u in range(len(pu)) if pu[u] > 0))


def info_triple(
    main: Channel,
    eaves: Channel,
    f: PerturbationFamily,
    *,
    exact: bool = True,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> InfoTriple:
    if exact:
        return InfoTriple(
            exact_encoding_info(f, policy),
            exact_markov_info(main, f, policy),
            exact_markov_info(eaves, f, policy),
        )
    return InfoTriple(
        approx_encoding_info(f, policy),
        approx_channel_info(dtm(main, f.base), f, policy),
        approx_channel_info(dtm(eaves, f.base), f, policy),
    )
