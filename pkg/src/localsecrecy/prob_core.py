"""Finite-alphabet pmfs, additive and spherical perturbations, KL and chi^2.

Information quantities are in nats. Use :func:`to_bits` at the display layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import kl_div

from .errors import (
    DimensionError,
    DistributionError,
    EpsilonRangeError,
    NotStrictlyPositiveError,
)
from .policy import DEFAULT_POLICY, NumericPolicy

LOG2 = math.log(2.0)


def to_bits(nats: float) -> float:
    return nats / LOG2


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Distribution:
    """A pmf over the index set ``0..n-1``; ``labels`` is metadata only."""

    probs: np.ndarray
    labels: Optional[tuple] = field(default=None, compare=False)
    policy: NumericPolicy = field(default=DEFAULT_POLICY, repr=False, compare=False)

    def __post_init__(self):
        p = _frozen(self.probs)
        if p.ndim != 1 or p.size == 0:
            raise DistributionError(f"pmf must be a non-empty vector, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise DistributionError("pmf has non-finite entries")
        if np.any(p < 0):
            raise DistributionError(f"pmf has negative entries: {p}")
        if abs(p.sum() - 1.0) > self.policy.sum_tol:
            raise DistributionError(f"pmf sums to {p.sum()!r}, not 1")
        if self.labels is not None and len(self.labels) != p.size:
            raise DimensionError("labels length does not match alphabet size")
        object.__setattr__(self, "probs", p)

    def __len__(self):
        return self.probs.size

    def __array__(self, dtype=None, copy=None):
        return self.probs if dtype is None else self.probs.astype(dtype)

    @property
    def is_relint(self) -> bool:
        return bool(np.all(self.probs > 0))

    @property
    def sqrt(self) -> np.ndarray:
        return np.sqrt(self.probs)

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def normalized(cls, weights) -> "Distribution":
        """Build a pmf from nonnegative weights, renormalizing away rounding."""
        w = np.clip(np.asarray(weights, dtype=float), 0.0, None)
        return cls(w / w.sum())


@dataclass(frozen=True)
class AdditivePerturbation:
    j: np.ndarray
    policy: NumericPolicy = field(default=DEFAULT_POLICY, repr=False, compare=False)

    def __post_init__(self):
        j = _frozen(self.j)
        if j.ndim != 1:
            raise DimensionError("perturbation must be a vector")
        if abs(j.sum()) > self.policy.sum_tol:
            raise DistributionError(f"additive perturbation must sum to 0, sums to {j.sum()!r}")
        object.__setattr__(self, "j", j)

    def __array__(self, dtype=None, copy=None):
        return self.j if dtype is None else self.j.astype(dtype)


@dataclass(frozen=True)
class SphericalPerturbation:
    """Perturbation in the ``L = diag(sqrt(P))^{-1} J`` coordinates.

    Orthogonality to ``sqrt(P)`` is only checkable against a base pmf, so
    it is verified by :func:`to_spherical`/:func:`from_spherical`, not here.
    """

    l: np.ndarray

    def __post_init__(self):
        l = _frozen(self.l)
        if l.ndim != 1:
            raise DimensionError("perturbation must be a vector")
        object.__setattr__(self, "l", l)

    def __array__(self, dtype=None, copy=None):
        return self.l if dtype is None else self.l.astype(dtype)

    @property
    def norm_sq(self) -> float:
        return float(self.l @ self.l)


def _vec(x) -> np.ndarray:
    if isinstance(x, Distribution):
        return x.probs
    if isinstance(x, AdditivePerturbation):
        return x.j
    if isinstance(x, SphericalPerturbation):
        return x.l
    return np.asarray(x, dtype=float)


def _require_positive(p: np.ndarray, what="base pmf"):
    zeros = np.flatnonzero(p <= 0)
    if zeros.size:
        raise NotStrictlyPositiveError(
            f"{what} must be strictly positive; zero at index {int(zeros[0])}"
        )


def _same_length(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape} vs {b.shape}")


def kl_divergence(p, q) -> float:
    """D(p || q) in nats, with 0 log 0/0 = 0 and +inf on support mismatch."""
    p, q = _vec(p), _vec(q)
    _same_length(p, q)
    # kl_div(x, y) = x log(x/y) - x + y is termwise nonnegative, which avoids
    # cancellation when p and q are close; the -x + y parts sum to ~0.
    terms = kl_div(p, q)
    total = float(np.sum(terms)) + float(np.sum(p) - np.sum(q))
    return max(total, 0.0) if np.isfinite(total) else math.inf


def chi_squared(p_prime, p) -> float:
    p_prime, p = _vec(p_prime), _vec(p)
    _same_length(p_prime, p)
    _require_positive(p)
    return float(np.sum((p_prime - p) ** 2 / p))


def in_epsilon_region(p_prime, p, epsilon: float) -> bool:
    return chi_squared(p_prime, p) <= epsilon**2


def max_valid_epsilon(p, j) -> float:
    """Largest r such that p + eps*j stays strictly positive for eps in (0, r)."""
    p, j = _vec(p), _vec(j)
    _same_length(p, j)
    _require_positive(p)
    nz = j != 0
    if not np.any(nz):
        return math.inf
    return float(np.min(p[nz] / np.abs(j[nz])))


def perturb(p, j, epsilon: float) -> Distribution:
    pv, jv = _vec(p), _vec(j)
    bound = max_valid_epsilon(pv, jv)
    if not (0 < epsilon < bound):
        raise EpsilonRangeError(epsilon, bound)
    return Distribution(pv + epsilon * jv)


def to_spherical(j, p, policy: NumericPolicy = DEFAULT_POLICY) -> SphericalPerturbation:
    jv, pv = _vec(j), _vec(p)
    _same_length(jv, pv)
    _require_positive(pv)
    return SphericalPerturbation(jv / np.sqrt(pv))


def from_spherical(l, p, policy: NumericPolicy = DEFAULT_POLICY) -> AdditivePerturbation:
    lv, pv = _vec(l), _vec(p)
    _same_length(lv, pv)
    _require_positive(pv)
    sp = np.sqrt(pv)
    if abs(lv @ sp) > policy.orth_tol:
        raise DistributionError(
            f"spherical perturbation not orthogonal to sqrt(P): <l, sqrt(P)> = {lv @ sp!r}"
        )
    return AdditivePerturbation(lv * sp, policy=policy)


def kl_local_approx(l, epsilon: float) -> float:
    """Quadratic surrogate (eps^2 / 2) * ||l||^2 for the KL divergence."""
    lv = _vec(l)
    return 0.5 * epsilon**2 * float(lv @ lv)


@dataclass(frozen=True)
class PerturbationFamily:
    """Conditionals ``P_{X|U=u} = base + epsilon * J_u``, one row per u.

    Construction does not enforce validity; see :func:`validate_family`.
    """

    base: Distribution
    p_u: Distribution
    perturbations: np.ndarray  # shape (|U|, |X|)
    epsilon: float

    def __post_init__(self):
        js = np.array([_vec(j) for j in self.perturbations], dtype=float)
        if js.ndim != 2 or js.shape != (len(self.p_u), len(self.base)):
            raise DimensionError(
                f"expected {len(self.p_u)} perturbations of length {len(self.base)}, got {js.shape}"
            )
        js.setflags(write=False)
        object.__setattr__(self, "perturbations", js)

    @property
    def u_size(self) -> int:
        return len(self.p_u)

    def conditionals(self) -> np.ndarray:
        """Rows ``P_{X|U=u}``."""
        return self.base.probs[None, :] + self.epsilon * self.perturbations

    def spherical(self) -> np.ndarray:
        """Rows ``L_u = J_u / sqrt(P_X)``."""
        _require_positive(self.base.probs)
        return self.perturbations / self.base.sqrt[None, :]

    @classmethod
    def from_spherical(cls, base: Distribution, p_u: Distribution, l, epsilon: float):
        l = np.atleast_2d(np.asarray(l, dtype=float))
        return cls(base, p_u, l * base.sqrt[None, :], epsilon)


@dataclass(frozen=True)
class FamilyReport:
    sum_residuals: np.ndarray        # per u, sum_x J_u(x)
    marginal_residual: np.ndarray    # per x, sum_u P_U(u) J_u(x)
    positivity_margins: np.ndarray   # per u, max_valid_epsilon(J_u) - epsilon
    passed: bool

    def __bool__(self):
        return self.passed


def validate_family(f: PerturbationFamily, policy: NumericPolicy = DEFAULT_POLICY) -> FamilyReport:
    js = f.perturbations
    sums = js.sum(axis=1)
    marginal = f.p_u.probs @ js
    if f.base.is_relint:
        margins = np.array([max_valid_epsilon(f.base, j) - f.epsilon for j in js])
    else:
        margins = np.full(len(js), -math.inf)
    passed = (
        bool(np.all(np.abs(sums) <= policy.sum_tol))
        and bool(np.all(np.abs(marginal) <= policy.marginal_tol))
        and bool(np.all(margins > 0))
        and f.epsilon > 0
    )
    return FamilyReport(sums, marginal, margins, passed)


def random_family(
    rng: np.random.Generator,
    x_size: int,
    u_size: int,
    epsilon: float,
    *,
    min_prob: float = 0.05,
) -> PerturbationFamily:
    """Draw a valid family whose perturbations admit any epsilon below 1.

    Handy for property tests; each J_u is rescaled so max|J_u(x)|/P_X(x) <= 1.
    """
    px = rng.dirichlet(np.ones(x_size))
    px = min_prob + (1 - min_prob * x_size) * px
    px = px / px.sum()
    pu = rng.dirichlet(np.ones(u_size))
    pu = 0.05 + (1 - 0.05 * u_size) * pu
    pu = pu / pu.sum()
    g = rng.standard_normal((u_size, x_size))
    g -= g.mean(axis=1, keepdims=True)
    g -= (pu @ g)[None, :]
    g /= np.max(np.abs(g) / px[None, :])
    return PerturbationFamily(Distribution(px), Distribution(pu), g, epsilon)
