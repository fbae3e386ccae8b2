"""Discrete memoryless channels and their divergence transfer matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import DeadOutputError, DimensionError, DistributionError
from .policy import DEFAULT_POLICY, NumericPolicy
from .prob_core import Distribution, _require_positive, _vec, kl_divergence


@dataclass(frozen=True)
class Channel:
    """Left-stochastic transition matrix ``w[y, x] = P(y | x)``."""

    w: np.ndarray
    policy: NumericPolicy = field(default=DEFAULT_POLICY, repr=False, compare=False)

    def __post_init__(self):
        w = np.array(self.w, dtype=float)
        if w.ndim != 2 or 0 in w.shape:
            raise DimensionError(f"channel must be a non-empty matrix, got shape {w.shape}")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise DistributionError("channel has negative or non-finite entries")
        col = w.sum(axis=0)
        bad = np.flatnonzero(np.abs(col - 1.0) > self.policy.stochastic_tol)
        if bad.size:
            raise DistributionError(
                f"column {int(bad[0])} of the channel sums to {col[bad[0]]!r}, not 1"
            )
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def input_size(self) -> int:
        return self.w.shape[1]

    @property
    def output_size(self) -> int:
        return self.w.shape[0]

    @classmethod
    def identity(cls, n: int) -> "Channel":
        return cls(np.eye(n))


def bsc(p: float) -> Channel:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"crossover probability must lie in [0, 1], got {p!r}")
    return Channel(np.array([[1 - p, p], [p, 1 - p]]))


def _check_input(ch: Channel, p_x) -> np.ndarray:
    px = _vec(p_x)
    if px.shape != (ch.input_size,):
        raise DimensionError(
            f"input pmf has length {px.size}, channel expects {ch.input_size}"
        )
    return px


def output_distribution(ch: Channel, p_x) -> Distribution:
    py = ch.w @ _check_input(ch, p_x)
    return Distribution.normalized(py)


def mutual_information(ch: Channel, p_x) -> float:
    """I(X;Y) in nats, as sum_x P(x) D(W(.|x) || P_Y)."""
    px = _check_input(ch, p_x)
    py = ch.w @ px
    total = 0.0
    for x in np.flatnonzero(px > 0):
        total += px[x] * kl_divergence(ch.w[:, x], py)
    return max(total, 0.0)


def _sign_fix(vecs: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Flip columns so the first entry with |v| > tol is positive."""
    vecs = vecs.copy()
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        idx = np.flatnonzero(np.abs(col) > tol)
        if idx.size and col[idx[0]] < 0:
            vecs[:, k] = -col
    return vecs


@dataclass(frozen=True)
class Dtm:
    b: np.ndarray
    input_dist: Distribution
    output_dist: Distribution

    def spectral_residuals(self) -> dict:
        """Deviations from the top singular triple ``(1, sqrt(P_Y), sqrt(P_X))``."""
        sx, sy = self.input_dist.sqrt, self.output_dist.sqrt
        sigma = np.linalg.svd(self.b, compute_uv=False)
        return {
            "sigma_max": abs(float(sigma[0]) - 1.0),
            "right": float(np.max(np.abs(self.b @ sx - sy))),
            "left": float(np.max(np.abs(self.b.T @ sy - sx))),
        }


def dtm(ch: Channel, p_x) -> Dtm:
    """B = diag(sqrt(P_Y))^{-1} W diag(sqrt(P_X))."""
    px = _check_input(ch, p_x)
    _require_positive(px, "input pmf")
    py = ch.w @ px
    dead = np.flatnonzero(py <= 0)
    if dead.size:
        raise DeadOutputError(int(dead[0]))
    b = ch.w * np.sqrt(px)[None, :] / np.sqrt(py)[:, None]
    b.setflags(write=False)
    return Dtm(b, Distribution.normalized(px), Distribution.normalized(py))


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric ``B^T B``. ``input_dist`` is kept when built from a DTM."""

    m: np.ndarray
    input_dist: Optional[Distribution] = None

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"Gram matrix must be square, got {m.shape}")
        if self.input_dist is not None and len(self.input_dist) != m.shape[0]:
            raise DimensionError("input distribution does not match Gram matrix size")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def size(self) -> int:
        return self.m.shape[0]

    @cached_property
    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """Ascending eigenvalues and sign-normalized eigenvectors (columns)."""
        w, v = np.linalg.eigh(0.5 * (self.m + self.m.T))
        return w, _sign_fix(v)

    def check(self, policy: NumericPolicy = DEFAULT_POLICY) -> dict:
        w, _ = self.eigh
        out = {
            "symmetry": float(np.max(np.abs(self.m - self.m.T))),
            "eig_min": float(w[0]),
            "eig_max": float(w[-1]),
        }
        if self.input_dist is not None:
            s = self.input_dist.sqrt
            out["unit_eigvec"] = float(np.max(np.abs(self.m @ s - s)))
        return out


def gram(d: Dtm) -> GramMatrix:
    return GramMatrix(d.b.T @ d.b, d.input_dist)


def gram_of(ch: Channel, p_x) -> GramMatrix:
    return gram(dtm(ch, p_x))
