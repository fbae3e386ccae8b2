"""Brute-force baselines, independent of the optimizer.

* ``exact_secrecy_capacity_grid``: max over a simplex lattice of
  I(X;Y) - I(X;Z), using exact mutual information.
* ``brute_force_local``: random feasible points of the local program.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterator, Optional

import numpy as np
from scipy.special import entr

from .channel import Channel
from .errors import AlphabetTooLargeError, DimensionError
from .optimizer.problem import SecrecyProblem, _quad

MAX_GRID_ALPHABET = 4
MAX_LOCAL_ALPHABET = 3


@dataclass(frozen=True)
class OracleResult:
    best_value: float
    argmax: Any
    samples_or_gridpoints: int
    resolution: float


def simplex_lattice(k: int, n: int) -> Iterator[np.ndarray]:
    """Yield integer compositions of ``n`` into ``k`` parts, in chunks.

    Order is deterministic (lexicographic in the leading coordinates).
    """
    if k == 1:
        yield np.array([[n]])
        return
    if k == 2:
        a = np.arange(n + 1)
        yield np.stack([a, n - a], axis=1)
        return
    if k == 3:
        a, b = np.nonzero(np.add.outer(np.arange(n + 1), np.arange(n + 1)) <= n)
        yield np.stack([a, b, n - a - b], axis=1)
        return
    for first in range(n + 1):
        for rest in simplex_lattice(k - 1, n - first):
            yield np.hstack([np.full((rest.shape[0], 1), first), rest])


def _batch_mi(w: np.ndarray, px: np.ndarray) -> np.ndarray:
    """I(X;Y) = H(Y) - H(Y|X) for each row of ``px``."""
    h_cond = entr(w).sum(axis=0)          # H(Y | X = x)
    py = px @ w.T
    return entr(py).sum(axis=1) - px @ h_cond


def exact_secrecy_capacity_grid(
    main: Channel,
    eaves: Channel,
    resolution: float,
    *,
    leakage_budget: Optional[float] = None,
) -> OracleResult:
    """Grid maximum of I(X;Y) - I(X;Z) over input pmfs.

    With ``leakage_budget`` set, instead maximizes I(X;Y) over gridpoints
    with I(X;Z) <= budget. That variant is exploratory.
    """
    k = main.input_size
    if eaves.input_size != k:
        raise DimensionError("main and eavesdropper channels need the same input alphabet")
    if k > MAX_GRID_ALPHABET:
        raise AlphabetTooLargeError(
            f"grid oracle supports |X| <= {MAX_GRID_ALPHABET}, got {k}"
        )
    if not 0 < resolution <= 0.5:
        raise ValueError(f"resolution must lie in (0, 0.5], got {resolution!r}")
    n = max(1, int(round(1.0 / resolution)))
    best, arg, count = -math.inf, None, 0
    for chunk in simplex_lattice(k, n):
        px = chunk / n
        iy = _batch_mi(main.w, px)
        iz = _batch_mi(eaves.w, px)
        if leakage_budget is None:
            vals = iy - iz
        else:
            vals = np.where(iz <= leakage_budget, iy, -math.inf)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, arg = float(vals[i]), px[i].copy()
        count += chunk.shape[0]
    return OracleResult(best, arg, count, 1.0 / n)


def brute_force_local(
    prob: SecrecyProblem,
    n_samples: int = 100_000,
    seed: int = 0,
    *,
    batch: int = 20_000,
) -> OracleResult:
    """Best objective over random feasible ``(P_U, {L_u})``.

    P_U is uniform on the simplex. Each L_u is Gaussian projected off
    sqrt(P_X), the set is centered so ``sum_u P_U(u) L_u = 0``, then scaled
    until the tighter budget binds. Draws come from a Philox stream keyed
    by ``seed``.
    """
    nx, nu_ = prob.x_size, prob.u_size
    if nx > MAX_LOCAL_ALPHABET or nu_ > MAX_LOCAL_ALPHABET:
        raise AlphabetTooLargeError(
            f"sampling oracle supports |X|, |U| <= {MAX_LOCAL_ALPHABET}, got {nx}, {nu_}"
        )
    rng = np.random.Generator(np.random.Philox(seed))
    sx = prob.p_x.sqrt
    rb, lb = prob.rate_budget, prob.leakage_budget
    best, arg, accepted = -math.inf, None, 0
    done = 0
    while done < n_samples:
        m = min(batch, n_samples - done)
        done += m
        p = rng.dirichlet(np.ones(nu_), size=m)
        l = rng.standard_normal((m, nu_, nx))
        l -= np.einsum("mux,x->mu", l, sx)[:, :, None] * sx[None, None, :]
        l -= np.einsum("mu,mux->mx", p, l)[:, None, :]
        r = np.einsum("mu,mux,mux->m", p, l, l)
        ok = r > 1e-300
        if not np.any(ok):
            continue
        p, l, r = p[ok], l[ok], r[ok]
        leak = np.einsum("mu,mux,xy,muy->m", p, l, prob.lam.m, l)
        gain = np.einsum("mu,mux,xy,muy->m", p, l, prob.v.m, l)
        s2 = rb / r
        if math.isfinite(lb):
            with np.errstate(divide="ignore"):
                s2 = np.minimum(s2, np.where(leak > 0, lb / np.where(leak > 0, leak, 1.0), np.inf))
        vals = s2 * gain
        accepted += int(ok.sum())
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = float(vals[i])
            arg = (p[i].copy(), l[i] * math.sqrt(s2[i]))
    if arg is None:
        raise ValueError("sampling oracle accepted no samples")
    # report the value of the stored configuration itself
    p_best, l_best = arg
    best = float(p_best @ _quad(prob.v.m, l_best))
    return OracleResult(best, arg, accepted, float("nan"))
