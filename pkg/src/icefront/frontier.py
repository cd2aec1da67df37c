"""Frontier advance: absorption cascades and jump sizing.

One absorbed particle advances the frontier by alpha * particle_mass, which
can push further particles below the frontier.  The cascade resolves that
feedback within a single step.  Two equivalent formulations are provided:
a single sorted scan and a fixed-point iteration on empirical mass; the
scan is the fast path, the iteration mirrors the defining recursion.

For a continuum CDF F, the corresponding advance is the smallest x > 0
with F(x) < x / alpha; ``physical_jump_from_cdf`` locates it numerically.
``picard_frontier`` instead builds the advance over a short horizon from
frozen Brownian paths, refining the absorption threshold iteratively.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core.streams import NoiseStreams
from .core.types import EnsembleState

__all__ = [
    "CascadeResult",
    "cascade_scan",
    "cascade_iterate",
    "physical_jump_from_cdf",
    "picard_frontier",
]

_BISECT_STEPS = 10  # refinement: resolution / 2**10


@dataclass(frozen=True)
class CascadeResult:
    advance: float
    absorbed: int


def cascade_scan(sorted_positions: np.ndarray, alpha: float, particle_mass: float) -> CascadeResult:
    """Resolve the cascade in one pass over ascending positions.

    The absorbed count is the smallest k with positions[k] > alpha * k *
    particle_mass (k = m if no such index).  A particle exactly on the
    moved frontier counts as absorbed.
    """
    pos = np.asarray(sorted_positions, dtype=float)
    if pos.ndim != 1:
        raise ValueError("positions must be one-dimensional")
    if alpha < 0.0 or particle_mass <= 0.0:
        raise ValueError("need alpha >= 0 and particle_mass > 0")
    m = len(pos)
    if m == 0:
        return CascadeResult(0.0, 0)
    if np.any(pos[1:] < pos[:-1]):
        raise ValueError("positions must be sorted ascending")
    survives = pos > alpha * particle_mass * np.arange(m)
    if not survives.any():
        k = m
    else:
        k = int(np.argmax(survives))
    return CascadeResult(alpha * particle_mass * k, k)


def cascade_iterate(positions: np.ndarray, alpha: float, particle_mass: float,
                    start: float = 0.0) -> CascadeResult:
    """Fixed-point form: D <- alpha * (empirical mass at or below D).

    Starts from the mass already at or below ``start`` (default 0) and
    terminates in at most m passes since each pass either fixes D or
    absorbs at least one more particle.
    """
    pos = np.sort(np.asarray(positions, dtype=float))
    if alpha < 0.0 or particle_mass <= 0.0:
        raise ValueError("need alpha >= 0 and particle_mass > 0")
    m = len(pos)
    if m == 0:
        return CascadeResult(0.0, 0)
    k = int(np.searchsorted(pos, start, side="right"))
    for _ in range(m + 1):
        d = alpha * particle_mass * k
        k_next = int(np.searchsorted(pos, d, side="right"))
        if k_next == k:
            return CascadeResult(d, k)
        k = k_next
    return CascadeResult(alpha * particle_mass * k, k)  # pragma: no cover


def physical_jump_from_cdf(cdf: Callable[[float], float], alpha: float,
                           x_max: float, resolution: float) -> float:
    """Smallest x > 0 where the mass F(x) falls short of x / alpha.

    Forward scan at ``resolution`` finds the first shortfall, bisection
    sharpens the bracket to resolution / 2**10.  Returns 0.0 when the
    shortfall happens arbitrarily close to 0 (no jump).
    """
    if alpha <= 0.0:
        return 0.0
    if resolution <= 0.0 or x_max <= 0.0:
        raise ValueError("resolution and x_max must be > 0")

    short = lambda x: float(cdf(x)) < x / alpha

    lo = 0.0
    hi = None
    x = resolution
    while x <= x_max + resolution:
        if short(x):
            hi = x
            break
        lo = x
        x += resolution
    if hi is None:
        # No shortfall up to x_max: treat the far end as the advance.
        return x_max
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if short(mid):
            hi = mid
        else:
            lo = mid
    return hi if lo > 0.0 else 0.0


def picard_frontier(ensemble: EnsembleState, epsilon: float, n_iters: int,
                    inner_dt: float = 0.0, streams: NoiseStreams | None = None,
                    step_index: int = 0) -> np.ndarray:
    """Iterated frontier advance over [0, epsilon] from frozen paths.

    Each alive particle gets one Brownian path on the inner grid, drawn
    once and reused: iterate n counts the paths whose running minimum
    dips to the previous advance, and converts that mass to L[n].  Path
    reuse makes the sequence non-decreasing; it stalls at the exact fixed
    point, which is also returned for the remaining iterates.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be > 0")
    if n_iters < 1:
        raise ValueError("n_iters must be >= 1")
    if streams is None:
        raise ValueError("picard_frontier needs a NoiseStreams handle")
    if inner_dt <= 0.0:
        inner_dt = epsilon / 64.0
    n_inner = max(1, int(round(epsilon / inner_dt)))
    dt_sub = epsilon / n_inner

    alive = ensemble.alive
    n = len(ensemble.positions)
    z = streams.picard_normals(step_index, n, n_inner)
    paths = np.cumsum(z * np.sqrt(dt_sub), axis=1)
    # Running path minimum, including the start at 0.
    path_min = np.minimum(np.min(paths, axis=1), 0.0)
    floor_hit = ensemble.positions + path_min  # alive lanes only are used

    quantum = ensemble.alpha * ensemble.particle_mass
    out = np.empty(n_iters, dtype=float)
    level = 0.0
    for i in range(n_iters):
        hit = int(np.count_nonzero(alive & (floor_hit <= level)))
        level_next = quantum * hit
        out[i] = level_next
        if level_next == level:
            out[i:] = level_next
            break
        level = level_next
    return out
