"""Slow, independent references the fast solvers are tested against.

Nothing here shares numerics with the production code paths: the
reflection formulas are closed form, and the bridge estimator builds the
absorbed density by brute-force conditioning rather than time stepping.
Accuracy over speed throughout.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from scipy.special import ndtr

from .core.density import InitialDensity
from .core.streams import NoiseStreams
from .core.types import FrontierPath

__all__ = [
    "reflection_density",
    "reflection_bin_mass",
    "reflection_survival",
    "bridge_density",
    "blowup_criterion",
    "nojump_criterion",
]


def _gauss(t: float, z):
    return np.exp(-np.asarray(z, dtype=float) ** 2 / (2.0 * t)) / np.sqrt(2.0 * np.pi * t)


def reflection_density(t: float, x0: float, y):
    """Density at y of a Brownian particle from x0, killed at the wall.

    Image-charge solution for a fixed absorbing boundary at zero; exact
    whenever the frontier does not move.
    """
    if t <= 0.0 or x0 <= 0.0:
        raise ValueError("need t > 0 and x0 > 0")
    y = np.asarray(y, dtype=float)
    out = _gauss(t, x0 - y) - _gauss(t, x0 + y)
    return np.where(y >= 0.0, out, 0.0)


def reflection_bin_mass(t: float, x0: float, edges) -> np.ndarray:
    """Exact surviving mass per histogram bin for the fixed-wall problem.

    Integrates the image-charge density over [edges[i], edges[i+1]] as a
    difference of normal CDFs, so binned particle counts can be compared
    without quadrature error.
    """
    edges = np.asarray(edges, dtype=float)
    rt = np.sqrt(t)
    direct = ndtr((edges - x0) / rt)
    image = ndtr((edges + x0) / rt)
    mass = np.diff(direct) - np.diff(image)
    return np.maximum(mass, 0.0)


def reflection_survival(t: float, x0: float) -> float:
    """P(no wall hit by t) for a Brownian particle started at x0 > 0."""
    if t <= 0.0:
        return 1.0
    return float(2.0 * ndtr(x0 / np.sqrt(t)) - 1.0)


def bridge_density(t: float, ys, frontier: FrontierPath,
                   density: InitialDensity, n_samples: int = 4000,
                   n_time: int = 64, streams: Optional[NoiseStreams] = None,
                   seed: int = 1) -> np.ndarray:
    """Absorbed-drift density at points ys, with the frontier taken as given.

    For each sample the start point comes from the initial law and a
    Brownian bridge is pinned so the drifted path ends exactly at y.  The
    density is the pinning kernel weighted by the bridge's probability of
    staying above the (time-dependent) frontier, with the usual
    exponential no-crossing factor per sub-interval.  Cost grows linearly
    in n_samples * n_time per evaluation point; this is a test oracle,
    not a solver.
    """
    if streams is None:
        streams = NoiseStreams(seed)
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    ss = np.linspace(0.0, t, n_time + 1)
    ds = ss[1] - ss[0]
    lam = frontier.value_at(ss)

    u = streams.oracle_uniforms(0, n_samples)
    x0 = density.quantile(u)

    z = np.empty((n_time, n_samples))
    for k in range(n_time):
        z[k] = streams.oracle_normals(k + 1, n_samples)
    walk = np.vstack([np.zeros(n_samples), np.cumsum(z * np.sqrt(ds), axis=0)])

    out = np.empty(len(ys))
    for j, y in enumerate(ys):
        target = y + lam[-1] - x0
        bridge = walk - (ss[:, None] / t) * (walk[-1] - target)
        gap = bridge + x0 - lam[:, None]
        alive = np.all(gap > 0.0, axis=0)
        log_surv = np.zeros(n_samples)
        # log1p(-1) = -inf is the right value when a pinned pair sits on
        # the frontier; silence only that divide warning
        with np.errstate(divide="ignore"):
            for k in range(n_time):
                prod = gap[k] * gap[k + 1]
                step = np.where(prod > 0.0,
                                np.log1p(-np.exp(-2.0 * np.maximum(prod, 1e-300) / ds)),
                                -np.inf)
                log_surv = log_surv + np.where(alive, step, 0.0)
        kernel = _gauss(t, target)
        weights = np.where(alive, kernel * np.exp(log_surv), 0.0)
        out[j] = density.total_mass * float(np.mean(weights))
    return out


def blowup_criterion(density: InitialDensity, alpha: float) -> bool:
    """Sufficient condition for a finite-time frontier jump.

    Compares the barycenter of the initial profile against half the total
    drift the wall can exert.  True means the run must jump eventually;
    False decides nothing.
    """
    return density.mean() < 0.5 * alpha * density.total_mass


def nojump_criterion(density: InitialDensity, alpha: float) -> bool:
    """Sufficient condition ruling out any jump.

    A profile everywhere below the 1/alpha level keeps the absorbed mass
    near the wall strictly behind the atomic-advance threshold, so the
    cascade never triggers.  True rules jumps out; False decides nothing.
    """
    if alpha <= 0.0:
        return True
    return density.sup() < 1.0 / alpha
