"""Initial ensemble construction."""

from __future__ import annotations

import numpy as np

from .density import InitialDensity
from .streams import NoiseStreams
from .types import Config, EnsembleState


def sample_initial(density: InitialDensity, n: int, streams: NoiseStreams) -> np.ndarray:
    """Draw n starting positions by inverse CDF on lane-keyed uniforms."""
    if n < 1:
        raise ValueError("n must be >= 1")
    u = streams.initial_uniforms(n)
    x = np.asarray(density.quantile(u), dtype=float)
    # Quantile arithmetic can undershoot 0 by an ulp at the left edge.
    return np.maximum(x, 0.0)


def init_ensemble(config: Config, streams: NoiseStreams) -> EnsembleState:
    """Sample positions and set up exact mass bookkeeping.

    Particles landing exactly on the frontier (position 0, possible for
    degenerate spike densities) count as absorbed at t = 0.
    """
    n = config.n_particles
    positions = sample_initial(config.density, n, streams)
    alive = positions > 0.0
    absorption_time = np.where(alive, np.inf, 0.0)
    particle_mass = config.density.total_mass / n
    dead = n - int(np.count_nonzero(alive))
    return EnsembleState(
        t=0.0,
        lam=config.alpha * particle_mass * dead,
        positions=np.where(alive, positions, 0.0),
        alive=alive,
        absorption_time=absorption_time,
        particle_mass=particle_mass,
        total_mass=config.density.total_mass,
        alpha=config.alpha,
        step_index=0,
    )
