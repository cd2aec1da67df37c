"""Shared value types for the solvers and diagnostics."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .density import InitialDensity


class ConfigError(ValueError):
    """Raised when a run configuration violates an invariant."""


@dataclass(frozen=True)
class GridSpec:
    x_max: float = 20.0
    dx: float = 1e-3


@dataclass(frozen=True)
class Config:
    """Complete description of one run.

    ``alpha`` is the frontier feedback strength: each absorbed unit of
    probability mass advances the frontier by alpha.  ``n_threads`` is
    declared for bookkeeping; results never depend on it because all noise
    is counter-keyed per (seed, step, particle slot).
    """

    density: InitialDensity
    alpha: float = 1.0
    horizon: float = 1.0
    dt: float = 1e-3
    n_particles: int = 10_000
    grid: GridSpec = field(default_factory=GridSpec)
    seed: int = 0
    bridge_correction: bool = True
    picard_mode: bool = False
    picard_iters: int = 64
    snapshot_times: tuple = ()
    out_dir: Optional[str] = None
    n_threads: int = 1


def validate_config(config: Config) -> Config:
    """Reject configs that violate documented invariants.

    Returns the config unchanged so call sites can chain it.
    """
    if not config.alpha >= 0.0:
        raise ConfigError("alpha must be >= 0")
    if not config.horizon > 0.0:
        raise ConfigError("horizon must be > 0")
    if not config.dt > 0.0:
        raise ConfigError("dt must be > 0")
    if not config.dt < config.horizon:
        raise ConfigError("dt < horizon is required")
    if config.n_particles < 1:
        raise ConfigError("n_particles must be >= 1")
    if not 0 <= config.seed < 2**64:
        raise ConfigError("seed must fit in uint64")
    if config.grid.dx <= 0.0 or config.grid.x_max <= 0.0:
        raise ConfigError("grid spacing and extent must be > 0")
    if config.grid.x_max < 10.0 * config.density.support_hi():
        raise ConfigError(
            "x_max must be at least 10x the initial support bound "
            f"({10.0 * config.density.support_hi():g})"
        )
    if config.picard_iters < 1:
        raise ConfigError("picard_iters must be >= 1")
    if config.n_threads < 1:
        raise ConfigError("n_threads must be >= 1")
    times = tuple(config.snapshot_times)
    if any(t < 0.0 or t > config.horizon for t in times):
        raise ConfigError("snapshot times must lie in [0, horizon]")
    if list(times) != sorted(times):
        raise ConfigError("snapshot times must be sorted")
    return config


@dataclass
class EnsembleState:
    """Particle ensemble at one step boundary.

    ``lam`` counts only absorption since the run start, so
    lam / alpha + particle_mass * alive_count == total_mass holds exactly
    (up to a few ulp) at every step.  Absorbed particles keep their slots:
    noise lanes stay aligned across runs and alpha values.
    """

    t: float
    lam: float
    positions: np.ndarray
    alive: np.ndarray
    absorption_time: np.ndarray
    particle_mass: float
    total_mass: float
    alpha: float
    step_index: int = 0

    @property
    def alive_count(self) -> int:
        return int(np.count_nonzero(self.alive))

    @property
    def alive_mass(self) -> float:
        return self.particle_mass * self.alive_count

    def copy(self) -> "EnsembleState":
        return EnsembleState(
            t=self.t,
            lam=self.lam,
            positions=self.positions.copy(),
            alive=self.alive.copy(),
            absorption_time=self.absorption_time.copy(),
            particle_mass=self.particle_mass,
            total_mass=self.total_mass,
            alpha=self.alpha,
            step_index=self.step_index,
        )


@dataclass
class FrontierPath:
    """Frontier position sampled at step boundaries, right-continuous.

    ``values[0]`` carries alpha * (1 - total_mass) when the run starts from
    a sub-probability density: the missing mass is treated as absorbed
    before time zero.
    """

    times: np.ndarray
    values: np.ndarray
    jumps: list = field(default_factory=list)

    def value_at(self, t) -> np.ndarray:
        """Previous-value interpolation (cadlag convention)."""
        idx = np.searchsorted(self.times, np.asarray(t, dtype=float), side="right") - 1
        return self.values[np.clip(idx, 0, len(self.values) - 1)]

    def increments(self) -> np.ndarray:
        return np.diff(self.values)


@dataclass
class DensitySnapshot:
    """Density profile in the moving frame at one time."""

    t: float
    dx: float
    values: np.ndarray

    @property
    def xs(self) -> np.ndarray:
        return self.dx * np.arange(len(self.values))

    def trapezoid_mass(self) -> float:
        return float(np.trapezoid(self.values, dx=self.dx))


class Regime(enum.Enum):
    DIFFERENTIABLE = "Differentiable"
    HOELDER = "Hoelder"
    JUMP = "Jump"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class RegimeLabel:
    regime: Regime
    rho_at_zero: float
    slope_ratio: float
    window: float
