"""Core types, densities, noise streams, and config handling."""

from .config import load_config, parse_overrides
from .density import (
    InitialDensity,
    PiecewiseLinear,
    Triangular,
    TruncGaussian,
    Uniform,
    density_from_spec,
    density_to_spec,
)
from .ensemble import init_ensemble, sample_initial
from .streams import NoiseStreams
from .types import (
    Config,
    ConfigError,
    DensitySnapshot,
    EnsembleState,
    FrontierPath,
    GridSpec,
    Regime,
    RegimeLabel,
    validate_config,
)

__all__ = [
    "Config",
    "ConfigError",
    "DensitySnapshot",
    "EnsembleState",
    "FrontierPath",
    "GridSpec",
    "InitialDensity",
    "NoiseStreams",
    "PiecewiseLinear",
    "Regime",
    "RegimeLabel",
    "Triangular",
    "TruncGaussian",
    "Uniform",
    "density_from_spec",
    "density_to_spec",
    "init_ensemble",
    "load_config",
    "parse_overrides",
    "sample_initial",
    "validate_config",
]
