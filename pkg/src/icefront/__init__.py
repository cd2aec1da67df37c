"""Particle and finite-difference solvers for a supercooled freezing front.

Two independent engines track the same non-decreasing frontier: a coupled
ensemble of absorbed Brownian particles whose deaths push the frontier
forward, and a moving-frame heat equation whose boundary gradient sets
the frontier speed.  Diagnostics classify the boundary regime, estimate
growth exponents, and verify conservation; oracles provide closed-form
and brute-force references for testing.
"""

__version__ = "0.1.0"

from .core import (
    Config,
    ConfigError,
    DensitySnapshot,
    EnsembleState,
    FrontierPath,
    GridSpec,
    InitialDensity,
    NoiseStreams,
    PiecewiseLinear,
    Regime,
    RegimeLabel,
    Triangular,
    TruncGaussian,
    Uniform,
    density_from_spec,
    density_to_spec,
    init_ensemble,
    load_config,
    parse_overrides,
    sample_initial,
    validate_config,
)
from .diagnostics import (
    DecayFit,
    HolderFit,
    check_decay,
    classify_regime,
    count_monotonicity_changes,
    detect_jumps,
    estimate_holder,
    lambda_dot_positive,
    mass_check,
)
from .frontier import (
    CascadeResult,
    cascade_iterate,
    cascade_scan,
    physical_jump_from_cdf,
    picard_frontier,
)
from .oracles import (
    blowup_criterion,
    bridge_density,
    nojump_criterion,
    reflection_bin_mass,
    reflection_density,
    reflection_survival,
)
from .particle import (
    ParticleRunResult,
    bridge_absorption,
    estimate_density,
    euler_step,
    run_particle,
)
from .pde import (
    FdStepResult,
    PdeRunResult,
    boundary_gradient,
    detect_pde_blowup,
    fd_step,
    resolve_pde_jump,
    run_pde,
)

__all__ = [
    "CascadeResult",
    "Config",
    "ConfigError",
    "DecayFit",
    "DensitySnapshot",
    "EnsembleState",
    "FdStepResult",
    "FrontierPath",
    "GridSpec",
    "HolderFit",
    "InitialDensity",
    "NoiseStreams",
    "ParticleRunResult",
    "PdeRunResult",
    "PiecewiseLinear",
    "Regime",
    "RegimeLabel",
    "Triangular",
    "TruncGaussian",
    "Uniform",
    "__version__",
    "blowup_criterion",
    "boundary_gradient",
    "bridge_absorption",
    "bridge_density",
    "cascade_iterate",
    "cascade_scan",
    "check_decay",
    "classify_regime",
    "count_monotonicity_changes",
    "density_from_spec",
    "density_to_spec",
    "detect_jumps",
    "detect_pde_blowup",
    "estimate_density",
    "estimate_holder",
    "euler_step",
    "fd_step",
    "init_ensemble",
    "lambda_dot_positive",
    "load_config",
    "mass_check",
    "nojump_criterion",
    "parse_overrides",
    "physical_jump_from_cdf",
    "picard_frontier",
    "reflection_bin_mass",
    "reflection_density",
    "reflection_survival",
    "resolve_pde_jump",
    "run_particle",
    "run_pde",
    "sample_initial",
    "validate_config",
]
