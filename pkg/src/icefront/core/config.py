"""Config file loading.

Flat INI sections, one per concern:

    [run]       alpha, horizon, dt, seed, n_threads
    [grid]      x_max, dx
    [particle]  n_particles, bridge_correction, picard_mode, picard_iters
    [density]   kind, params, total_mass, knots (piecewise_linear only)
    [snapshots] times
    [output]    dir

CLI flags override file values via dotted keys, e.g. ``run.dt=1e-4``.
"""

from __future__ import annotations

import configparser
from pathlib import Path
from typing import Iterable, Optional

from .density import density_from_spec
from .types import Config, ConfigError, GridSpec, validate_config

_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _to_bool(raw: str, key: str) -> bool:
    v = raw.strip().lower()
    if v in _BOOL_TRUE:
        return True
    if v in _BOOL_FALSE:
        return False
    raise ConfigError(f"{key} must be a boolean, got {raw!r}")


def _floats(raw: str) -> list:
    return [float(tok) for tok in raw.replace(",", " ").split()]


def _knots(raw: str) -> list:
    out = []
    for tok in raw.replace(",", " ").split():
        if ":" not in tok:
            raise ConfigError(f"knot {tok!r} must look like x:y")
        x, y = tok.split(":", 1)
        out.append((float(x), float(y)))
    return out


def parse_overrides(pairs: Iterable[str]) -> dict:
    """Turn ``section.key=value`` strings into a nested dict."""
    out: dict = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"override {pair!r} must look like section.key=value")
        dotted, value = pair.split("=", 1)
        if "." not in dotted:
            raise ConfigError(f"override key {dotted!r} must look like section.key")
        section, key = dotted.split(".", 1)
        out.setdefault(section.strip(), {})[key.strip()] = value.strip()
    return out


def load_config(path: Optional[str] = None, overrides=None,
                seed: Optional[int] = None, out_dir: Optional[str] = None) -> Config:
    """Read, override, and validate a run configuration.

    ``overrides`` may be the parsed nested dict or the raw
    ``section.key=value`` strings straight from the command line.
    """
    parser = configparser.ConfigParser()
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        parser.read(p)
    if overrides is not None and not isinstance(overrides, dict):
        overrides = parse_overrides(overrides)
    for section, kv in (overrides or {}).items():
        if not parser.has_section(section):
            parser.add_section(section)
        for key, value in kv.items():
            parser.set(section, key, value)

    def get(section: str, key: str, default: str) -> str:
        return parser.get(section, key, fallback=default)

    if not parser.has_section("density"):
        raise ConfigError("config must declare a [density] section")
    kind = get("density", "kind", "")
    if not kind:
        raise ConfigError("density.kind is required")
    try:
        density = density_from_spec(
            kind,
            _floats(get("density", "params", "")),
            total_mass=float(get("density", "total_mass", "1.0")),
            knots=_knots(get("density", "knots", "")) if parser.has_option("density", "knots") else None,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    try:
        config = Config(
            density=density,
            alpha=float(get("run", "alpha", "1.0")),
            horizon=float(get("run", "horizon", "1.0")),
            dt=float(get("run", "dt", "1e-3")),
            n_particles=int(float(get("particle", "n_particles", "10000"))),
            grid=GridSpec(
                x_max=float(get("grid", "x_max", "20.0")),
                dx=float(get("grid", "dx", "1e-3")),
            ),
            seed=int(float(get("run", "seed", "0"))) if seed is None else int(seed),
            bridge_correction=_to_bool(get("particle", "bridge_correction", "true"),
                                       "particle.bridge_correction"),
            picard_mode=_to_bool(get("particle", "picard_mode", "false"),
                                 "particle.picard_mode"),
            picard_iters=int(float(get("particle", "picard_iters", "64"))),
            snapshot_times=tuple(_floats(get("snapshots", "times", ""))),
            out_dir=out_dir if out_dir is not None else (get("output", "dir", "") or None),
            n_threads=int(float(get("run", "n_threads", "1"))),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return validate_config(config)
