"""Run-directory layout and bit-stable serialization.

One directory per run, fixed file names:

    frontier.csv    t,lambda,alive_mass,d_lambda   one row per time step
    snapshot_<t>.csv x,p                           one file per snapshot time
    regimes.csv     t,regime,rho0,slope_ratio      one row per snapshot
    pde_steps.csv   t,lambda_dot,inner_iters,blowup_flag   (PDE runs only)
    summary.json    engine, final values, jump list
    manifest.json   resolved config, its sha256, library versions

Every float is written with shortest round-trip decimal formatting, so
re-parsing a file reproduces the in-memory values exactly and identical
runs produce byte-identical files.  JSON is emitted with sorted keys for
the same reason.  No timestamps anywhere: manifests of equal runs hash
equal.
"""

from __future__ import annotations

import hashlib
import json
import os
import platform
import re
from typing import Optional

import numpy as np
import scipy

from . import __version__ as _pkg_version
from .core.density import density_to_spec
from .core.types import Config, DensitySnapshot, FrontierPath

__all__ = [
    "fmt",
    "config_to_dict",
    "config_sha256",
    "write_run",
    "write_regimes_csv",
    "write_json",
    "read_frontier",
    "read_snapshots",
    "read_json",
    "snapshot_filename",
]

_SNAPSHOT_RE = re.compile(r"^snapshot_(.+)\.csv$")


def fmt(x) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(x))


def config_to_dict(config: Config) -> dict:
    """Resolved configuration as plain JSON-ready data."""
    return {
        "alpha": float(config.alpha),
        "horizon": float(config.horizon),
        "dt": float(config.dt),
        "n_particles": int(config.n_particles),
        "grid": {"x_max": float(config.grid.x_max), "dx": float(config.grid.dx)},
        "seed": int(config.seed),
        "bridge_correction": bool(config.bridge_correction),
        "picard_mode": bool(config.picard_mode),
        "picard_iters": int(config.picard_iters),
        "snapshot_times": [float(t) for t in config.snapshot_times],
        "n_threads": int(config.n_threads),
        "density": density_to_spec(config.density),
    }


def config_sha256(config: Config) -> str:
    payload = json.dumps(config_to_dict(config), sort_keys=True,
                         separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def snapshot_filename(t: float) -> str:
    return "snapshot_%s.csv" % fmt(t)


def _write_csv(path: str, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _write_frontier_csv(path: str, frontier: FrontierPath,
                        alive_mass: np.ndarray) -> None:
    d_lambda = np.concatenate([[0.0], np.diff(frontier.values)])
    rows = (
        (fmt(t), fmt(v), fmt(a), fmt(d))
        for t, v, a, d in zip(frontier.times, frontier.values, alive_mass, d_lambda)
    )
    _write_csv(path, "t,lambda,alive_mass,d_lambda", rows)


def _write_snapshot_csv(path: str, snapshot: DensitySnapshot) -> None:
    rows = ((fmt(x), fmt(p)) for x, p in zip(snapshot.xs, snapshot.values))
    _write_csv(path, "x,p", rows)


def write_regimes_csv(path: str, rows) -> None:
    """rows: iterable of (t, RegimeLabel)."""
    out = (
        (fmt(t), label.regime.name.lower(), fmt(label.rho_at_zero),
         fmt(label.slope_ratio))
        for t, label in rows
    )
    _write_csv(path, "t,regime,rho0,slope_ratio", out)


def _write_pde_steps_csv(path: str, steps) -> None:
    rows = (
        (fmt(t), fmt(ld), str(int(it)), str(int(bool(blow))))
        for t, ld, it, blow in steps
    )
    _write_csv(path, "t,lambda_dot,inner_iters,blowup_flag", rows)


def _write_manifest(path: str, config: Config) -> None:
    write_json(path, {
        "config": config_to_dict(config),
        "config_sha256": config_sha256(config),
        "seed": int(config.seed),
        "versions": {
            "icefront": _pkg_version,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    })


def write_run(out_dir: str, config: Config, result, regimes=None) -> None:
    """Emit the full directory for a particle or PDE run result.

    ``result`` is ParticleRunResult or PdeRunResult; the two differ only
    in the optional per-step diagnostic CSV.  ``regimes`` is the list of
    (t, RegimeLabel) rows for regimes.csv; None writes the header only.
    """
    os.makedirs(out_dir, exist_ok=True)
    _write_frontier_csv(os.path.join(out_dir, "frontier.csv"),
                        result.frontier, result.alive_mass)
    for snap in result.snapshots:
        _write_snapshot_csv(os.path.join(out_dir, snapshot_filename(snap.t)), snap)
    write_regimes_csv(os.path.join(out_dir, "regimes.csv"), regimes or [])
    steps = getattr(result, "steps", None)
    if steps is not None:
        _write_pde_steps_csv(os.path.join(out_dir, "pde_steps.csv"), steps)
    # timing is useful interactively but would break byte-stable reruns
    summary = {k: v for k, v in result.summary.items() if k != "wall_time_s"}
    write_json(os.path.join(out_dir, "summary.json"), summary)
    _write_manifest(os.path.join(out_dir, "manifest.json"), config)


def read_frontier(run_dir: str) -> tuple:
    """Load frontier.csv back as (FrontierPath, alive_mass array).

    Jump markers are restored from summary.json when present.
    """
    path = os.path.join(run_dir, "frontier.csv")
    data = np.genfromtxt(path, delimiter=",", names=True)
    data = np.atleast_1d(data)
    jumps = []
    summary_path = os.path.join(run_dir, "summary.json")
    if os.path.exists(summary_path):
        summary = read_json(summary_path)
        jumps = [(row["t"], row["size"]) for row in summary.get("jumps", [])]
    frontier = FrontierPath(times=np.asarray(data["t"], dtype=float),
                            values=np.asarray(data["lambda"], dtype=float),
                            jumps=jumps)
    return frontier, np.asarray(data["alive_mass"], dtype=float)


def read_snapshots(run_dir: str) -> list:
    """All snapshot CSVs in a run directory, sorted by time."""
    out = []
    for name in os.listdir(run_dir):
        m = _SNAPSHOT_RE.match(name)
        if not m:
            continue
        t = float(m.group(1))
        data = np.genfromtxt(os.path.join(run_dir, name), delimiter=",",
                             names=True)
        data = np.atleast_1d(data)
        xs = np.asarray(data["x"], dtype=float)
        dx = float(xs[1] - xs[0]) if len(xs) > 1 else 1.0
        out.append(DensitySnapshot(t=t, dx=dx,
                                   values=np.asarray(data["p"], dtype=float)))
    out.sort(key=lambda s: s.t)
    return out
