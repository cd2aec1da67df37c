"""Command-line front end.

Subcommands:

    simulate   particle run from a config file into a run directory
    pde        finite-difference run, same layout
    compare    sup-distance between two recorded frontiers
    classify   re-run regime diagnostics over a run directory
    oracle     closed-form criteria for a config, no simulation

Failures exit 2 with a one-line JSON object on stderr; compare exits 1
when the runs disagree beyond tolerance.  Everything written to disk goes
through runio, so equal configs with equal seeds give byte-equal files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

import numpy as np

from . import runio
from .core.config import load_config
from .core.types import Config, ConfigError
from .diagnostics import classify_regime, estimate_holder
from .oracles import blowup_criterion, nojump_criterion
from .particle import run_particle
from .pde import run_pde

__all__ = ["main"]


def _fail(message: str) -> int:
    sys.stderr.write(json.dumps({"error": message}, sort_keys=True) + "\n")
    return 2


def _load(args) -> Config:
    return load_config(args.config, overrides=args.set, seed=args.seed,
                       out_dir=args.out)


def _require_out(config: Config) -> str:
    if not config.out_dir:
        raise ConfigError("an output directory is required (--out or [output] dir)")
    return config.out_dir


def _regime_rows(snapshots, alpha: float, particle_mass: Optional[float]) -> list:
    return [(s.t, classify_regime(s, alpha, particle_mass=particle_mass))
            for s in snapshots]


def _cmd_simulate(args) -> int:
    config = _load(args)
    out_dir = _require_out(config)
    result = run_particle(config)
    rows = _regime_rows(result.snapshots, config.alpha,
                        result.final_state.particle_mass)
    runio.write_run(out_dir, config, result, regimes=rows)
    print(out_dir)
    return 0


def _cmd_pde(args) -> int:
    config = _load(args)
    out_dir = _require_out(config)
    result = run_pde(config)
    rows = _regime_rows(result.snapshots, config.alpha, None)
    runio.write_run(out_dir, config, result, regimes=rows)
    print(out_dir)
    return 0


def _cmd_compare(args) -> int:
    fa, _ = runio.read_frontier(args.run_a)
    fb, _ = runio.read_frontier(args.run_b)
    ha, hb = float(fa.times[-1]), float(fb.times[-1])
    if abs(ha - hb) > 1e-9 * max(1.0, ha, hb):
        raise ConfigError("horizons differ: %s vs %s" % (runio.fmt(ha), runio.fmt(hb)))
    grid = np.union1d(fa.times, fb.times)
    gap = np.abs(fa.value_at(grid) - fb.value_at(grid))
    sup = float(np.max(gap))
    report = {
        "sup_distance": sup,
        "t_at_sup": float(grid[int(np.argmax(gap))]),
        "tolerance": args.tolerance,
        "within": sup <= args.tolerance,
        "horizon": ha,
        "jumps_a": [[t, s] for t, s in fa.jumps],
        "jumps_b": [[t, s] for t, s in fb.jumps],
    }
    print(json.dumps(report, sort_keys=True, indent=2))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        runio.write_json(os.path.join(args.out, "compare.json"), report)
    return 0 if report["within"] else 1


def _holder_fit_payload(frontier, spacing: float) -> Optional[dict]:
    """Square-root growth fit right after the last jump (or the start)."""
    t0 = frontier.jumps[-1][0] + spacing if frontier.jumps else 0.0
    s_min = 4.0 * spacing
    s_max = (float(frontier.times[-1]) - t0) / 4.0
    if s_max < 4.0 * s_min:
        return None
    fit = estimate_holder(frontier, t0, window=(s_min, s_max))
    if fit is None:
        return None
    ss, s = [], s_min
    while s <= s_max * (1.0 + 1e-12):
        ss.append(s)
        s *= 2.0
    base = float(frontier.value_at(t0))
    points = [[float(s), float(frontier.value_at(t0 + s) - base)] for s in ss]
    return {
        "t": t0,
        "window": [fit.window[0], fit.window[1]],
        "exponent": fit.exponent,
        "constant": fit.constant,
        "r_squared": fit.r_squared,
        "points": points,
    }


def _cmd_classify(args) -> int:
    run_dir = args.run_dir
    if not os.path.isdir(run_dir):
        raise ConfigError("run directory not found: %s" % run_dir)
    snapshots = runio.read_snapshots(run_dir)
    if not snapshots:
        raise ConfigError("no snapshots in %s" % run_dir)
    manifest = runio.read_json(os.path.join(run_dir, "manifest.json"))
    summary = runio.read_json(os.path.join(run_dir, "summary.json"))
    alpha = float(manifest["config"]["alpha"])
    particle_mass = None
    if summary.get("engine") == "particle":
        particle_mass = (float(manifest["config"]["density"]["total_mass"])
                         / int(manifest["config"]["n_particles"]))
    rows = _regime_rows(snapshots, alpha, particle_mass)
    runio.write_regimes_csv(os.path.join(run_dir, "regimes.csv"), rows)

    frontier, _ = runio.read_frontier(run_dir)
    spacing = float(np.median(np.diff(frontier.times)))
    runio.write_json(os.path.join(run_dir, "fits.json"),
                     {"holder": _holder_fit_payload(frontier, spacing)})
    print(run_dir)
    return 0


def _cmd_oracle(args) -> int:
    config = _load(args)
    density = config.density
    payload = {
        "alpha": config.alpha,
        "total_mass": density.total_mass,
        "mean": density.mean(),
        "sup": density.sup(),
        "support_hi": density.support_hi(),
        "blowup_criterion": blowup_criterion(density, config.alpha),
        "nojump_criterion": nojump_criterion(density, config.alpha),
    }
    print(json.dumps(payload, sort_keys=True, indent=2))
    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        runio.write_json(os.path.join(config.out_dir, "oracle.json"), payload)
    return 0


def _add_config_flags(sub) -> None:
    sub.add_argument("--config", required=True, help="INI config file")
    sub.add_argument("--out", default=None, help="run output directory")
    sub.add_argument("--seed", type=int, default=None, help="override the seed")
    sub.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                     help="override one config value (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icefront",
        description="Supercooled freezing-front solvers and diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (("simulate", _cmd_simulate), ("pde", _cmd_pde),
                     ("oracle", _cmd_oracle)):
        p = sub.add_parser(name)
        _add_config_flags(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("compare")
    p.add_argument("run_a")
    p.add_argument("run_b")
    p.add_argument("--tolerance", type=float, default=0.02)
    p.add_argument("--out", default=None, help="directory for compare.json")
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("classify")
    p.add_argument("run_dir")
    p.set_defaults(fn=_cmd_classify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        return _fail(str(exc))
    except FileNotFoundError as exc:
        return _fail("file not found: %s" % exc.filename)
    except (OSError, ValueError, KeyError) as exc:
        return _fail("%s: %s" % (type(exc).__name__, exc))


if __name__ == "__main__":
    sys.exit(main())
