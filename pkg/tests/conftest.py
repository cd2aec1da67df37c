import numpy as np
import pytest

from icefront import Config, DensitySnapshot, GridSpec, Regime, Uniform


@pytest.fixture
def quick_config():
    """Small particle config that runs in milliseconds."""
    def make(**kw):
        base = dict(
            density=Uniform(1.0, 0.0, 1.0),
            alpha=0.5,
            horizon=0.02,
            dt=1e-3,
            n_particles=500,
            grid=GridSpec(x_max=10.0, dx=1e-2),
            seed=11,
        )
        base.update(kw)
        return Config(**base)
    return make


@pytest.fixture
def write_ini(tmp_path):
    """Drop a minimal INI config into tmp_path and return its path."""
    def make(name="run.ini", **kw):
        text = [
            "[run]",
            "alpha = %s" % kw.get("alpha", 0.5),
            "horizon = %s" % kw.get("horizon", 0.01),
            "dt = %s" % kw.get("dt", 0.001),
            "seed = %s" % kw.get("seed", 3),
            "[grid]",
            "x_max = %s" % kw.get("x_max", 10.0),
            "dx = %s" % kw.get("dx", 0.01),
            "[particle]",
            "n_particles = %s" % kw.get("n_particles", 400),
            "[density]",
            "kind = %s" % kw.get("kind", "uniform"),
            "params = %s" % kw.get("params", "0.0 1.0"),
            "[snapshots]",
            "times = %s" % kw.get("times", "0.0 0.01"),
        ]
        path = tmp_path / name
        path.write_text("\n".join(text) + "\n", encoding="utf-8")
        return str(path)
    return make


def regime_fixtures():
    """Nine synthetic boundary profiles, three per regime.

    Each entry is (name, snapshot, alpha, expected regime).  Profiles are
    exact functions on a fine grid, so classification is deterministic.
    """
    dx = 1e-3
    xs = dx * np.arange(101)

    def snap(values):
        return DensitySnapshot(t=0.0, dx=dx, values=np.asarray(values, dtype=float))

    return [
        ("linear", snap(xs), 1.0, Regime.DIFFERENTIABLE),
        ("steep-linear", snap(2.5 * xs), 0.8, Regime.DIFFERENTIABLE),
        ("quadratic", snap(40.0 * xs ** 2), 1.0, Regime.DIFFERENTIABLE),
        ("sqrt", snap(3.0 * np.sqrt(xs)), 1.0, Regime.HOELDER),
        ("shifted-linear", snap(0.5 + xs), 1.0, Regime.HOELDER),
        ("flat-subcritical", snap(np.full(101, 0.8)), 1.0, Regime.HOELDER),
        ("flat-supercritical", snap(np.full(101, 1.2)), 1.0, Regime.JUMP),
        ("shifted-linear-strong", snap(0.5 + xs), 2.0, Regime.JUMP),
        ("steep-drop", snap(np.maximum(2.0 - 10.0 * xs, 0.0)), 1.0, Regime.JUMP),
    ]


def brute_force_cascade(positions, alpha, particle_mass):
    """Reference cascade: absorb-and-recheck until nothing moves.

    Deliberately naive (O(m^2)); the production implementations are
    checked against this, not against each other alone.
    """
    pos = list(map(float, positions))
    absorbed = [False] * len(pos)
    while True:
        d = alpha * particle_mass * sum(absorbed)
        grabbed = False
        for i, x in enumerate(pos):
            if not absorbed[i] and x <= d:
                absorbed[i] = True
                grabbed = True
        if not grabbed:
            return alpha * particle_mass * sum(absorbed), sum(absorbed)
