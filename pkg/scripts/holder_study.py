"""Grid-refinement study for the square-root growth regression baseline.

Fixes the physical fixture (cube-root ramp over [0, 0.01] into a 0.9
plateau, unit mass, alpha = 1) and refines dx and dt together.  The
fitted exponent at the finest level is frozen into the acceptance suite.
"""
import time

import numpy as np

from icefront import Config, GridSpec, PiecewiseLinear, estimate_holder, run_pde

RAMP_END = 0.01
PLATEAU = 0.9


def fixture(dx):
    c = PLATEAU / RAMP_END ** (1.0 / 3.0)
    n_ramp = int(round(RAMP_END / dx))
    ramp_x = np.arange(n_ramp + 1) * dx
    ramp_y = np.minimum(PLATEAU, c * ramp_x ** (1.0 / 3.0))
    raw = np.trapezoid(ramp_y, ramp_x)
    support_end = RAMP_END + (1.0 - raw) / PLATEAU
    knots = [(float(x), float(y)) for x, y in zip(ramp_x, ramp_y)]
    knots.append((float(support_end), PLATEAU))
    return PiecewiseLinear(1.0, tuple(knots))


def main():
    for dx, dt in ((1e-3, 1e-5), (5e-4, 5e-6), (2.5e-4, 2.5e-6)):
        t0 = time.perf_counter()
        config = Config(alpha=1.0, horizon=0.0104, dt=dt, n_particles=1,
                        grid=GridSpec(12.0, dx), seed=0, density=fixture(dx),
                        snapshot_times=())
        result = run_pde(config)
        f = result.frontier
        fit = estimate_holder(f, 0.0, window=(1e-4, 1e-2))
        ss = 1e-4 * 2.0 ** np.arange(7)
        lam = np.array([f.value_at(s) for s in ss])
        local = np.log2(lam[1:] / lam[:-1])
        wall = time.perf_counter() - t0
        print(f"dx={dx:g} dt={dt:g}  exponent={fit.exponent:.4f} "
              f"constant={fit.constant:.4f} r2={fit.r_squared:.6f}  "
              f"[{wall:.0f}s]", flush=True)
        print(f"   lam(1e-4)={lam[0]:.6f} lam(6.4e-3)={lam[-1]:.6f} "
              f"local={np.round(local, 4)}", flush=True)


if __name__ == "__main__":
    main()
