"""Post-hoc diagnostics on frontier paths and density snapshots.

The regime classifier mirrors the boundary trichotomy: a boundary density
at the 1/alpha threshold forces an atomic advance (Jump); a vanishing
boundary density with bounded x^-1 * rho keeps the frontier continuously
differentiable (Differentiable); in between the frontier is only
square-root regular (Hoelder).  All estimates come from a local-linear
fit near the wall, so labels carry margins and an explicit inconclusive
outcome instead of hard claims.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core.types import DensitySnapshot, FrontierPath, Regime, RegimeLabel

__all__ = [
    "HolderFit",
    "DecayFit",
    "classify_regime",
    "estimate_holder",
    "detect_jumps",
    "check_decay",
    "lambda_dot_positive",
    "count_monotonicity_changes",
    "mass_check",
]

JUMP_MARGIN = 0.05      # fraction of 1/alpha subtracted from the jump threshold
SLOPE_GROWTH_CAP = 2.5  # scale-free cap separating bounded from diverging x^-1*rho
MIN_GRID_POINTS = 8
MIN_PARTICLES = 200


def _window_nodes(snapshot: DensitySnapshot, window: Optional[float],
                  particle_mass: Optional[float]) -> tuple:
    """Pick the near-wall fit window (0, w].

    Defaults to 10 grid cells, widened to roughly 20 interparticle
    spacings when the snapshot came from a particle run, so the fit sees
    a stable number of particles.
    """
    dx = snapshot.dx
    v = snapshot.values
    w = window if window is not None else 10.0 * dx
    if window is None and particle_mass is not None:
        for _ in range(3):
            k = max(2, int(round(w / dx)))
            k = min(k, len(v) - 1)
            rho_bar = max(float(np.mean(v[1:k + 1])), 1e-300)
            w = max(10.0 * dx, 20.0 * particle_mass / rho_bar)
    k = min(int(round(w / dx)), len(v) - 1)
    return k, k * dx


def classify_regime(snapshot: DensitySnapshot, alpha: float,
                    jump_margin: float = JUMP_MARGIN,
                    slope_cap: float = SLOPE_GROWTH_CAP,
                    window: Optional[float] = None,
                    particle_mass: Optional[float] = None) -> RegimeLabel:
    """Label the boundary regime of one snapshot.

    The boundary density estimate is the intercept of a local-linear fit
    on (0, w].  The bounded-vs-diverging call on x^-1 * rho compares its
    largest fitted value against its value at the window edge, a ratio
    that is invariant under rescaling rho and 1/alpha together.
    """
    k, w = _window_nodes(snapshot, window, particle_mass)
    if k < MIN_GRID_POINTS:
        return RegimeLabel(Regime.INCONCLUSIVE, float("nan"), float("nan"), w)
    xs = snapshot.dx * np.arange(1, k + 1)
    vs = snapshot.values[1:k + 1]
    if particle_mass is not None:
        n_window = float(np.trapezoid(vs, xs)) / particle_mass
        if n_window < MIN_PARTICLES:
            return RegimeLabel(Regime.INCONCLUSIVE, float("nan"), float("nan"), w)

    slope, intercept = np.polyfit(xs, vs, 1)
    rho0 = max(float(intercept), 0.0)
    fitted = np.maximum(intercept + slope * xs, 0.0)
    slope_ratio = float(np.max(fitted / xs))

    if alpha > 0.0 and rho0 >= (1.0 - jump_margin) / alpha:
        return RegimeLabel(Regime.JUMP, rho0, slope_ratio, w)

    edge = max(float(fitted[-1]), 1e-300)
    growth = slope_ratio * w / edge
    if growth > slope_cap:
        return RegimeLabel(Regime.HOELDER, rho0, slope_ratio, w)
    return RegimeLabel(Regime.DIFFERENTIABLE, rho0, slope_ratio, w)


@dataclass(frozen=True)
class HolderFit:
    exponent: float
    constant: float
    r_squared: float
    window: tuple


def estimate_holder(frontier: FrontierPath, t: float,
                    window: tuple = (1e-4, 1e-2)) -> Optional[HolderFit]:
    """Fit the growth exponent of the frontier after time t.

    Regresses log(increment) on log(s) over dyadic offsets s in the
    window.  Returns None when any increment is nonpositive (no growth to
    fit) or fewer than three dyadic points fit inside the window.
    """
    s_min, s_max = window
    if not 0.0 < s_min < s_max:
        raise ValueError("window must satisfy 0 < s_min < s_max")
    ss = []
    s = s_min
    while s <= s_max * (1.0 + 1e-12):
        ss.append(s)
        s *= 2.0
    if len(ss) < 3:
        return None
    ss = np.array(ss)
    base = float(frontier.value_at(t))
    increments = frontier.value_at(t + ss) - base
    if np.any(increments <= 0.0):
        return None
    logs, logd = np.log(ss), np.log(increments)
    slope, intercept = np.polyfit(logs, logd, 1)
    pred = intercept + slope * logs
    ss_res = float(np.sum((logd - pred) ** 2))
    ss_tot = float(np.sum((logd - np.mean(logd)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return HolderFit(float(slope), float(np.exp(intercept)), r2, (s_min, s_max))


def detect_jumps(frontier: FrontierPath, dt: Optional[float] = None,
                 k_sigma: float = 8.0, floor: float = 0.0) -> list:
    """Flag outlier frontier increments and merge runs into jumps.

    An increment is flagged when it exceeds both the robust outlier
    threshold (median + k_sigma * scaled MAD) and the absolute floor.
    Adjacent flagged steps merge into one jump timed at the left edge of
    the first flagged step.  Pure function of the path: idempotent.

    On sparse particle paths most increments are exactly 0, so median
    and MAD both degenerate to 0 and the robust threshold alone would
    flag every single-particle absorption.  Callers classifying
    macroscopic jumps should set ``floor`` to the mass scale they care
    about (e.g. a few percent of alpha times total mass).
    """
    d = frontier.increments()
    if len(d) == 0:
        return []
    if dt is None:
        dt = float(np.median(np.diff(frontier.times)))
    med = float(np.median(d))
    mad = 1.4826 * float(np.median(np.abs(d - med)))
    flagged = (d > med + k_sigma * mad) & (d > floor)
    out = []
    idx = np.flatnonzero(flagged)
    i = 0
    while i < len(idx):
        j = i
        while (j + 1 < len(idx) and idx[j + 1] == idx[j] + 1
               and frontier.times[idx[j + 1]] - frontier.times[idx[j]] <= 1.5 * dt):
            j += 1
        group = idx[i:j + 1]
        out.append((float(frontier.times[group[0]]), float(np.sum(d[group]))))
        i = j + 1
    return out


@dataclass(frozen=True)
class DecayFit:
    mode: str
    constant: float
    exponent: Optional[float]
    exceedances: list


def check_decay(snapshot: DensitySnapshot, mode: str = "linear",
                window: Optional[float] = None, slack: float = 0.10) -> DecayFit:
    """Envelope-fit a near-wall decay bound and report where it breaks.

    ``linear`` checks p(x) <= C * min(x, 1); ``holder`` fits an exponent
    chi by log-log regression on the window first.  C is the envelope
    constant on the window; exceedances are full-grid indices where the
    bound is beaten by more than ``slack``.
    """
    if mode not in ("linear", "holder"):
        raise ValueError("mode must be 'linear' or 'holder'")
    xs = snapshot.xs
    v = snapshot.values
    dx = snapshot.dx
    w = window if window is not None else max(20.0 * dx, float(xs[-1]) / 20.0)
    k = min(max(2, int(round(w / dx))), len(v) - 1)

    if mode == "linear":
        chi = None
        shape = np.minimum(xs, 1.0)
    else:
        sel = v[1:k + 1] > 0.0
        if int(np.count_nonzero(sel)) < 3:
            return DecayFit(mode, float("nan"), None, [])
        lx = np.log(xs[1:k + 1][sel])
        lv = np.log(v[1:k + 1][sel])
        chi = float(np.polyfit(lx, lv, 1)[0])
        shape = np.zeros_like(xs)
        shape[1:] = xs[1:] ** chi

    window_shape = shape[1:k + 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(window_shape > 0.0, v[1:k + 1] / window_shape, 0.0)
    constant = float(np.max(ratios)) if len(ratios) else float("nan")
    bound = constant * shape
    exceed = np.flatnonzero(v[1:] > (1.0 + slack) * bound[1:]) + 1
    return DecayFit(mode, constant, chi, exceed.tolist())


def lambda_dot_positive(frontier: FrontierPath, window: tuple, h: float) -> tuple:
    """Central-difference positivity of the frontier speed on a window.

    Evaluates (value(t + h) - value(t - h)) / (2 h) at every recorded time
    in [a + h, b - h] and returns (all positive, smallest estimate).  An
    empty evaluation set is vacuously positive with +inf.
    """
    a, b = window
    spacing = float(np.median(np.diff(frontier.times)))
    if h < 2.0 * spacing:
        raise ValueError("h must be at least twice the recording step")
    sel = (frontier.times >= a + h) & (frontier.times <= b - h)
    ts = frontier.times[sel]
    if len(ts) == 0:
        return True, float("inf")
    rates = (frontier.value_at(ts + h) - frontier.value_at(ts - h)) / (2.0 * h)
    return bool(np.all(rates > 0.0)), float(np.min(rates))


def count_monotonicity_changes(snapshot: DensitySnapshot, bandwidth: float) -> int:
    """Sign changes of the smoothed profile's slope.

    Gaussian smoothing at the given bandwidth (in x units) with reflected
    ends.  A unimodal bump gives 1; a monotone profile gives 0.
    """
    if bandwidth < 0.0:
        raise ValueError("bandwidth must be >= 0")
    v = snapshot.values
    sigma = bandwidth / snapshot.dx
    if sigma >= 0.5 and len(v) > 2:
        # 6 sigma support: a 3 sigma cutoff leaks grid-frequency noise
        # at ~1e-3 of its input amplitude
        half = min(int(np.ceil(6.0 * sigma)), len(v) - 1)
        kernel = np.exp(-0.5 * (np.arange(-half, half + 1) / sigma) ** 2)
        padded = np.pad(v, half, mode="reflect")
        v = np.convolve(padded, kernel, mode="valid") / kernel.sum()
    d = np.diff(v)
    # dead-zone slopes far below the steepest one so residual dither in
    # flat stretches does not register
    tol = 1e-6 * float(np.max(np.abs(d), initial=0.0))
    signs = np.sign(d[np.abs(d) > tol])
    if len(signs) < 2:
        return 0
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def mass_check(lam: float, alive_mass: float, alpha: float, total_mass: float) -> float:
    """Residual of the conservation identity lam / alpha + alive = total.

    ``lam`` is absorption since the run start (no sub-probability offset).
    """
    if alpha <= 0.0:
        raise ValueError("the conservation identity needs alpha > 0")
    return abs(lam / alpha + alive_mass - total_mass)
