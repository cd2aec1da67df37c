"""Initial density presets.

A density is a nonnegative, bounded profile supported in [0, inf) whose
integral is ``total_mass`` (at most 1; strictly less means a sub-probability
start).  Evaluation is right-continuous at discontinuities.  Sampling is by
inverse CDF on counter-based uniforms, so samples are deterministic per
(seed, lane).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri

__all__ = [
    "InitialDensity",
    "Uniform",
    "Triangular",
    "TruncGaussian",
    "PiecewiseLinear",
    "density_from_spec",
    "density_to_spec",
]

# Effective support cutoff for the truncated Gaussian, in sigmas.
_GAUSS_TAIL_SIGMAS = 8.0


@dataclass(frozen=True)
class InitialDensity:
    """Base class; subclasses implement the analytic pieces."""

    total_mass: float = 1.0

    def _check(self) -> None:
        if not 0.0 < self.total_mass <= 1.0:
            raise ValueError("total_mass must lie in (0, 1]")

    # Subclass API ---------------------------------------------------------

    def pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        """Mass of [0, x]; reaches total_mass, not 1, for sub-probability."""
        raise NotImplementedError

    def quantile(self, u):
        """Inverse of cdf/total_mass on (0, 1)."""
        raise NotImplementedError

    def mean(self) -> float:
        """Mean of the normalized distribution."""
        raise NotImplementedError

    def sup(self) -> float:
        """Supremum of the density."""
        raise NotImplementedError

    def support_hi(self) -> float:
        """Upper bound of the (effective) support."""
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform(InitialDensity):
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        self._check()
        if not 0.0 <= self.a < self.b:
            raise ValueError("uniform density needs 0 <= a < b")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        h = self.total_mass / (self.b - self.a)
        return np.where((x >= self.a) & (x < self.b), h, 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        t = np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0)
        return self.total_mass * t

    def quantile(self, u):
        return self.a + np.asarray(u, dtype=float) * (self.b - self.a)

    def mean(self) -> float:
        return 0.5 * (self.a + self.b)

    def sup(self) -> float:
        return self.total_mass / (self.b - self.a)

    def support_hi(self) -> float:
        return self.b


@dataclass(frozen=True)
class Triangular(InitialDensity):
    """Triangle over [a, c] with mode b."""

    a: float = 0.0
    b: float = 0.5
    c: float = 1.0

    def __post_init__(self):
        self._check()
        if not (0.0 <= self.a <= self.b <= self.c and self.a < self.c):
            raise ValueError("triangular density needs 0 <= a <= b <= c, a < c")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        a, b, c, m = self.a, self.b, self.c, self.total_mass
        peak = 2.0 * m / (c - a)
        up = peak * (x - a) / (b - a) if b > a else np.full_like(x, peak)
        down = peak * (c - x) / (c - b) if c > b else np.full_like(x, peak)
        out = np.where(x < b, up, down)
        return np.where((x >= a) & (x < c), out, 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        a, b, c, m = self.a, self.b, self.c, self.total_mass
        left = np.zeros_like(x)
        if b > a:
            left = m * (x - a) ** 2 / ((c - a) * (b - a))
        right = m * (1.0 - (c - x) ** 2 / ((c - a) * (c - b))) if c > b else np.full_like(x, m)
        out = np.where(x < b, left, right)
        return np.clip(np.where(x < a, 0.0, np.where(x >= c, m, out)), 0.0, m)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        a, b, c = self.a, self.b, self.c
        fb = (b - a) / (c - a)
        lo = a + np.sqrt(np.maximum(u, 0.0) * (c - a) * (b - a))
        hi = c - np.sqrt(np.maximum(1.0 - u, 0.0) * (c - a) * (c - b))
        return np.where(u < fb, lo, hi)

    def mean(self) -> float:
        return (self.a + self.b + self.c) / 3.0

    def sup(self) -> float:
        return 2.0 * self.total_mass / (self.c - self.a)

    def support_hi(self) -> float:
        return self.c


@dataclass(frozen=True)
class TruncGaussian(InitialDensity):
    """Gaussian(mu, sigma^2) conditioned on x >= 0, scaled to total_mass."""

    mu: float = 1.0
    sigma: float = 0.5

    def __post_init__(self):
        self._check()
        if self.sigma <= 0.0:
            raise ValueError("sigma must be > 0")

    def _z(self) -> float:
        # Mass the untruncated Gaussian leaves above 0.
        return float(ndtr(self.mu / self.sigma))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        z = (x - self.mu) / self.sigma
        val = np.exp(-0.5 * z * z) / (self.sigma * np.sqrt(2.0 * np.pi))
        return np.where(x >= 0.0, self.total_mass * val / self._z(), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        lo = ndtr(-self.mu / self.sigma)
        out = (ndtr((x - self.mu) / self.sigma) - lo) / (1.0 - lo)
        return self.total_mass * np.clip(np.where(x < 0.0, 0.0, out), 0.0, 1.0)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        lo = ndtr(-self.mu / self.sigma)
        q = self.mu + self.sigma * ndtri(lo + u * (1.0 - lo))
        return np.maximum(q, 0.0)

    def mean(self) -> float:
        r = self.mu / self.sigma
        phi = np.exp(-0.5 * r * r) / np.sqrt(2.0 * np.pi)
        return self.mu + self.sigma * phi / self._z()

    def sup(self) -> float:
        return float(self.pdf(max(self.mu, 0.0)))

    def support_hi(self) -> float:
        return self.mu + _GAUSS_TAIL_SIGMAS * self.sigma


@dataclass(frozen=True)
class PiecewiseLinear(InitialDensity):
    """Linear interpolation through knots, rescaled to total_mass.

    Knots give the shape only; the profile is scaled so its integral is
    exactly total_mass.  Duplicated x-knots encode a jump (evaluation takes
    the right value).
    """

    knots: tuple = field(default=((0.0, 1.0), (1.0, 1.0)))

    def __post_init__(self):
        self._check()
        xs = np.array([k[0] for k in self.knots], dtype=float)
        ys = np.array([k[1] for k in self.knots], dtype=float)
        if len(xs) < 2:
            raise ValueError("need at least two knots")
        if np.any(np.diff(xs) < 0.0):
            raise ValueError("knot abscissae must be non-decreasing")
        if xs[0] < 0.0:
            raise ValueError("knots must lie in [0, inf)")
        if np.any(ys < 0.0):
            raise ValueError("knot values must be nonnegative")
        raw = np.trapezoid(ys, xs)
        if raw <= 0.0:
            raise ValueError("knot shape has zero mass")
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_ys", ys * (self.total_mass / raw))
        # Cumulative mass at each knot, exact per-segment trapezoids.
        seg = np.diff(xs) * 0.5 * (self._ys[:-1] + self._ys[1:])
        object.__setattr__(self, "_cum", np.concatenate([[0.0], np.cumsum(seg)]))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self._xs, self._ys, left=0.0, right=0.0)
        return np.where(x >= self._xs[-1], 0.0, out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(self._xs, x, side="right") - 1, 0, len(self._xs) - 2)
        x0, x1 = self._xs[idx], self._xs[idx + 1]
        y0, y1 = self._ys[idx], self._ys[idx + 1]
        w = np.where(x1 > x0, x1 - x0, 1.0)
        s = np.clip(x - x0, 0.0, x1 - x0)
        within = y0 * s + 0.5 * (y1 - y0) / w * s * s
        out = self._cum[idx] + within
        return np.clip(np.where(x < self._xs[0], 0.0, out), 0.0, self.total_mass)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        target = u * self._cum[-1]
        idx = np.clip(np.searchsorted(self._cum, target, side="right") - 1, 0, len(self._xs) - 2)
        x0, x1 = self._xs[idx], self._xs[idx + 1]
        y0, y1 = self._ys[idx], self._ys[idx + 1]
        rem = target - self._cum[idx]
        w = np.where(x1 > x0, x1 - x0, 1.0)
        slope = (y1 - y0) / w
        # Solve y0*s + slope*s^2/2 = rem for s in [0, x1-x0].
        lin = rem / np.where(y0 > 0.0, y0, 1.0)
        disc = np.maximum(y0 * y0 + 2.0 * slope * rem, 0.0)
        quad = (np.sqrt(disc) - y0) / np.where(slope != 0.0, slope, 1.0)
        s = np.where(np.abs(slope) > 1e-300, quad, np.where(y0 > 0.0, lin, 0.0))
        return x0 + np.clip(s, 0.0, x1 - x0)

    def mean(self) -> float:
        x0, x1 = self._xs[:-1], self._xs[1:]
        y0, y1 = self._ys[:-1], self._ys[1:]
        # Integral of x * linear over each segment.
        seg = (x1 - x0) * (x0 * (2 * y0 + y1) + x1 * (y0 + 2 * y1)) / 6.0
        return float(np.sum(seg) / self.total_mass)

    def sup(self) -> float:
        return float(np.max(self._ys))

    def support_hi(self) -> float:
        return float(self._xs[-1])


_KINDS = {
    "uniform": Uniform,
    "triangular": Triangular,
    "trunc_gaussian": TruncGaussian,
    "piecewise_linear": PiecewiseLinear,
}


def density_from_spec(kind: str, params: list, total_mass: float = 1.0,
                      knots=None) -> InitialDensity:
    """Build a preset from its config-file form."""
    kind = kind.strip().lower()
    if kind not in _KINDS:
        raise ValueError(f"unknown density kind: {kind!r}")
    if kind == "piecewise_linear":
        if not knots:
            raise ValueError("piecewise_linear needs knots")
        return PiecewiseLinear(total_mass=total_mass, knots=tuple(knots))
    cls = _KINDS[kind]
    return cls(total_mass, *params)


def density_to_spec(density: InitialDensity) -> dict:
    """Inverse of density_from_spec, for manifests."""
    out = {"total_mass": float(density.total_mass)}
    if isinstance(density, Uniform):
        out.update(kind="uniform", params=[density.a, density.b])
    elif isinstance(density, Triangular):
        out.update(kind="triangular", params=[density.a, density.b, density.c])
    elif isinstance(density, TruncGaussian):
        out.update(kind="trunc_gaussian", params=[density.mu, density.sigma])
    elif isinstance(density, PiecewiseLinear):
        out.update(kind="piecewise_linear", params=[],
                   knots=[[float(x), float(y)] for x, y in density.knots])
    else:
        raise ValueError(f"no spec form for {type(density).__name__}")
    return out
