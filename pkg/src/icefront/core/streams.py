"""Counter-based noise streams.

Every random draw in the package is a pure function of (seed, purpose tag,
step index, lane index).  Lanes are particle slots, so a particle's noise
does not depend on how many other particles exist, which particles are
still alive, or how work is scheduled.  Two runs with the same seed and
config are bit-identical; coupled runs (same seed, different alpha) share
noise exactly.

Implementation: one Philox4x64 bit generator per (seed, tag, step), raw
64-bit lane outputs mapped to uniforms in (0, 1), normals via the inverse
Gaussian CDF.  No rejection steps, so lane k always consumes exactly one
counter slot.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

# Purpose tags keep unrelated draws on disjoint key ranges.
TAG_INITIAL = 1
TAG_STEP = 2
TAG_BRIDGE = 3
TAG_PICARD = 4
TAG_ORACLE = 5
TAG_BOOTSTRAP = 6

_U64 = np.uint64
_STEP_BITS = 48  # step index must fit below the tag bits


def _raw(seed: int, tag: int, step: int, n: int) -> np.ndarray:
    """First n counter outputs of the (seed, tag, step) Philox stream."""
    if not 0 <= step < (1 << _STEP_BITS):
        raise ValueError(f"step index out of range: {step}")
    key = np.array([seed, (tag << _STEP_BITS) | step], dtype=_U64)
    return np.random.Philox(key=key).random_raw(n)


def _uniform_from_raw(raw: np.ndarray) -> np.ndarray:
    # 53-bit mantissa, offset to stay strictly inside (0, 1).
    return (raw >> _U64(11)) * 2.0**-53 + 2.0**-54


class NoiseStreams:
    """Handle bundling the run seed; all draws are keyed through it."""

    def __init__(self, seed: int):
        if not 0 <= int(seed) < 2**64:
            raise ValueError("seed must fit in uint64")
        self.seed = int(seed)

    def initial_uniforms(self, n: int) -> np.ndarray:
        """Uniforms for inverse-CDF sampling of the initial ensemble."""
        return _uniform_from_raw(_raw(self.seed, TAG_INITIAL, 0, n))

    def step_normals(self, step: int, n: int) -> np.ndarray:
        """Standard normals for the Euler increments of one step."""
        return ndtri(_uniform_from_raw(_raw(self.seed, TAG_STEP, step, n)))

    def bridge_uniforms(self, step: int, n: int,
                        lanes: np.ndarray | None = None) -> np.ndarray:
        """Uniforms deciding interior-crossing absorption in one step.

        The raw-to-uniform map is elementwise, so passing ``lanes`` (bool
        mask or index array) returns just those lanes with bit-identical
        values; the raw block is still drawn at full width.
        """
        raw = _raw(self.seed, TAG_BRIDGE, step, n)
        if lanes is not None:
            raw = raw[lanes]
        return _uniform_from_raw(raw)

    def picard_normals(self, step: int, n: int, n_inner: int) -> np.ndarray:
        """(n, n_inner) standard normals for frozen inner paths.

        Row i belongs to particle slot i; the whole block is reused across
        Picard iterations, never redrawn.
        """
        raw = _raw(self.seed, TAG_PICARD, step, n * n_inner)
        return ndtri(_uniform_from_raw(raw)).reshape(n, n_inner)

    def oracle_normals(self, step: int, n: int) -> np.ndarray:
        """Normals for Monte Carlo oracles, keyed off the solver streams."""
        return ndtri(_uniform_from_raw(_raw(self.seed, TAG_ORACLE, step, n)))

    def oracle_uniforms(self, step: int, n: int) -> np.ndarray:
        return _uniform_from_raw(_raw(self.seed, TAG_ORACLE, step, n))

    def bootstrap_indices(self, step: int, n: int, m: int) -> np.ndarray:
        """n resample indices into an array of length m."""
        raw = _raw(self.seed, TAG_BOOTSTRAP, step, n)
        return (raw % _U64(m)).astype(np.int64)
