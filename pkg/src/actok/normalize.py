"""Per-dimension quantile normalization.

Fitting pools every value of a dimension across all timesteps of all
chunks and takes the 1st / 99th percentiles (linear interpolation between
order statistics, i.e. index p*(n-1) on the sorted sample). Applying maps
that band to [-1, 1]; values outside the band pass through un-clipped so
the mapping stays invertible. Lossiness is left to the quantizer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ActionChunk,
    ChunkCorpus,
    DimMismatchError,
    EmptyCorpusError,
    NonFiniteError,
)

Q_LOW_PCT = 1.0
Q_HIGH_PCT = 99.0


@dataclass(frozen=True)
class NormalizationStats:
    """1st/99th percentile per action dimension, fit on a corpus."""

    q_low: np.ndarray
    q_high: np.ndarray

    def __post_init__(self):
        lo = np.ascontiguousarray(self.q_low, dtype=np.float64)
        hi = np.ascontiguousarray(self.q_high, dtype=np.float64)
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "q_low", lo)
        object.__setattr__(self, "q_high", hi)
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise DimMismatchError(
                f"q_low/q_high must be equal-length vectors, got "
                f"{lo.shape} and {hi.shape}")
        if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
            raise NonFiniteError("normalization stats contain NaN/Inf")
        if (lo > hi).any():
            bad = int(np.argmax(lo > hi))
            raise ValueError(f"q_low > q_high at dimension {bad}")

    @property
    def dim(self) -> int:
        return self.q_low.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalizationStats):
            return NotImplemented
        return (np.array_equal(self.q_low, other.q_low)
                and np.array_equal(self.q_high, other.q_high))


def fit_normalization(corpus: ChunkCorpus) -> NormalizationStats:
    """Fit per-dimension percentile stats on all values in the corpus."""
    if len(corpus) == 0:
        raise EmptyCorpusError("cannot fit normalization on an empty corpus")
    pooled = np.concatenate([c.values for c in corpus], axis=0)
    q = np.percentile(pooled, [Q_LOW_PCT, Q_HIGH_PCT], axis=0, method="linear")
    return NormalizationStats(q_low=q[0], q_high=q[1])


def _check_dim(chunk: ActionChunk, stats: NormalizationStats) -> None:
    if chunk.dim != stats.dim:
        raise DimMismatchError(
            f"chunk has D={chunk.dim}, stats expect D={stats.dim}")


def apply_normalization(chunk: ActionChunk, stats: NormalizationStats) -> ActionChunk:
    """Map the quantile band to [-1, 1]; degenerate dimensions map to 0."""
    _check_dim(chunk, stats)
    span = stats.q_high - stats.q_low
    degenerate = span == 0
    safe_span = np.where(degenerate, 1.0, span)
    out = 2.0 * (chunk.values - stats.q_low) / safe_span - 1.0
    out[:, degenerate] = 0.0
    return ActionChunk(out, chunk.horizon, chunk.dim, chunk.frequency_hz)


def invert_normalization(chunk: ActionChunk, stats: NormalizationStats) -> ActionChunk:
    """Exact inverse of apply_normalization; degenerate dimensions map to q_low."""
    _check_dim(chunk, stats)
    span = stats.q_high - stats.q_low
    out = stats.q_low + (chunk.values + 1.0) * span / 2.0
    out[:, span == 0] = stats.q_low[span == 0]
    return ActionChunk(out, chunk.horizon, chunk.dim, chunk.frequency_hz)
