"""Orthonormal cosine transform applied per action dimension.

Each dimension's length-H time series is transformed independently
(type-II forward, type-III inverse, orthonormal scaling). Orthonormality
gives exact energy preservation, so a bound on per-coefficient
quantization error translates directly into a signal-space RMS bound.
"""

from __future__ import annotations

import numpy as np
from scipy import fft as _fft

from .core import ActionChunk, CoefficientMatrix, ShapeError, validate_chunk


def dct_forward(chunk: ActionChunk) -> CoefficientMatrix:
    """Transform each dimension's time series; row i of the result holds
    dimension i's coefficients in ascending frequency order."""
    validate_chunk(chunk)
    coeffs = _fft.dct(chunk.values, type=2, norm="ortho", axis=0)
    return CoefficientMatrix(real=coeffs.T)


def dct_inverse(coeffs: CoefficientMatrix, horizon: int | None = None,
                frequency_hz: float | None = None) -> ActionChunk:
    """Exact inverse of dct_forward.

    ``horizon`` is accepted for interface symmetry and must match the
    coefficient row length. ``frequency_hz`` defaults to one-second-chunk
    accounting (H samples per second).
    """
    real = coeffs.real
    if real is None:
        raise ShapeError("inverse transform requires real coefficients")
    if horizon is None:
        horizon = real.shape[1]
    if horizon != real.shape[1]:
        raise ShapeError(
            f"horizon {horizon} != coefficient row length {real.shape[1]}")
    values = _fft.idct(real.T, type=2, norm="ortho", axis=0)
    if frequency_hz is None:
        frequency_hz = float(horizon)
    return ActionChunk(values, horizon, real.shape[0], frequency_hz)
