"""Coefficient quantization and column-first flattening.

Quantization multiplies coefficients by the rounding scale gamma, rounds
half away from zero and clamps to +/- clamp. Flattening emits the
quantized matrix frequency-major (the lowest frequency of every dimension
before any higher frequency) and offsets each integer by +clamp so the
symbol alphabet is [0, 2*clamp], byte-sized at the default clamp of 127.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    CoefficientMatrix,
    LengthMismatchError,
    ShapeError,
    SymbolOutOfRangeError,
)


@dataclass(frozen=True)
class QuantizerConfig:
    """Rounding scale and clamp range for coefficient quantization."""

    gamma: float = 10.0
    clamp: int = 127

    def __post_init__(self):
        if not (self.gamma > 0 and np.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.clamp < 1:
            raise ValueError(f"clamp must be >= 1, got {self.clamp}")

    @property
    def base_alphabet_size(self) -> int:
        """Size of the flattened symbol alphabet, 2*clamp + 1."""
        return 2 * self.clamp + 1


@dataclass(frozen=True, eq=False)
class SymbolStream:
    """Flat non-negative symbol sequence plus its source (D, H) shape."""

    symbols: np.ndarray
    shape: tuple[int, int]

    def __post_init__(self):
        arr = np.ascontiguousarray(self.symbols, dtype=np.int32)
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)
        object.__setattr__(self, "shape", (int(self.shape[0]), int(self.shape[1])))
        d, h = self.shape
        if arr.size != d * h:
            raise LengthMismatchError(
                f"stream length {arr.size} != D*H = {d}*{h}")
        if arr.size and arr.min() < 0:
            raise SymbolOutOfRangeError("symbols must be non-negative")

    def __len__(self) -> int:
        return int(self.symbols.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolStream):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(
            self.symbols, other.symbols)


def round_half_away_from_zero(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def quantize(coeffs: CoefficientMatrix, cfg: QuantizerConfig) -> CoefficientMatrix:
    """Scale by gamma, round half away from zero, clamp to +/- cfg.clamp."""
    if coeffs.real is None:
        raise ShapeError("quantize requires real coefficients")
    q = round_half_away_from_zero(cfg.gamma * coeffs.real)
    q = np.clip(q, -cfg.clamp, cfg.clamp).astype(np.int32)
    return CoefficientMatrix(real=coeffs.real, quantized=q)


def dequantize(coeffs: CoefficientMatrix, cfg: QuantizerConfig) -> CoefficientMatrix:
    """Reconstruct real coefficients as quantized / gamma."""
    if coeffs.quantized is None:
        raise ShapeError("dequantize requires a quantized matrix")
    real = coeffs.quantized.astype(np.float64) / cfg.gamma
    return CoefficientMatrix(real=real, quantized=coeffs.quantized)


def clamp_was_active(coeffs: CoefficientMatrix, cfg: QuantizerConfig) -> bool:
    """True if quantizing coeffs.real at cfg would clip any coefficient."""
    if coeffs.real is None:
        raise ShapeError("clamp check requires real coefficients")
    return bool(
        (np.abs(round_half_away_from_zero(cfg.gamma * coeffs.real))
         > cfg.clamp).any())


def flatten_column_first(coeffs: CoefficientMatrix,
                         cfg: QuantizerConfig) -> SymbolStream:
    """Emit quantized coefficients frequency-major and offset by +clamp.

    For k = 0..H-1 the k-th frequency of every dimension is emitted before
    frequency k+1, so consumers see the coarse shape of all dimensions
    first.
    """
    if coeffs.quantized is None:
        raise ShapeError("flatten requires a quantized matrix")
    symbols = coeffs.quantized.flatten(order="F") + cfg.clamp
    return SymbolStream(symbols=symbols, shape=coeffs.quantized.shape)


def unflatten(stream: SymbolStream, cfg: QuantizerConfig) -> CoefficientMatrix:
    """Exact inverse of flatten_column_first, including offset removal."""
    d, h = stream.shape
    if stream.symbols.size != d * h:
        raise LengthMismatchError(
            f"stream length {stream.symbols.size} != D*H = {d}*{h}")
    q = (stream.symbols.astype(np.int32) - cfg.clamp).reshape((d, h), order="F")
    return CoefficientMatrix(quantized=q)
