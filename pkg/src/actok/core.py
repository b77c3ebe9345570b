"""Shared domain types and error taxonomy.

Conventions used throughout the package:

* action chunks are stored row-major by timestep: ``values[t, i]`` is
  dimension ``i`` at timestep ``t`` (shape H x D);
* coefficient matrices are stored dimension-major: ``real[i, k]`` is
  frequency ``k`` of dimension ``i`` (shape D x H);
* all real values are float64.

Types are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np


class ActokError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(ActokError):
    """Declared shape disagrees with the actual array shape."""


class NonFiniteError(ActokError):
    """A value is NaN or infinite."""


class EmptyCorpusError(ActokError):
    """An operation requires at least one chunk / stream."""


class DimMismatchError(ActokError):
    """Action dimensionality disagrees between two objects."""


class DimTooLargeError(ActokError):
    """Chunk dimensionality exceeds the configured padded width."""


class LengthMismatchError(ActokError):
    """A flat symbol stream cannot be reshaped to the expected (D, H)."""


class SymbolOutOfRangeError(ActokError):
    """A base symbol falls outside the merge table's base alphabet."""


class TokenOutOfRangeError(ActokError):
    """A token id falls outside the merge table's vocabulary."""


class CorpusFormatError(ActokError):
    """A corpus file record failed to parse or validate."""


class ModelFormatError(ActokError):
    """A model file is malformed or has an unsupported format version."""


class ModelIntegrityError(ModelFormatError):
    """A model file's payload does not match its embedded checksum."""


def _as_readonly_f64(values) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ActionChunk:
    """An H x D window of continuous actions plus control-frequency metadata."""

    values: np.ndarray
    horizon: int
    dim: int
    frequency_hz: float

    def __post_init__(self):
        object.__setattr__(self, "values", _as_readonly_f64(self.values))
        validate_chunk(self)

    @classmethod
    def from_array(cls, values, frequency_hz: float) -> "ActionChunk":
        """Build a chunk, inferring horizon and dim from the array shape."""
        arr = np.atleast_2d(np.asarray(values, dtype=np.float64))
        return cls(arr, arr.shape[0], arr.shape[1], float(frequency_hz))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ActionChunk):
            return NotImplemented
        return (self.horizon == other.horizon and self.dim == other.dim
                and self.frequency_hz == other.frequency_hz
                and np.array_equal(self.values, other.values))


def validate_chunk(chunk: ActionChunk) -> None:
    """Check every ActionChunk invariant; raise on the first violation."""
    if chunk.horizon < 1 or chunk.dim < 1:
        raise ShapeError(
            f"horizon and dim must be >= 1, got H={chunk.horizon} D={chunk.dim}")
    if chunk.values.ndim != 2:
        raise ShapeError(f"values must be 2-D, got ndim={chunk.values.ndim}")
    if chunk.values.shape != (chunk.horizon, chunk.dim):
        raise ShapeError(
            f"values has shape {chunk.values.shape}, declared "
            f"(H, D)=({chunk.horizon}, {chunk.dim})")
    if not np.isfinite(chunk.values).all():
        raise NonFiniteError("chunk contains NaN or Inf entries")
    if not np.isfinite(chunk.frequency_hz) or chunk.frequency_hz <= 0:
        raise NonFiniteError(
            f"frequency_hz must be positive and finite, got {chunk.frequency_hz}")


@dataclass(frozen=True)
class ChunkCorpus:
    """An ordered collection of chunks sharing one action dimensionality.

    ``weight`` is the mixture weight used when several corpora are pooled
    for training a shared tokenizer (relative scale only).
    """

    chunks: tuple
    name: str = ""
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "chunks", tuple(self.chunks))
        if not np.isfinite(self.weight) or self.weight < 0:
            raise ValueError(f"weight must be finite and >= 0, got {self.weight}")
        dims = {c.dim for c in self.chunks}
        if len(dims) > 1:
            raise DimMismatchError(
                f"corpus {self.name!r} mixes action dims {sorted(dims)}")

    @property
    def dim(self) -> int:
        if not self.chunks:
            raise EmptyCorpusError(f"corpus {self.name!r} is empty")
        return self.chunks[0].dim

    def __len__(self) -> int:
        return len(self.chunks)

    def __iter__(self) -> Iterator[ActionChunk]:
        return iter(self.chunks)


@dataclass(frozen=True, eq=False)
class TokenSequence:
    """A variable-length sequence of discrete token ids."""

    tokens: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.tokens, dtype=np.int32)
        if arr.ndim != 1:
            raise ShapeError(f"tokens must be 1-D, got ndim={arr.ndim}")
        if arr.size and arr.min() < 0:
            raise TokenOutOfRangeError("token ids must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "tokens", arr)

    def __len__(self) -> int:
        return int(self.tokens.size)

    def __iter__(self):
        return iter(int(t) for t in self.tokens)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TokenSequence):
            return NotImplemented
        return np.array_equal(self.tokens, other.tokens)


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """Per-dimension transform coefficients, real and/or quantized.

    Both arrays are D x H with row i holding dimension i's coefficients in
    ascending frequency order (index 0 is the lowest frequency). At least
    one form must be present; a freshly unflattened matrix has only the
    quantized form until it is dequantized.
    """

    real: np.ndarray | None = None
    quantized: np.ndarray | None = None

    def __post_init__(self):
        if self.real is None and self.quantized is None:
            raise ShapeError("coefficient matrix needs real or quantized data")
        if self.real is not None:
            object.__setattr__(self, "real", _as_readonly_f64(self.real))
            if self.real.ndim != 2:
                raise ShapeError(f"real must be 2-D, got ndim={self.real.ndim}")
        if self.quantized is not None:
            q = np.ascontiguousarray(self.quantized, dtype=np.int32)
            q.setflags(write=False)
            object.__setattr__(self, "quantized", q)
            if q.ndim != 2:
                raise ShapeError(f"quantized must be 2-D, got ndim={q.ndim}")
            if self.real is not None and q.shape != self.real.shape:
                raise ShapeError(
                    f"quantized shape {q.shape} != real shape {self.real.shape}")

    @property
    def _any(self) -> np.ndarray:
        return self.real if self.real is not None else self.quantized

    @property
    def dim(self) -> int:
        return self._any.shape[0]

    @property
    def horizon(self) -> int:
        return self._any.shape[1]
