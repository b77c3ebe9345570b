"""Synthetic spline benchmark: corpus generation, metrics, and sweeps.

The benchmark signal is a natural cubic spline through four random control
points, sampled over a 1-second window. Control points are drawn once per
(seed, n_chunks, dims) and are independent of the sampling rate, so the
same underlying trajectories can be resampled at different rates.

All reported statistics are deterministic functions of (seed, config).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .bpe import bpe_encode_batch
from .coeff_codec import round_half_away_from_zero
from .core import ActionChunk, ChunkCorpus, DimMismatchError, TokenSequence
from .normalize import NormalizationStats, apply_normalization
from .pipeline import (
    BinningConfig,
    TokenizerModel,
    _pad_chunk,
    chunk_clamps,
    chunk_to_stream,
    decode_tokens,
    fit_tokenizer,
    naive_decode,
    naive_encode,
)
from .transform import dct_forward

# x-positions of the four spline control points inside the unit window.
_KNOTS = np.array([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0])


@dataclass(frozen=True)
class SplineSpec:
    """Control points (4 rows, one column per dimension) plus sampling rate."""

    control_points: np.ndarray
    sampling_rate: int

    def __post_init__(self):
        pts = np.asarray(self.control_points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] != 4:
            raise ValueError(
                f"control_points must have 4 rows, got shape {pts.shape}")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "control_points", pts)
        object.__setattr__(self, "sampling_rate", int(self.sampling_rate))
        if self.sampling_rate < 2:
            raise ValueError(
                f"sampling_rate must be >= 2, got {self.sampling_rate}")

    @property
    def dims(self) -> int:
        return self.control_points.shape[1]

    @classmethod
    def from_seed(cls, seed: int, sampling_rate: int,
                  dims: int = 1) -> "SplineSpec":
        rng = np.random.default_rng(seed)
        return cls(rng.uniform(-1.0, 1.0, size=(4, dims)), sampling_rate)


def gen_spline_chunk(spec: SplineSpec) -> ActionChunk:
    """Sample the natural cubic spline at sampling_rate points over [0, 1]."""
    spline = CubicSpline(_KNOTS, spec.control_points, axis=0,
                         bc_type="natural")
    xs = np.linspace(0.0, 1.0, spec.sampling_rate)
    values = spline(xs)
    return ActionChunk(values, spec.sampling_rate, spec.dims,
                       float(spec.sampling_rate))


def gen_spline_corpus(n_chunks: int, sampling_rate: int, seed: int,
                      dims: int = 1, name: str = "") -> ChunkCorpus:
    """n_chunks independent spline draws from one seeded generator.

    The control points depend only on (seed, n_chunks, dims), never on the
    rate: the same seed at two rates resamples identical trajectories.
    """
    if n_chunks < 1:
        raise ValueError(f"n_chunks must be >= 1, got {n_chunks}")
    rng = np.random.default_rng(seed)
    points = rng.uniform(-1.0, 1.0, size=(4, n_chunks, dims))
    spline = CubicSpline(_KNOTS, points, axis=0, bc_type="natural")
    xs = np.linspace(0.0, 1.0, int(sampling_rate))
    sampled = spline(xs)  # (H, n_chunks, dims)
    chunks = tuple(
        ActionChunk(sampled[:, i, :], int(sampling_rate), dims,
                    float(sampling_rate))
        for i in range(n_chunks))
    return ChunkCorpus(chunks, name=name or f"spline-{sampling_rate}hz")


@dataclass(frozen=True)
class BenchRow:
    """One tokenizer evaluated on one corpus configuration."""

    label: str
    n_chunks: int
    rate: float
    dims: int
    mean_token_count: float
    mean_rms_error: float
    compression_ratio: float
    gamma: float | None = None
    vocab: int | None = None
    mean_nonzero_coeffs: float | None = None
    clamp_fraction: float | None = None

    def __post_init__(self):
        for name in ("mean_token_count", "mean_rms_error",
                     "compression_ratio"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.mean_token_count <= 0:
            raise ValueError("mean_token_count must be positive")

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "n_chunks": self.n_chunks,
            "rate": self.rate,
            "dims": self.dims,
            "mean_token_count": self.mean_token_count,
            "mean_rms_error": self.mean_rms_error,
            "compression_ratio": self.compression_ratio,
            "gamma": self.gamma,
            "vocab": self.vocab,
            "mean_nonzero_coeffs": self.mean_nonzero_coeffs,
            "clamp_fraction": self.clamp_fraction,
        }


@dataclass(frozen=True)
class BenchReport:
    """Rows plus the axis they were swept along ("gamma", "rate", "corpus")."""

    axis: str
    rows: tuple[BenchRow, ...]

    def to_dict(self) -> dict:
        return {"axis": self.axis, "rows": [r.to_dict() for r in self.rows]}

    def __len__(self) -> int:
        return len(self.rows)


def normalized_rms(original: ActionChunk, decoded: ActionChunk,
                   stats: NormalizationStats,
                   pad_dim: int | None = None) -> float:
    """Pooled RMS between the two chunks in normalized space."""
    if pad_dim is not None:
        original = _pad_chunk(original, pad_dim)
        decoded = _pad_chunk(decoded, pad_dim)
    a = apply_normalization(original, stats).values
    b = apply_normalization(decoded, stats).values
    return float(np.sqrt(np.mean((a - b) ** 2)))


def per_dimension_rms(original: ActionChunk, decoded: ActionChunk,
                      stats: NormalizationStats) -> np.ndarray:
    """Per-dimension RMS in normalized space, shape (D,)."""
    a = apply_normalization(original, stats).values
    b = apply_normalization(decoded, stats).values
    return np.sqrt(np.mean((a - b) ** 2, axis=0))


def dims_in_clamp(chunk: ActionChunk, model: TokenizerModel) -> np.ndarray:
    """Per-dimension mask: True where no coefficient of that row clips."""
    if model.pad_dim is not None:
        chunk = _pad_chunk(chunk, model.pad_dim)
    normalized = apply_normalization(chunk, model.stats)
    coeffs = dct_forward(normalized)
    cfg = model.quantizer
    rounded = round_half_away_from_zero(cfg.gamma * coeffs.real)
    return (np.abs(rounded) <= cfg.clamp).all(axis=1)


def nonzero_coefficient_count(chunk: ActionChunk,
                              model: TokenizerModel) -> int:
    """How many quantized coefficients of this chunk are nonzero."""
    if model.pad_dim is not None:
        chunk = _pad_chunk(chunk, model.pad_dim)
    normalized = apply_normalization(chunk, model.stats)
    cfg = model.quantizer
    rounded = round_half_away_from_zero(cfg.gamma * dct_forward(normalized).real)
    clipped = np.clip(rounded, -cfg.clamp, cfg.clamp)
    return int(np.count_nonzero(clipped))


def encode_corpus(corpus: ChunkCorpus,
                  model: TokenizerModel) -> list[TokenSequence]:
    """Encode every chunk; identical to mapping encode_chunk over the corpus
    but batched into one kernel pass per merge."""
    streams = []
    for chunk in corpus:
        if model.pad_dim is not None:
            chunk = _pad_chunk(chunk, model.pad_dim)
        elif chunk.dim != model.stats.dim:
            raise DimMismatchError(
                f"chunk has D={chunk.dim}, model expects D={model.stats.dim}")
        streams.append(chunk_to_stream(chunk, model.stats, model.quantizer))
    return bpe_encode_batch(streams, model.merges)


def evaluate_fast(corpus: ChunkCorpus, model: TokenizerModel,
                  label: str = "fast") -> BenchRow:
    """Mean token count, normalized-space RMS, and compression vs H*D."""
    counts = []
    rmses = []
    naive_counts = []
    nonzeros = []
    clamped = 0
    sequences = encode_corpus(corpus, model)
    for chunk, tokens in zip(corpus, sequences):
        decoded = decode_tokens(tokens, model, shape=(chunk.horizon, chunk.dim))
        counts.append(len(tokens))
        rmses.append(normalized_rms(chunk, decoded, model.stats,
                                    pad_dim=model.pad_dim))
        naive_counts.append(chunk.horizon * chunk.dim)
        nonzeros.append(nonzero_coefficient_count(chunk, model))
        clamped += int(chunk_clamps(chunk, model))
    first = corpus.chunks[0]
    return BenchRow(
        label=label,
        n_chunks=len(corpus),
        rate=first.frequency_hz,
        dims=first.dim,
        mean_token_count=float(np.mean(counts)),
        mean_rms_error=float(np.mean(rmses)),
        compression_ratio=float(np.mean(naive_counts) / np.mean(counts)),
        gamma=model.quantizer.gamma,
        vocab=model.vocab_size,
        mean_nonzero_coeffs=float(np.mean(nonzeros)),
        clamp_fraction=clamped / len(corpus),
    )


def evaluate_naive(corpus: ChunkCorpus, stats: NormalizationStats,
                   cfg: BinningConfig = BinningConfig(),
                   label: str = "binning") -> BenchRow:
    counts = []
    rmses = []
    for chunk in corpus:
        tokens = naive_encode(chunk, stats, cfg)
        decoded = naive_decode(tokens, stats, cfg, (chunk.horizon, chunk.dim))
        counts.append(len(tokens))
        rmses.append(normalized_rms(chunk, decoded, stats))
    return BenchRow(
        label=label,
        n_chunks=len(corpus),
        rate=corpus.chunks[0].frequency_hz,
        dims=corpus.dim,
        mean_token_count=float(np.mean(counts)),
        mean_rms_error=float(np.mean(rmses)),
        compression_ratio=1.0,
        vocab=cfg.n_bins,
    )


def sweep_gamma(corpus: ChunkCorpus, gammas, max_vocab: int = 1024,
                clamp: int = 127) -> BenchReport:
    """Fit and evaluate once per gamma; rows in ascending gamma order."""
    gammas = sorted(float(g) for g in gammas)
    if not gammas:
        raise ValueError("gamma list must be nonempty")
    rows = []
    for gamma in gammas:
        model = fit_tokenizer(corpus, gamma=gamma, max_vocab=max_vocab,
                              clamp=clamp)
        rows.append(evaluate_fast(corpus, model, label=f"gamma={gamma:g}"))
    return BenchReport(axis="gamma", rows=tuple(rows))


def sweep_rate(rates, n_chunks: int = 256, seed: int = 0,
               gamma: float = 10.0, max_vocab: int = 1024,
               dims: int = 1) -> BenchReport:
    """Resample the same spline trajectories at each rate; fit and evaluate.

    Emits two rows per rate: the fitted tokenizer and the binning baseline
    on the same corpus and normalization stats.
    """
    rates = sorted(int(r) for r in rates)
    if not rates or min(rates) < 2:
        raise ValueError(f"rates must all be >= 2, got {rates}")
    rows = []
    for rate in rates:
        corpus = gen_spline_corpus(n_chunks, rate, seed, dims=dims)
        model = fit_tokenizer(corpus, gamma=gamma, max_vocab=max_vocab)
        rows.append(evaluate_fast(corpus, model, label=f"fast@{rate}hz"))
        rows.append(evaluate_naive(corpus, model.stats,
                                   label=f"binning@{rate}hz"))
    return BenchReport(axis="rate", rows=tuple(rows))
