"""The end-to-end tokenizer pipelines.

Encoding runs normalize -> per-dimension cosine transform -> quantize ->
column-first flatten -> BPE; decoding is the exact inverse of each stage,
so the only lossy step is coefficient quantization. The binning baseline
discretizes every (timestep, dimension) value into N uniform bins over the
normalized range and always yields exactly H*D tokens.

A universal tokenizer is fit on several corpora at once: every chunk is
zero-padded to a shared dimensionality, normalization pools the padded
values, and BPE training weighs each corpus by its mixture weight.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .bpe import MergeTable, bpe_decode, bpe_encode, train_bpe
from .coeff_codec import (
    QuantizerConfig,
    SymbolStream,
    clamp_was_active,
    dequantize,
    flatten_column_first,
    quantize,
    unflatten,
)
from .core import (
    ActionChunk,
    ChunkCorpus,
    DimMismatchError,
    DimTooLargeError,
    EmptyCorpusError,
    LengthMismatchError,
    TokenSequence,
)
from .normalize import (
    NormalizationStats,
    apply_normalization,
    fit_normalization,
    invert_normalization,
)
from .transform import dct_forward, dct_inverse

FORMAT_VERSION = 1
DEFAULT_GAMMA = 10.0
DEFAULT_VOCAB = 1024
DEFAULT_PAD_DIM = 32


@dataclass(frozen=True)
class BinningConfig:
    """Uniform binning of the normalized range [-1, 1] into n_bins bins."""

    n_bins: int = 256

    def __post_init__(self):
        if self.n_bins < 2:
            raise ValueError(f"n_bins must be >= 2, got {self.n_bins}")


@dataclass(frozen=True)
class TokenizerModel:
    """The persisted tokenizer artifact.

    ``default_shape`` is the modal (H, D) of the fitting corpus and is the
    shape assumed by decode when the caller does not pass one. For a
    universal model ``pad_dim`` is set, stats cover the padded width, and
    encode accepts any chunk with D <= pad_dim.
    """

    stats: NormalizationStats
    quantizer: QuantizerConfig
    merges: MergeTable
    default_shape: tuple[int, int]
    pad_dim: int | None = None
    format_version: int = FORMAT_VERSION
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "default_shape",
                           (int(self.default_shape[0]), int(self.default_shape[1])))
        if self.default_shape[1] != self.stats.dim:
            raise DimMismatchError(
                f"default_shape dim {self.default_shape[1]} != stats dim "
                f"{self.stats.dim}")
        if self.pad_dim is not None and self.pad_dim != self.stats.dim:
            raise DimMismatchError(
                f"pad_dim {self.pad_dim} != stats dim {self.stats.dim}")
        if self.merges.base_size != self.quantizer.base_alphabet_size:
            raise ValueError(
                f"merge table base size {self.merges.base_size} != quantizer "
                f"alphabet size {self.quantizer.base_alphabet_size}")

    @property
    def vocab_size(self) -> int:
        return self.merges.vocab_size


def _pad_chunk(chunk: ActionChunk, pad_dim: int) -> ActionChunk:
    if chunk.dim > pad_dim:
        raise DimTooLargeError(
            f"chunk has D={chunk.dim} > pad_dim={pad_dim}")
    if chunk.dim == pad_dim:
        return chunk
    padded = np.zeros((chunk.horizon, pad_dim))
    padded[:, :chunk.dim] = chunk.values
    return ActionChunk(padded, chunk.horizon, pad_dim, chunk.frequency_hz)


def _modal_shape(chunks) -> tuple[int, int]:
    counts = Counter((c.horizon, c.dim) for c in chunks)
    top = max(counts.values())
    return min(shape for shape, n in counts.items() if n == top)


def chunk_to_stream(chunk: ActionChunk, stats: NormalizationStats,
                    cfg: QuantizerConfig) -> SymbolStream:
    """The pre-BPE half of encoding: normalize, transform, quantize, flatten."""
    normalized = apply_normalization(chunk, stats)
    coeffs = quantize(dct_forward(normalized), cfg)
    return flatten_column_first(coeffs, cfg)


def fit_tokenizer(corpus: ChunkCorpus, gamma: float = DEFAULT_GAMMA,
                  max_vocab: int = DEFAULT_VOCAB,
                  clamp: int = 127) -> TokenizerModel:
    """Fit normalization and a BPE merge table on one corpus."""
    if len(corpus) == 0:
        raise EmptyCorpusError("cannot fit a tokenizer on an empty corpus")
    stats = fit_normalization(corpus)
    cfg = QuantizerConfig(gamma=gamma, clamp=clamp)
    streams = [chunk_to_stream(c, stats, cfg) for c in corpus]
    merges = train_bpe(streams, max_vocab=max_vocab,
                       base_size=cfg.base_alphabet_size)
    metadata = {"corpus": corpus.name, "n_chunks": str(len(corpus))}
    return TokenizerModel(stats=stats, quantizer=cfg, merges=merges,
                          default_shape=_modal_shape(corpus),
                          metadata=metadata)


def fit_universal_tokenizer(corpora, gamma: float = DEFAULT_GAMMA,
                            max_vocab: int = DEFAULT_VOCAB,
                            pad_dim: int = DEFAULT_PAD_DIM,
                            clamp: int = 127) -> TokenizerModel:
    """Fit one tokenizer on a weighted mixture of corpora.

    Every chunk is zero-padded to ``pad_dim`` columns; normalization stats
    pool the padded values and BPE pair counts are scaled by each corpus's
    mixture weight.
    """
    corpora = list(corpora)
    if not corpora or all(len(c) == 0 for c in corpora):
        raise EmptyCorpusError("cannot fit a universal tokenizer without chunks")
    padded = [
        ChunkCorpus(tuple(_pad_chunk(c, pad_dim) for c in corpus),
                    name=corpus.name, weight=corpus.weight)
        for corpus in corpora
    ]
    pooled = ChunkCorpus(
        tuple(c for corpus in padded for c in corpus), name="pooled")
    stats = fit_normalization(pooled)
    cfg = QuantizerConfig(gamma=gamma, clamp=clamp)
    streams: list[SymbolStream] = []
    weights: list[float] = []
    for corpus in padded:
        for chunk in corpus:
            streams.append(chunk_to_stream(chunk, stats, cfg))
            weights.append(corpus.weight)
    merges = train_bpe(streams, max_vocab=max_vocab, weights=weights,
                       base_size=cfg.base_alphabet_size)
    metadata = {
        "corpora": ",".join(c.name for c in corpora),
        "corpus_weights": ",".join(repr(c.weight) for c in corpora),
        "original_dims": ",".join(str(c.dim) for c in corpora),
        "n_chunks": str(len(pooled)),
    }
    return TokenizerModel(stats=stats, quantizer=cfg, merges=merges,
                          default_shape=_modal_shape(pooled),
                          pad_dim=pad_dim, metadata=metadata)


def encode_chunk(chunk: ActionChunk, model: TokenizerModel) -> TokenSequence:
    """Tokenize one chunk; the output length is data-dependent."""
    if model.pad_dim is not None:
        chunk = _pad_chunk(chunk, model.pad_dim)
    elif chunk.dim != model.stats.dim:
        raise DimMismatchError(
            f"chunk has D={chunk.dim}, model expects D={model.stats.dim}")
    return bpe_encode(chunk_to_stream(chunk, model.stats, model.quantizer),
                      model.merges)


def decode_tokens(tokens: TokenSequence, model: TokenizerModel,
                  shape: tuple[int, int] | None = None) -> ActionChunk:
    """Invert encode_chunk.

    ``shape`` is the output (H, D); it defaults to the model's
    default_shape. For a universal model D may be smaller than the padded
    width, in which case the padded columns are stripped. The expanded
    symbol stream must have exactly H * stats.dim symbols.
    """
    h, d_out = shape if shape is not None else model.default_shape
    d_in = model.stats.dim
    if model.pad_dim is None:
        if d_out != d_in:
            raise DimMismatchError(
                f"requested D={d_out}, model expects D={d_in}")
    elif d_out > d_in:
        raise DimMismatchError(
            f"requested D={d_out} > padded width {d_in}")
    symbols = bpe_decode(tokens, model.merges)
    if symbols.size != h * d_in:
        raise LengthMismatchError(
            f"decoded stream has {symbols.size} symbols, expected "
            f"H*D = {h}*{d_in} = {h * d_in}")
    stream = SymbolStream(symbols=symbols, shape=(d_in, h))
    coeffs = dequantize(unflatten(stream, model.quantizer), model.quantizer)
    chunk = invert_normalization(dct_inverse(coeffs, h), model.stats)
    if d_out == d_in:
        return chunk
    return ActionChunk(chunk.values[:, :d_out], h, d_out, chunk.frequency_hz)


def chunk_clamps(chunk: ActionChunk, model: TokenizerModel) -> bool:
    """True if encoding this chunk clips any quantized coefficient."""
    if model.pad_dim is not None:
        chunk = _pad_chunk(chunk, model.pad_dim)
    normalized = apply_normalization(chunk, model.stats)
    return clamp_was_active(dct_forward(normalized), model.quantizer)


def naive_encode(chunk: ActionChunk, stats: NormalizationStats,
                 cfg: BinningConfig = BinningConfig()) -> TokenSequence:
    """Per-timestep, per-dimension uniform binning; always H*D tokens.

    The token order is timestep-major: all dimensions of timestep 1, then
    all of timestep 2, and so on.
    """
    normalized = apply_normalization(chunk, stats)
    n = cfg.n_bins
    bins = np.floor((normalized.values + 1.0) / 2.0 * n)
    bins = np.clip(bins, 0, n - 1).astype(np.int32)
    return TokenSequence(bins.reshape(-1, order="C"))


def naive_decode(tokens: TokenSequence, stats: NormalizationStats,
                 cfg: BinningConfig, shape: tuple[int, int]) -> ActionChunk:
    """Map bins to their centers and invert normalization."""
    h, d = int(shape[0]), int(shape[1])
    ids = tokens.tokens
    if ids.size != h * d:
        raise LengthMismatchError(
            f"{ids.size} tokens cannot fill shape (H, D)=({h}, {d})")
    centers = 2.0 * (ids.astype(np.float64) + 0.5) / cfg.n_bins - 1.0
    chunk = ActionChunk(centers.reshape((h, d), order="C"), h, d, float(h))
    return invert_normalization(chunk, stats)


def naive_token_count(frequency_hz: float, dim: int,
                      duration_s: float = 1.0) -> int:
    """Binning token count for a chunk of the given duration: H * D with
    H = round(frequency_hz * duration_s)."""
    return int(round(frequency_hz * duration_s)) * dim


def token_count(chunk: ActionChunk, model: TokenizerModel) -> int:
    """Number of tokens this model emits for the chunk."""
    return len(encode_chunk(chunk, model))


def compression_ratio(chunk: ActionChunk, model: TokenizerModel) -> float:
    """Binning token count (H*D) divided by this model's token count."""
    return (chunk.horizon * chunk.dim) / token_count(chunk, model)
