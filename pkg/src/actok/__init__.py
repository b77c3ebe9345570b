"""Action-chunk tokenization for high-frequency robot control signals.

Continuous H x D action chunks are compressed into short discrete token
sequences: per-dimension quantile normalization, an orthonormal cosine
transform, coefficient quantization, column-first flattening, and
byte-pair encoding. Decoding inverts every stage; quantization is the
only lossy step. A per-timestep uniform-binning tokenizer is included as
the baseline, and a benchmark harness measures compression and
reconstruction quality on synthetic spline trajectories.
"""

__version__ = "0.1.0"

from .core import (
    ActionChunk,
    ActokError,
    ChunkCorpus,
    CoefficientMatrix,
    CorpusFormatError,
    DimMismatchError,
    DimTooLargeError,
    EmptyCorpusError,
    LengthMismatchError,
    ModelFormatError,
    ModelIntegrityError,
    NonFiniteError,
    ShapeError,
    SymbolOutOfRangeError,
    TokenOutOfRangeError,
    TokenSequence,
    validate_chunk,
)
from .normalize import (
    NormalizationStats,
    apply_normalization,
    fit_normalization,
    invert_normalization,
)
from .transform import dct_forward, dct_inverse
from .coeff_codec import (
    QuantizerConfig,
    SymbolStream,
    clamp_was_active,
    dequantize,
    flatten_column_first,
    quantize,
    unflatten,
)
from .bpe import (
    MergeTable,
    bpe_decode,
    bpe_encode,
    bpe_encode_batch,
    train_bpe,
)
from .pipeline import (
    BinningConfig,
    TokenizerModel,
    compression_ratio,
    decode_tokens,
    encode_chunk,
    fit_tokenizer,
    fit_universal_tokenizer,
    naive_decode,
    naive_encode,
    naive_token_count,
    token_count,
)
from .bench import (
    BenchReport,
    BenchRow,
    SplineSpec,
    evaluate_fast,
    evaluate_naive,
    gen_spline_chunk,
    gen_spline_corpus,
    sweep_gamma,
    sweep_rate,
)
from .formats import (
    load_corpus,
    load_model,
    load_token_file,
    save_corpus,
    save_model,
    save_token_file,
)

__all__ = [
    "__version__",
    # errors
    "ActokError", "ShapeError", "NonFiniteError", "EmptyCorpusError",
    "DimMismatchError", "DimTooLargeError", "LengthMismatchError",
    "SymbolOutOfRangeError", "TokenOutOfRangeError", "CorpusFormatError",
    "ModelFormatError", "ModelIntegrityError",
    # domain types
    "ActionChunk", "ChunkCorpus", "TokenSequence", "CoefficientMatrix",
    "NormalizationStats", "QuantizerConfig", "SymbolStream", "MergeTable",
    "TokenizerModel", "BinningConfig", "SplineSpec", "BenchRow", "BenchReport",
    # stages
    "validate_chunk", "fit_normalization", "apply_normalization",
    "invert_normalization", "dct_forward", "dct_inverse", "quantize",
    "dequantize", "clamp_was_active", "flatten_column_first", "unflatten",
    "train_bpe", "bpe_encode", "bpe_encode_batch", "bpe_decode",
    # pipelines
    "fit_tokenizer", "fit_universal_tokenizer", "encode_chunk",
    "decode_tokens", "naive_encode", "naive_decode", "naive_token_count",
    "token_count", "compression_ratio",
    # benchmark
    "gen_spline_chunk", "gen_spline_corpus", "evaluate_fast", "evaluate_naive",
    "sweep_gamma", "sweep_rate",
    # persistence
    "save_model", "load_model", "save_corpus", "load_corpus",
    "save_token_file", "load_token_file",
]
