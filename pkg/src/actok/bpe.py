"""Byte-pair encoding over integer symbol streams.

Training greedily merges the most frequent adjacent pair until the
vocabulary budget is reached or no pair occurs at least twice. Streams may
carry mixture weights: a pair occurrence in a stream of weight w counts w
toward the ranking (eligibility stays on raw occurrence counts, so
uniformly-weighted training matches the unweighted definition exactly).
Ties on the ranked count break toward the lexicographically smallest
(left, right) pair, which makes training deterministic and
prefix-monotone in the vocabulary budget.

Merges never span stream boundaries; internally the corpus is packed into
per-weight buffers separated by a negative sentinel that can never pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .coeff_codec import SymbolStream
from .core import (
    EmptyCorpusError,
    SymbolOutOfRangeError,
    TokenOutOfRangeError,
    TokenSequence,
)

_SENTINEL = -1
# pair codes are left * _CODE_K + right; ids stay far below this
_CODE_K = np.int64(1) << 32


@dataclass(frozen=True)
class MergeTable:
    """Ordered merge list over a base alphabet of size base_size.

    The r-th merge (left, right) defines token id base_size + r; expanding
    ids recursively always terminates in base symbols because a merge may
    only reference ids smaller than the one it defines.
    """

    base_size: int
    merges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "merges",
            tuple((int(l), int(r)) for l, r in self.merges))
        if self.base_size < 1:
            raise ValueError(f"base_size must be >= 1, got {self.base_size}")
        for idx, (left, right) in enumerate(self.merges):
            new_id = self.base_size + idx
            if not (0 <= left < new_id and 0 <= right < new_id):
                raise ValueError(
                    f"merge {idx} ({left}, {right}) references ids outside "
                    f"[0, {new_id})")

    @property
    def vocab_size(self) -> int:
        return self.base_size + len(self.merges)

    def merge_array(self) -> np.ndarray:
        """Merges as an (R, 2) int32 array for the kernels."""
        return np.array(self.merges, dtype=np.int32).reshape(-1, 2)

    def expansions(self) -> list[np.ndarray]:
        """Base-symbol expansion of every merged token, in merge order."""
        exp: list[np.ndarray] = []

        def of(token: int) -> np.ndarray:
            if token < self.base_size:
                return np.array([token], dtype=np.int32)
            return exp[token - self.base_size]

        for left, right in self.merges:
            exp.append(np.concatenate([of(left), of(right)]))
        return exp


def _stream_symbols(stream) -> np.ndarray:
    if isinstance(stream, SymbolStream):
        return stream.symbols
    return np.ascontiguousarray(stream, dtype=np.int32)


def _check_base_symbols(symbols: np.ndarray, base_size: int) -> None:
    if symbols.size == 0:
        return
    lo, hi = int(symbols.min()), int(symbols.max())
    if lo < 0 or hi >= base_size:
        raise SymbolOutOfRangeError(
            f"symbols must lie in [0, {base_size}), found range [{lo}, {hi}]")


def _pack(symbol_arrays: Sequence[np.ndarray]) -> np.ndarray:
    """Concatenate streams with sentinel separators."""
    parts: list[np.ndarray] = []
    sep = np.array([_SENTINEL], dtype=np.int32)
    for arr in symbol_arrays:
        parts.append(arr)
        parts.append(sep)
    return np.concatenate(parts) if parts else sep.copy()


def _pair_counts(buf: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Counts of adjacent pairs in a packed buffer, keyed by pair code."""
    if buf.size < 2:
        return (np.empty(0, dtype=np.int64),) * 2
    left = buf[:-1].astype(np.int64)
    right = buf[1:].astype(np.int64)
    valid = (left >= 0) & (right >= 0)
    codes = left[valid] * _CODE_K + right[valid]
    return np.unique(codes, return_counts=True)


def train_bpe(streams: Iterable, max_vocab: int,
              weights: Sequence[float] | None = None,
              base_size: int = 255) -> MergeTable:
    """Train a merge table on symbol streams.

    ``weights`` assigns one mixture weight per stream (default 1.0). The
    returned table has at most ``max_vocab`` total ids.
    """
    arrays = [_stream_symbols(s) for s in streams]
    if not arrays:
        raise EmptyCorpusError("cannot train BPE on an empty stream collection")
    if max_vocab < base_size:
        raise ValueError(
            f"max_vocab ({max_vocab}) must be >= base_size ({base_size})")
    for arr in arrays:
        _check_base_symbols(arr, base_size)
    if weights is None:
        weights = [1.0] * len(arrays)
    if len(weights) != len(arrays):
        raise ValueError(
            f"{len(weights)} weights for {len(arrays)} streams")

    # pack streams into one buffer per distinct weight (first-seen order)
    buffers: dict[float, np.ndarray] = {}
    grouped: dict[float, list[np.ndarray]] = {}
    for arr, w in zip(arrays, weights):
        grouped.setdefault(float(w), []).append(arr)
    for w, group in grouped.items():
        buffers[w] = _pack(group)

    merges: list[tuple[int, int]] = []
    while base_size + len(merges) < max_vocab:
        per_group = [(w,) + _pair_counts(buf) for w, buf in buffers.items()]
        all_codes = np.concatenate([codes for _, codes, _ in per_group])
        if all_codes.size == 0:
            break
        all_raw = np.concatenate([counts for _, _, counts in per_group])
        all_ranked = np.concatenate(
            [w * counts for w, _, counts in per_group])
        uniq, inverse = np.unique(all_codes, return_inverse=True)
        raw = np.bincount(inverse, weights=all_raw.astype(np.float64))
        ranked = np.bincount(inverse, weights=all_ranked)
        eligible = raw >= 2
        if not eligible.any():
            break
        # uniq is sorted, so the first maximum is the smallest (left, right)
        candidates = np.nonzero(eligible)[0]
        best_code = int(uniq[candidates[np.argmax(ranked[candidates])]])
        left = int(best_code // _CODE_K)
        right = int(best_code % _CODE_K)
        new_id = base_size + len(merges)
        merges.append((left, right))
        for w in buffers:
            buffers[w] = _kernels.apply_merge(buffers[w], left, right, new_id)
    return MergeTable(base_size=base_size, merges=tuple(merges))


def bpe_encode(stream, table: MergeTable) -> TokenSequence:
    """Losslessly compress a base-symbol stream against a merge table."""
    symbols = _stream_symbols(stream)
    _check_base_symbols(symbols, table.base_size)
    if not table.merges:
        return TokenSequence(symbols)
    encoded = _kernels.encode_stream(symbols, table.merge_array(),
                                     table.base_size)
    return TokenSequence(encoded)


def bpe_encode_batch(streams, table: MergeTable) -> list[TokenSequence]:
    """Encode many streams with one pass per merge over a packed buffer.

    Token-for-token identical to calling bpe_encode on each stream: merges
    never apply across the sentinel separators, and each segment sees the
    same left-to-right greedy scan it would see alone.
    """
    arrays = [_stream_symbols(s) for s in streams]
    if not arrays:
        return []
    for arr in arrays:
        _check_base_symbols(arr, table.base_size)
    if not table.merges:
        return [TokenSequence(arr) for arr in arrays]
    buf = _kernels.encode_stream(_pack(arrays), table.merge_array(),
                                 table.base_size)
    out = []
    start = 0
    for cut in np.nonzero(buf == _SENTINEL)[0]:
        out.append(TokenSequence(buf[start:cut].copy()))
        start = int(cut) + 1
    return out


def bpe_decode(tokens: TokenSequence, table: MergeTable) -> np.ndarray:
    """Expand tokens back to base symbols; exact inverse of bpe_encode."""
    ids = tokens.tokens if isinstance(tokens, TokenSequence) else np.ascontiguousarray(tokens, dtype=np.int32)
    if ids.size == 0:
        return np.empty(0, dtype=np.int32)
    lo, hi = int(ids.min()), int(ids.max())
    if lo < 0 or hi >= table.vocab_size:
        raise TokenOutOfRangeError(
            f"token ids must lie in [0, {table.vocab_size}), "
            f"found range [{lo}, {hi}]")
    exp = table.expansions()
    parts = [ids[i:i + 1] if ids[i] < table.base_size
             else exp[ids[i] - table.base_size]
             for i in range(ids.size)]
    return np.concatenate(parts).astype(np.int32)
