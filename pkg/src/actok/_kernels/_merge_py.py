"""numpy fallback for the merge kernels.

Semantics (shared with the compiled backend): one merge pass replaces
greedy left-to-right non-overlapping occurrences of the pair (a, b) with
z. Overlap only matters when a == b; there the first, third, ... match of
each run is taken. Negative entries are stream separators and never
participate in a pair.
"""

from __future__ import annotations

import numpy as np


def apply_merge(buf: np.ndarray, a: int, b: int, z: int) -> np.ndarray:
    """Return a new buffer with (a, b) -> z applied left-to-right."""
    buf = np.asarray(buf, dtype=np.int32)
    if buf.size < 2:
        return buf.copy()
    pos = np.nonzero((buf[:-1] == a) & (buf[1:] == b))[0]
    if pos.size == 0:
        return buf.copy()
    if a == b and pos.size > 1:
        # keep even offsets within each run of consecutive match positions
        run_start = np.concatenate(([True], np.diff(pos) > 1))
        starts = pos[run_start]
        labels = np.cumsum(run_start) - 1
        pos = pos[(pos - starts[labels]) % 2 == 0]
    out = buf.copy()
    out[pos] = z
    keep = np.ones(buf.size, dtype=bool)
    keep[pos + 1] = False
    return out[keep]


def encode_stream(stream: np.ndarray, merges: np.ndarray, base_size: int) -> np.ndarray:
    """Apply every merge in training order to one stream.

    ``merges`` is an (R, 2) int array; merge r rewrites pair
    (merges[r, 0], merges[r, 1]) to id base_size + r.
    """
    buf = np.asarray(stream, dtype=np.int32)
    for r in range(merges.shape[0]):
        buf = apply_merge(buf, int(merges[r, 0]), int(merges[r, 1]),
                          base_size + r)
    return buf
