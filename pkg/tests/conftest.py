import numpy as np
import pytest

from actok import ActionChunk, ChunkCorpus


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


def make_chunk(values, frequency_hz=None) -> ActionChunk:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1:  # 1-D input means a single-dimension time series
        arr = arr[:, None]
    if frequency_hz is None:
        frequency_hz = float(arr.shape[0])
    return ActionChunk(arr, arr.shape[0], arr.shape[1], frequency_hz)


def make_corpus(chunk_values, name="test", weight=1.0) -> ChunkCorpus:
    return ChunkCorpus(tuple(make_chunk(v) for v in chunk_values),
                       name=name, weight=weight)
