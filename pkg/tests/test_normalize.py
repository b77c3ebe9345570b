import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from actok import (
    DimMismatchError,
    EmptyCorpusError,
    NormalizationStats,
    apply_normalization,
    fit_normalization,
    invert_normalization,
)
from actok.normalize import Q_HIGH_PCT, Q_LOW_PCT

from conftest import make_chunk, make_corpus
from oracles import normalize_naive, percentile_linear_naive


def test_percentile_constants():
    assert (Q_LOW_PCT, Q_HIGH_PCT) == (1.0, 99.0)


def test_fit_on_integer_ramp():
    # 0..100 pooled: the 1st/99th percentiles land exactly on 1 and 99
    corpus = make_corpus([np.arange(101.0)[:, None]])
    stats = fit_normalization(corpus)
    assert stats.q_low[0] == 1.0
    assert stats.q_high[0] == 99.0


def test_fit_interpolates_between_order_statistics():
    vals = [0.0, 1.0, 2.0, 3.0, 10.0]
    corpus = make_corpus([np.array(vals)[:, None]])
    stats = fit_normalization(corpus)
    # frozen from the index p*(n-1) linear-interpolation rule
    assert stats.q_low[0] == pytest.approx(0.04, abs=1e-12)
    assert stats.q_high[0] == pytest.approx(9.72, abs=1e-12)
    assert stats.q_low[0] == pytest.approx(
        percentile_linear_naive(vals, 1.0), abs=1e-12)
    assert stats.q_high[0] == pytest.approx(
        percentile_linear_naive(vals, 99.0), abs=1e-12)


def test_fit_pools_across_chunks_per_dimension(rng):
    chunks = [rng.normal(size=(20, 3)) for _ in range(5)]
    stats = fit_normalization(make_corpus(chunks))
    pooled = np.concatenate(chunks, axis=0)
    for i in range(3):
        assert stats.q_low[i] == pytest.approx(
            percentile_linear_naive(list(pooled[:, i]), 1.0), rel=1e-12)
        assert stats.q_high[i] == pytest.approx(
            percentile_linear_naive(list(pooled[:, i]), 99.0), rel=1e-12)


def test_fit_empty_corpus_raises():
    with pytest.raises(EmptyCorpusError):
        fit_normalization(make_corpus([]))


def test_apply_maps_band_edges_to_unit_interval():
    stats = NormalizationStats(q_low=np.array([-2.0]), q_high=np.array([6.0]))
    chunk = make_chunk([[-2.0], [2.0], [6.0]])
    out = apply_normalization(chunk, stats)
    assert out.values[:, 0] == pytest.approx([-1.0, 0.0, 1.0])


def test_apply_does_not_clip_outside_band():
    stats = NormalizationStats(q_low=np.array([0.0]), q_high=np.array([1.0]))
    out = apply_normalization(make_chunk([[-1.0], [2.0]]), stats)
    assert out.values[:, 0] == pytest.approx([-3.0, 3.0])


def test_apply_matches_reference_loops(rng):
    values = rng.normal(size=(13, 4))
    lo = values.min(axis=0) - 0.1
    hi = values.max(axis=0) + 0.2
    stats = NormalizationStats(q_low=lo, q_high=hi)
    out = apply_normalization(make_chunk(values), stats)
    np.testing.assert_allclose(out.values, normalize_naive(values, lo, hi),
                               atol=1e-14)


def test_degenerate_dimension_maps_to_zero_and_back():
    stats = NormalizationStats(q_low=np.array([3.0, 0.0]),
                               q_high=np.array([3.0, 1.0]))
    chunk = make_chunk([[3.0, 0.5], [3.0, 1.0]])
    normalized = apply_normalization(chunk, stats)
    assert (normalized.values[:, 0] == 0.0).all()
    restored = invert_normalization(normalized, stats)
    assert (restored.values[:, 0] == 3.0).all()


def test_dim_mismatch():
    stats = NormalizationStats(q_low=np.zeros(2), q_high=np.ones(2))
    with pytest.raises(DimMismatchError):
        apply_normalization(make_chunk([[1.0]]), stats)
    with pytest.raises(DimMismatchError):
        invert_normalization(make_chunk([[1.0]]), stats)


def test_stats_validation():
    with pytest.raises(ValueError):
        NormalizationStats(q_low=np.array([1.0]), q_high=np.array([0.0]))
    with pytest.raises(DimMismatchError):
        NormalizationStats(q_low=np.zeros(2), q_high=np.zeros(3))


@settings(deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=40),
       st.floats(-100.0, 100.0), st.floats(1e-6, 100.0))
def test_round_trip_is_identity(values, lo, span):
    stats = NormalizationStats(q_low=np.array([lo]),
                               q_high=np.array([lo + span]))
    chunk = make_chunk(np.array(values)[:, None])
    restored = invert_normalization(apply_normalization(chunk, stats), stats)
    np.testing.assert_allclose(restored.values, chunk.values,
                               rtol=1e-9, atol=1e-9)


def test_metadata_passes_through():
    stats = NormalizationStats(q_low=np.array([0.0]), q_high=np.array([1.0]))
    chunk = make_chunk([[0.5], [0.25]], frequency_hz=7.0)
    out = apply_normalization(chunk, stats)
    assert out.frequency_hz == 7.0
    assert (out.horizon, out.dim) == (2, 1)
