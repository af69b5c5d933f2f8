import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from panharmonia.rng import RngStream, gaussian_pairs, philox4x64, stream_words, to_unit_interval


@given(st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1))
@settings(max_examples=30, deadline=None)
def test_raw_words_match_numpy_philox(seed, index):
    s = RngStream(seed, index)
    ref = s.generator().bit_generator.random_raw(23)
    assert np.array_equal(s.raw(np.arange(23)), ref)


def test_philox_broadcasts():
    ctr = np.zeros((5, 4), dtype=np.uint64)
    ctr[:, 0] = np.arange(5)
    key = np.array([7, 9], dtype=np.uint64)
    batch = philox4x64(ctr, key)
    rows = np.stack([philox4x64(c, key) for c in ctr])
    assert np.array_equal(batch, rows)


def test_stream_words_are_per_stream():
    ids = np.array([0, 5, 11], dtype=np.uint64)
    all_words = stream_words(3, ids, 2, 1, nblocks=2)
    for i, sid in enumerate(ids):
        assert np.array_equal(all_words[i], stream_words(3, np.array([sid]), 2, 1, nblocks=2)[0])


def test_unit_interval_open():
    bits = np.array([0, 2**64 - 1], dtype=np.uint64)
    u = to_unit_interval(bits)
    assert 0 < u[0] < 1e-15
    assert 1 - 1e-15 < u[1] < 1


def test_gaussian_moments():
    words = stream_words(0, np.arange(50_000, dtype=np.uint64), 0, 0, nblocks=1)
    z = gaussian_pairs(words).ravel()
    assert abs(z.mean()) < 4 / np.sqrt(z.size)
    assert abs(z.var() - 1) < 4 * np.sqrt(2 / z.size)


def test_seed_validation():
    with pytest.raises(ValueError):
        RngStream(-1, 0)
    with pytest.raises(ValueError):
        RngStream(0, 2**64)


def test_substream_keeps_seed():
    s = RngStream(4, 1).substream(9)
    assert (s.master_seed, s.stream_index) == (4, 9)
