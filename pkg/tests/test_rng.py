import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from twoway_qkd.rng import N_SLOTS, derive_seed, uniform, uniform_block

seeds = st.integers(0, 2**64 - 1)


@given(seeds, st.integers(0, 10**9))
def test_block_matches_scalar(seed, start):
    block = uniform_block(seed, start, start + 3)
    for i in range(3):
        for slot in range(N_SLOTS):
            assert block[i, slot] == uniform(seed, start + i, slot)


@given(seeds, st.integers(1, 500), st.integers(1, 499))
def test_blocks_compose(seed, n, cut):
    cut = min(cut, n)
    whole = uniform_block(seed, 0, n)
    parts = np.vstack([uniform_block(seed, 0, cut), uniform_block(seed, cut, n)])
    assert np.array_equal(whole, parts)


def test_range_and_uniformity():
    u = uniform_block(5, 0, 50_000).ravel()
    assert u.min() >= 0.0 and u.max() < 1.0
    counts, _ = np.histogram(u, bins=10, range=(0, 1))
    expected = u.size / 10
    # 6-sigma multinomial band per bin
    assert np.all(np.abs(counts - expected) < 6 * np.sqrt(expected))


def test_seeds_decorrelated():
    a = uniform_block(1, 0, 20_000).ravel()
    b = uniform_block(2, 0, 20_000).ravel()
    assert abs(np.corrcoef(a, b)[0, 1]) < 6 / np.sqrt(a.size)


def test_derive_seed_distinct():
    subs = {derive_seed(7, i) for i in range(1000)}
    assert len(subs) == 1000
    assert all(0 <= s < 2**64 for s in subs)
