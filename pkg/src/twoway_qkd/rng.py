"""Counter-based uniform draws keyed by (master seed, round index, slot).

Every random decision in a round reads a fixed slot, so a round's draws do
not depend on which branch the protocol took, on other rounds, or on how
rounds were split across workers. The mixer is the SplitMix64 finalizer
applied twice: once to the seed, once to the combined counter.
"""
from __future__ import annotations

import enum

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TO_UNIT = 2.0 ** -53


class Slot(enum.IntEnum):
    ATTACK = 0
    MODE = 1
    PREP_BASIS = 2
    PREP_BIT = 3
    ALICE_OP = 4
    ALICE_BASIS = 5
    ALICE_MEASURE = 6
    BOB_MEASURE = 7
    BOB_BASIS = 8
    BELL_MEASURE = 9
    KEY_COIN = 10
    EVE_BASIS = 11
    EVE_FWD_MEASURE = 12
    EVE_BWD_MEASURE = 13
    HOME_MEASURE = 14
    SPARE = 15


N_SLOTS = len(Slot)


def mix64(x: int) -> int:
    x &= MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def seed_key(seed: int) -> int:
    return mix64((seed & MASK64) + GOLDEN)


def uniform(seed: int, round_index: int, slot: int) -> float:
    """Scalar reference for one draw in [0, 1)."""
    counter = (round_index * N_SLOTS + int(slot)) & MASK64
    x = mix64(seed_key(seed) ^ ((counter + 1) * GOLDEN & MASK64))
    return (x >> 11) * _TO_UNIT


def _mix64_np(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))


def uniform_block(seed: int, start: int, stop: int) -> np.ndarray:
    """Draws for rounds [start, stop) as an array of shape (stop - start, N_SLOTS).

    Bit-identical to calling `uniform` for each (round, slot).
    """
    key = np.uint64(seed_key(seed))
    counters = np.arange(start * N_SLOTS, stop * N_SLOTS, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = _mix64_np(key ^ ((counters + np.uint64(1)) * np.uint64(GOLDEN)))
    return ((x >> np.uint64(11)).astype(np.float64) * _TO_UNIT).reshape(-1, N_SLOTS)


def derive_seed(master_seed: int, index: int) -> int:
    """Sub-seed for the index-th point of a sweep."""
    return mix64(seed_key(master_seed) ^ mix64(index + 1))
