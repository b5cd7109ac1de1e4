"""
src/montecarlo/rng.py

Independent random streams per run.

Every stream is a Philox counter-based generator keyed by the user seed and a
(purpose, index) spawn key, so a run draws the same numbers whether it executes
serially or in a worker process.
"""

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    ATTACK = 0
    WARMUP = 1
    WINDOW = 2
    TREE = 3
    RACE = 4


def stream(seed: int, purpose: Stream, index: int = 0) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(int(purpose), int(index)))
    return np.random.Generator(np.random.Philox(sequence))


def run_generator(seed: int, run: int) -> np.random.Generator:
    return stream(seed, Stream.ATTACK, run)


def batch_generator(seed: int, batch: int) -> np.random.Generator:
    return stream(seed, Stream.WARMUP, batch)
