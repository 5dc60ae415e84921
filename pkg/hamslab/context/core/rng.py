"""
Seeded random streams.

A stream is addressed by (seed, stream id). numpy's SeedSequence hashes the
pair into independent PCG64 states, so chain r simply uses stream id r.
"""

from typing import List

import numpy as np

from hamslab.models import RngStream


def generator(stream: RngStream) -> np.random.Generator:
    """Generator reproducing the sequence of ``stream``."""
    seq = np.random.SeedSequence(stream.seed, spawn_key=(stream.stream,))
    return np.random.Generator(np.random.PCG64(seq))


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    return generator(RngStream(seed, stream))


def spawn_streams(seed: int, count: int, offset: int = 0) -> List[RngStream]:
    """``count`` consecutive streams under one seed."""
    return [RngStream(seed, offset + i) for i in range(count)]
