"""Deterministic random-stream derivation.

Every stochastic routine in this package draws from a Generator obtained
here.  Streams are derived from a single master seed through SeedSequence
spawn keys, so any (trial, role) pair is reproducible in isolation without
replaying earlier trials.  The role string is hashed with crc32 to keep the
spawn key a plain tuple of ints.
"""

from __future__ import annotations

import zlib

import numpy as np


def stream(master_seed: int, trial: int = 0, role: str = "main") -> np.random.Generator:
    """Return the PCG64 generator for one (trial, role) slot.

    Distinct roles under the same trial give statistically independent
    streams; so do distinct trials under the same role.
    """
    key = (trial, zlib.crc32(role.encode("utf-8")))
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=key)
    return np.random.Generator(np.random.PCG64(seq))


def child_seeds(master_seed: int, trial: int, role: str, count: int) -> np.ndarray:
    """Derive `count` independent 32-bit integer seeds from one slot."""
    key = (trial, zlib.crc32(role.encode("utf-8")))
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=key)
    return seq.generate_state(count)
