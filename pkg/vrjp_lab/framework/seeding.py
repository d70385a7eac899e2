"""
Seeding: independent, order-free random streams from one master seed

Each job gets a counter-based Philox generator keyed by (master seed, job
key), so a stream never depends on how many other jobs exist or on the
order in which a scheduler runs them.
"""

import zlib

import numpy as np


def _key_part(part: int | str) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode())
    return int(part)


def stream(seed: int, *key: int | str) -> np.random.Generator:
    """Generator for the job identified by `key` under `seed`.

    Args:
        seed: Master seed
        *key: Job path, e.g. ("chain", 3) or ("vrjp", batch_index)

    Returns:
        numpy Generator backed by Philox
    """
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(_key_part(p) for p in key))
    return np.random.Generator(np.random.Philox(sequence))
