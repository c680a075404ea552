"""Seed derivation and deterministic chunked Monte Carlo.

Every random stream is a pure function of (seed, names..., chunk index), so
results do not depend on how chunks are scheduled across threads.
"""

from __future__ import annotations

import zlib
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

CHUNK = 1 << 16

_threads = 1


def set_threads(n: int) -> None:
    global _threads
    _threads = max(1, int(n))


def get_threads() -> int:
    return _threads


def _name_key(name) -> int:
    if isinstance(name, (int, np.integer)):
        return int(name) & 0xFFFFFFFF
    return zlib.crc32(str(name).encode())


def seed_sequence(seed: int, *names) -> np.random.SeedSequence:
    words = [int(seed) & 0xFFFFFFFF, (int(seed) >> 32) & 0xFFFFFFFF] + [_name_key(n) for n in names]
    return np.random.SeedSequence(words)


def derive_rng(seed: int, *names) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(seed, *names))


def derive_seed(seed: int, *names) -> int:
    lo, hi = seed_sequence(seed, *names).generate_state(2, np.uint32)
    return int(lo) | int(hi) << 32


def chunked(total: int, seed: int, names: tuple, work: Callable[[int, np.random.Generator], object],
            chunk: int = CHUNK, threads: int | None = None) -> list:
    """Run ``work(size, rng)`` over fixed-size chunks; results in chunk order."""
    sizes = [chunk] * (total // chunk)
    if total % chunk:
        sizes.append(total % chunk)
    jobs = [(s, derive_rng(seed, *names, "chunk", i)) for i, s in enumerate(sizes)]
    nthreads = threads or _threads
    if nthreads <= 1 or len(jobs) <= 1:
        return [work(s, r) for s, r in jobs]
    with ThreadPoolExecutor(max_workers=nthreads) as ex:
        return list(ex.map(lambda job: work(*job), jobs))
