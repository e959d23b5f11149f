"""Small shared helpers: deterministic parallel maps and seed derivation."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def run_mapped(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Map ``fn`` over ``items`` preserving order, optionally on a thread pool."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def spawn_seed(seed: int, *indices: int) -> int:
    """Deterministic sub-seed derived from a base seed and index path."""
    entropy: Sequence[int] = (int(seed), *[int(i) for i in indices])
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def rng_for(seed: int, *indices: int) -> np.random.Generator:
    """Independent generator for the given seed and index path."""
    return np.random.default_rng(np.random.SeedSequence((int(seed), *[int(i) for i in indices])))
