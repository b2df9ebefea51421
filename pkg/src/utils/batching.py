"""
Deterministic batched random work on a thread pool.

Each batch draws from its own substream seeded by (seed, batch index), and
results come back in batch order, so output never depends on scheduling.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

import numpy as np

from ..config.settings import Config

T = TypeVar("T")


def batch_sizes(total: int, batch: int) -> List[int]:
    """Split ``total`` items into chunks of at most ``batch``."""
    full, rest = divmod(int(total), int(batch))
    return [batch] * full + ([rest] if rest else [])


def substream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def map_batches(
    task: Callable[[int, int], T],
    sizes: List[int],
    workers: Optional[int] = None,
    name: str = "batch_",
) -> List[T]:
    """
    Run ``task(batch_index, size)`` for every batch.

    Args:
        task: Work for one batch
        sizes: Batch sizes in order
        workers: Thread count, defaults to Config.WORKERS
        name: Thread name prefix

    Returns:
        Results in batch order
    """
    workers = workers or Config.WORKERS
    if workers == 1 or len(sizes) <= 1:
        return [task(index, size) for index, size in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix=name) as executor:
        return list(executor.map(task, range(len(sizes)), sizes))
