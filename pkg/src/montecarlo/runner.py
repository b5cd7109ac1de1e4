"""
src/montecarlo/runner.py

Split run indices into chunks and evaluate them serially or in worker processes.
Results come back in chunk order, so the reduction is the same either way.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, Tuple, TypeVar

import structlog

logger = structlog.get_logger(__name__)

T = TypeVar("T")
Chunk = Tuple[int, int, int]  # (chunk index, first run, end run)


def chunks(runs: int, size: int) -> List[Chunk]:
    if runs < 1 or size < 1:
        raise ValueError(f"runs and chunk size must be positive, got {runs}, {size}")
    return [
        (i, start, min(start + size, runs))
        for i, start in enumerate(range(0, runs, size))
    ]


def run_chunks(
    func: Callable[..., T], jobs: Sequence[tuple], workers: int = 1
) -> List[T]:
    """Call func(*job) for every job, in a pool when workers > 1"""
    if workers <= 1 or len(jobs) <= 1:
        results = []
        for number, job in enumerate(jobs, start=1):
            results.append(func(*job))
            logger.debug("chunk_done", chunk=number, chunks=len(jobs))
        return results

    logger.info("worker_pool_started", workers=workers, chunks=len(jobs))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, *zip(*jobs)))
