"""
Thread-pool executor for independent evolution runs
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List, Optional, Sequence, Tuple

from core.config import settings
from core.logging import logger


class SweepExecutor:
    """Runs independent jobs concurrently and returns results in submission order"""

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or settings.MAX_WORKERS

    def map(self, fn: Callable[..., Any], jobs: Sequence[Tuple[Any, ...]]) -> List[Any]:
        """Call fn(*job) for every job; the first exception propagates"""
        if not jobs:
            return []
        workers = min(self.max_workers, len(jobs))
        logger.debug("Sweep started", n_jobs=len(jobs), workers=workers)
        if workers == 1:
            return [fn(*job) for job in jobs]
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="hyperfoil") as pool:
            futures = [pool.submit(fn, *job) for job in jobs]
            results = [f.result() for f in futures]
        logger.debug("Sweep finished", n_jobs=len(jobs))
        return results


# Global executor instance
executor = SweepExecutor()
