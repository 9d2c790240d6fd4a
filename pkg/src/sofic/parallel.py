"""
order-preserving thread map

Results come back in input order, so every caller gets outputs that do not
depend on how many workers ran.
"""

from __future__ import annotations
import os
import typing as T
from concurrent.futures import ThreadPoolExecutor

_T = T.TypeVar("_T")
_R = T.TypeVar("_R")


def get_cpu_count() -> int:
    """get a physical CPU count

    Returns
    -------
    count: int
        detect number of physical CPU
    """

    import psutil

    max_cpu = psutil.cpu_count(logical=False)
    if max_cpu is None:
        max_cpu = psutil.cpu_count()
    if max_cpu is None:
        max_cpu = os.cpu_count() or 1

    return max(max_cpu, 1)


def ordered_map(
    func: T.Callable[[_T], _R], items: T.Iterable[_T], workers: int = None
) -> list[_R]:
    """map func over items with a thread pool, preserving input order"""

    items = list(items)
    if workers is None:
        from .config import worker_count

        workers = worker_count()

    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]

    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))
