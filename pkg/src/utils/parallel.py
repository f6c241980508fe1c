"""Order preserving thread pool helper for embarrassingly parallel sampling."""
import logging
from collections.abc import Callable
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from django.conf import settings

logger = logging.getLogger("monoforge")

T = TypeVar("T")
R = TypeVar("R")


def worker_count(threads: int | None = None) -> int:
    """Return the number of worker threads to use, capped by MONO_FORGE_THREADS."""
    cap = max(1, int(settings.MONO_FORGE_THREADS))
    if threads is None:
        return cap
    return max(1, min(threads, cap))


def parallel_map(func: Callable[[T], R], items: Iterable[T], *, threads: int | None = None) -> list[R]:
    """Map func over items, returning results in input order.

    Args:
        func: The function to call for every item
        items: The inputs
        threads: Optional upper bound on worker threads
    Returns:
        A list with one result per item, in the order of the inputs
    """
    work = list(items)
    workers = worker_count(threads)
    if workers == 1 or len(work) < 2:  # noqa: PLR2004
        return [func(item) for item in work]
    logger.debug(f"mapping {len(work)} items over {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, work))
