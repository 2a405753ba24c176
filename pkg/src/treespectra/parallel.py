"""Order-preserving batch execution."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from .config import ToolkitSettings


logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: Optional[int] = None) -> int:
    """Explicit value wins; otherwise TREESPECTRA_THREADS."""
    if threads is not None:
        return max(1, int(threads))
    return ToolkitSettings.from_env().threads


def parallel_map(func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    Map ``func`` over ``items`` with results in input order.

    Args:
        func: Pure function applied to each item
        items: Work items
        threads: Worker cap; falls back to the environment setting

    Returns:
        List of results aligned with ``items``
    """
    work = list(items)
    workers = min(resolve_threads(threads), max(1, len(work)))
    if workers == 1:
        return [func(item) for item in work]
    logger.debug(f"Dispatching {len(work)} items over {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, work))
