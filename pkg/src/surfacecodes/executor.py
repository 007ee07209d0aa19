"""Thread pool shared by the distance engines."""

from __future__ import annotations

import logging
import threading
from collections import deque
from collections.abc import Callable, Iterable
from concurrent.futures import Future, ThreadPoolExecutor
from typing import Any, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")

_EXHAUSTED = object()


class WorkerPool:
    """Runs independent search blocks on worker threads.

    Results always come back in submission order, so the caller's reduction
    does not depend on the number of workers. With one worker everything runs
    inline on the calling thread.
    """

    def __init__(self, workers: int = 1) -> None:
        self._workers = max(1, workers)
        self._shutdown_event = threading.Event()
        self._executor: ThreadPoolExecutor | None = None

    @property
    def workers(self) -> int:
        return self._workers

    @property
    def should_stop(self) -> bool:
        return self._shutdown_event.is_set()

    def request_shutdown(self) -> None:
        """Ask running searches to stop after the current block."""
        self._shutdown_event.set()

    def map_ordered(self, func: Callable[[Any], T], items: Iterable[Any]) -> list[T]:
        """Apply func to every item; stops submitting once shutdown is requested.

        At most two blocks per worker are queued or running at any time. The
        returned list is a prefix of the full result list when the pool was
        stopped early. The first exception (in submission order) is re-raised.
        """
        if self._workers == 1:
            results: list[T] = []
            for item in items:
                if self._shutdown_event.is_set():
                    break
                results.append(func(item))
            return results

        window = 2 * self._workers
        source = iter(items)
        with ThreadPoolExecutor(max_workers=self._workers) as executor:
            self._executor = executor
            pending: deque[Future] = deque()
            ordered: list[T] = []
            try:
                while True:
                    while len(pending) < window and not self._shutdown_event.is_set():
                        item = next(source, _EXHAUSTED)
                        if item is _EXHAUSTED:
                            break
                        try:
                            pending.append(executor.submit(func, item))
                        except RuntimeError:
                            # shut down from another thread between the check and submit
                            if not self._shutdown_event.is_set():
                                raise
                            break
                    if not pending:
                        return ordered
                    future = pending.popleft()
                    if future.cancelled():
                        return ordered
                    ordered.append(future.result())
            except Exception as e:
                logger.error("Search block failed: %s", e)
                executor.shutdown(wait=False, cancel_futures=True)
                raise
            finally:
                self._executor = None

    def shutdown(self) -> None:
        """Stop now, cancelling queued blocks."""
        self._shutdown_event.set()
        if self._executor:
            self._executor.shutdown(wait=False, cancel_futures=True)
