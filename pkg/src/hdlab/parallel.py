"""Order-preserving replicate execution with optional thread workers.

Results always come back sorted by replicate index and every replicate
draws from its own keyed stream, so the worker count never changes any
output bit.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

T = TypeVar("T")


def map_replicates(fn: Callable[[int], T], count: int, threads: int = 1) -> list[T]:
    if count < 1:
        raise ValueError(f"replicate count must be >= 1, got {count}")

    def run(index: int) -> T:
        try:
            return fn(index)
        except Exception as exc:
            try:
                raise type(exc)(f"replicate {index}: {exc}") from exc
            except TypeError:
                raise RuntimeError(f"replicate {index}: {exc!r}") from exc

    if threads <= 1:
        return [run(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, range(count)))
