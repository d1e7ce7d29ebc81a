"""Thread-pool helper with deterministic ordered merging.

Worker count resolution: explicit argument, then the PC2_THREADS
environment variable, then the machine's CPU count.  Results are always
merged in submission order, so parallel and serial runs agree bit for bit.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def resolve_threads(threads: int | None = None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("PC2_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def ordered_map(fn, items, threads: int | None = None) -> list:
    """Apply ``fn`` to items, in parallel when beneficial, preserving order."""
    items = list(items)
    n = resolve_threads(threads)
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
