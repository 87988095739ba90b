import os
from concurrent.futures import ThreadPoolExecutor


def worker_count():
    """Thread cap from ``GRANDMORREY_THREADS`` (default: CPU count)."""
    cpus = os.cpu_count() or 1
    raw = os.environ.get("GRANDMORREY_THREADS")
    if not raw:
        return cpus
    try:
        return max(1, min(int(raw), cpus))
    except ValueError:
        return cpus


def pmap(func, items):
    """Order-preserving map; runs on a thread pool when more than one worker is allowed."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
