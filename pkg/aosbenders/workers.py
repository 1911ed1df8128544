'''
Thread pool used for independent solves (scenarios, candidates, masks).

AOS_THREADS caps the number of worker threads, 1 disables threading.
Results always come back in input order.
'''
import os
from concurrent.futures import ThreadPoolExecutor


def max_threads():
    raw = os.environ.get('AOS_THREADS')
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def thread_map(func, items, name='aos-worker'):
    items = list(items)
    threads = min(max_threads(), len(items))
    if threads <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads, thread_name_prefix=name) as pool:
        return list(pool.map(func, items))
