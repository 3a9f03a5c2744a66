from concurrent.futures import ThreadPoolExecutor


def ordered_map(fn, items, threads):
    """
    Apply fn to every item, in parallel when threads > 1; results keep the input order.

    :param fn: callable
    :param items: iterable
    :param threads: int worker cap
    :return: list
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))
