"""
Helpers shared by the command line tools and the searches.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar

from ..substitution import Substitution, parse_substitution

logger = logging.getLogger(__name__)

__all__ = [
    "run_ordered",
    "read_substitution_file",
]

T = TypeVar("T")
R = TypeVar("R")


def run_ordered(fn: Callable[[T], R], items: Iterable[T],
                jobs: int = 1) -> Iterator[R]:
    """
    Yield fn(item) for every item, in input order. With more than one job
    the calls run on a thread pool; a consumer that stops early cancels the
    calls that have not started, and errors of calls it never reached are
    not raised.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        for item in items:
            yield fn(item)
        return
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, item) for item in items]
        try:
            for future in futures:
                yield future.result()
        finally:
            for future in futures:
                future.cancel()


def read_substitution_file(path: str) -> Substitution:
    """
    Read and parse a substitution file.

    Raises:
        FileNotFoundError: If the path does not exist.
        SubstitutionParseError: If the contents are malformed.
    """
    path = os.path.abspath(path)
    with open(path, "r") as f:
        substitution = parse_substitution(f.read())
    logger.info('Substitution "%s" loaded: %d letters, length %d.',
                path, substitution.size, substitution.r)
    return substitution
