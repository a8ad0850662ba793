"""Worker-count policy.

BSDLAB_THREADS caps the number of worker threads used by the scan and
simulation drivers; 0 or unset means "one per CPU".  Results never depend on
the worker count: work items are written to disjoint, index-addressed slots
and merged in a fixed order.
"""

import os

from .errors import ConfigurationError

_ENV = "BSDLAB_THREADS"


def worker_count() -> int:
    """Number of worker threads to use for parallel sections."""
    raw = os.environ.get(_ENV, "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigurationError(f"{_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigurationError(f"{_ENV} must be >= 0, got {n}")
    if n == 0:
        return os.cpu_count() or 1
    return n
