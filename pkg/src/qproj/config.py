"""Run-level configuration: the height guard shared by every truncated computation."""

import os
import threading
from contextlib import contextmanager

from .errors import HeightLimit

DEFAULT_HEIGHT_LIMIT = 6
ENV_VAR = "QPROJ_HEIGHT_LIMIT"

_lock = threading.Lock()
_override = None


def height_limit():
    if _override is not None:
        return _override
    raw = os.environ.get(ENV_VAR)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise HeightLimit(f"{ENV_VAR}={raw!r} is not an integer") from None
    return DEFAULT_HEIGHT_LIMIT


def set_height_limit(limit):
    """Set the process-wide limit; ``None`` restores env/default lookup."""
    global _override
    with _lock:
        _override = None if limit is None else int(limit)


@contextmanager
def limit_heights(limit):
    previous = _override
    set_height_limit(limit)
    try:
        yield
    finally:
        set_height_limit(previous)


def check_height(height, what="height"):
    limit = height_limit()
    if height > limit:
        raise HeightLimit(f"{what} {height} exceeds the configured limit {limit}")
