"""Thread-safe memo tables, one family per Cartan datum."""

import threading


class Memo:
    """Insert-if-absent table: concurrent fills of one key all observe the first stored value."""

    __slots__ = ("_data", "_lock")

    def __init__(self):
        self._data = {}
        self._lock = threading.Lock()

    def get(self, key, factory):
        try:
            return self._data[key]
        except KeyError:
            pass
        value = factory()
        with self._lock:
            return self._data.setdefault(key, value)

    def __contains__(self, key):
        return key in self._data

    def __len__(self):
        return len(self._data)

    def clear(self):
        with self._lock:
            self._data.clear()


_registry = {}
_registry_lock = threading.Lock()


def table(datum, name):
    key = (datum, name)
    try:
        return _registry[key]
    except KeyError:
        with _registry_lock:
            return _registry.setdefault(key, Memo())


def clear_all():
    with _registry_lock:
        _registry.clear()
