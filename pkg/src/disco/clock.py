"""Injectable time sources. Timestamps are float seconds."""

import threading
import time


class SystemClock:
    def now(self) -> float:
        return time.time()


class LogicalClock:
    """Manually advanced clock for deterministic TTL tests."""

    def __init__(self, start: float = 0.0):
        self._now = float(start)
        self._lock = threading.Lock()

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> float:
        if seconds < 0:
            raise ValueError("logical clock cannot go backwards")
        with self._lock:
            self._now += seconds
            return self._now

    def set(self, when: float) -> None:
        with self._lock:
            if when < self._now:
                raise ValueError("logical clock cannot go backwards")
            self._now = float(when)
