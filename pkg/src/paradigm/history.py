"""Bounded, newest-first record of substitution queries."""

from __future__ import annotations

import threading
from collections import deque

from .substitute import TwoDimensionalText

DEFAULT_CAPACITY = 10


class QueryHistory:
    """Ring of the most recent analyses; push evicts the oldest.

    push takes an internal lock (the service may push from many request
    handlers); reads take the same lock briefly to snapshot.
    """

    def __init__(self, capacity: int = DEFAULT_CAPACITY):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._entries: deque[TwoDimensionalText] = deque(maxlen=capacity)
        self._lock = threading.Lock()

    def push(self, result: TwoDimensionalText) -> None:
        with self._lock:
            self._entries.appendleft(result)

    def recent(self, limit: int = DEFAULT_CAPACITY) -> list[TwoDimensionalText]:
        if limit < 1:
            raise ValueError("limit must be positive")
        with self._lock:
            return list(self._entries)[:limit]

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)
