"""Return address stack and branch history table."""

from __future__ import annotations


class Ras:
    "Return Address Stack; pushing on a full stack overwrites the oldest entry"

    def __init__(self, depth: int = 2):
        if depth < 0:
            raise ValueError("RAS depth must be >= 0")
        self.capacity = depth
        self._slots = [0] * depth
        self._top = 0  # next slot to write
        self._size = 0

    def __len__(self):
        return self._size

    def push(self, addr: int) -> None:
        if self.capacity == 0:
            return
        self._slots[self._top] = addr
        self._top = (self._top + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def pop(self) -> int | None:
        if self._size == 0:
            return None
        self._top = (self._top - 1) % self.capacity
        self._size -= 1
        return self._slots[self._top]


class Bht:
    "Branch History Table of 2-bit saturating counters, initialised to 0"

    def __init__(self, entries: int = 128):
        if entries <= 0 or entries & (entries - 1):
            raise ValueError("BHT size must be a power of two")
        self.counters = [0] * entries

    def index(self, pc: int) -> int:
        return (pc >> 1) % len(self.counters)

    def predict(self, pc: int) -> bool:
        return self.counters[self.index(pc)] >= 2

    def update(self, pc: int, taken: bool) -> None:
        i = self.index(pc)
        if taken:
            self.counters[i] = min(self.counters[i] + 1, 3)
        else:
            self.counters[i] = max(self.counters[i] - 1, 0)
