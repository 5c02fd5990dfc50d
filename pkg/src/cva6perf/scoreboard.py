"""Scoreboard: circular buffer of issued-but-not-committed instructions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .decode import DecodedOp


class ScoreboardError(RuntimeError):
    """Contract violation on the scoreboard (push on full, pop on empty, ...)."""


@dataclass
class ScoreboardEntry:
    seq: int
    op: DecodedOp
    latency: int
    issue_cycle: int = 0
    counter: int = 0
    done: bool = False
    cancelled: bool = False
    fu: str = field(default="", compare=False)

    def describe(self) -> str:
        flags = ("D" if self.done else "") + ("X" if self.cancelled else "")
        return f"{self.seq}:{self.counter}/{self.latency}{flags}"


def interval_mask(a: int, b: int, n: int) -> int:
    """Bit vector of the circular inclusive interval [a; b] over n slots.

    ``a > b`` wraps through n-1 to 0. The result is never zero.
    """
    if not (0 <= a < n and 0 <= b < n):
        raise ScoreboardError(f"interval [{a}; {b}] out of range for {n} slots")
    upto_b = (1 << (b + 1)) - 1
    from_a = ((1 << n) - 1) & ~((1 << a) - 1)
    return upto_b & from_a if a <= b else upto_b | from_a


class Scoreboard:
    def __init__(self, depth: int = 8):
        if depth < 2 or depth % 2:
            # the odd/even fullness predicate only holds for an even slot count
            raise ScoreboardError(f"scoreboard depth must be even and >= 2, got {depth}")
        self.depth = depth
        self.slots: list[ScoreboardEntry | None] = [None] * depth
        self.issue_ptr = 0
        self.commit_ptr = 0
        self.occupancy = 0

    def __len__(self):
        return self.occupancy

    def __iter__(self) -> Iterator[ScoreboardEntry]:
        """Occupied entries, oldest first."""
        for k in range(self.occupancy):
            yield self.slots[(self.commit_ptr + k) % self.depth]

    def items(self) -> Iterator[tuple[int, ScoreboardEntry]]:
        for k in range(self.occupancy):
            i = (self.commit_ptr + k) % self.depth
            yield i, self.slots[i]

    def head(self) -> ScoreboardEntry | None:
        return self.slots[self.commit_ptr] if self.occupancy else None

    def push(self, entry: ScoreboardEntry) -> int:
        if self.occupancy == self.depth:
            raise ScoreboardError("push on a full scoreboard")
        slot = self.issue_ptr
        self.slots[slot] = entry
        self.issue_ptr = (slot + 1) % self.depth
        self.occupancy += 1
        return slot

    def pop_head(self) -> ScoreboardEntry:
        if not self.occupancy:
            raise ScoreboardError("pop on an empty scoreboard")
        entry = self.slots[self.commit_ptr]
        self.slots[self.commit_ptr] = None
        self.commit_ptr = (self.commit_ptr + 1) % self.depth
        self.occupancy -= 1
        return entry

    def occupancy_flags(self) -> tuple[bool, bool]:
        """(full, at_most_one_free) from the odd and even slot occupancy."""
        odd = all(self.slots[i] is not None for i in range(1, self.depth, 2))
        even = all(self.slots[i] is not None for i in range(0, self.depth, 2))
        return odd and even, odd or even

    def cancel_from(self, branch_slot: int) -> int:
        """Set the cancelled bit on every entry younger than ``branch_slot``."""
        if not 0 <= branch_slot < self.depth or self.slots[branch_slot] is None:
            raise ScoreboardError(f"slot {branch_slot} is not occupied")
        last = (self.issue_ptr - 1) % self.depth
        if branch_slot == last:
            return 0
        mask = interval_mask((branch_slot + 1) % self.depth, last, self.depth)
        count = 0
        for i in range(self.depth):
            if mask >> i & 1:
                self.slots[i].cancelled = True
                count += 1
        return count

    def latest_writer(self, reg: int) -> tuple[int, bool] | None:
        for k in range(self.occupancy - 1, -1, -1):
            i = (self.commit_ptr + k) % self.depth
            entry = self.slots[i]
            if entry.op.rd == reg and not entry.cancelled:
                return i, entry.done
        return None

    def has_writer(self, reg: int) -> bool:
        """Any in-flight entry, cancelled or not, writing ``reg``."""
        return any(e.op.rd == reg for e in self)

    def tick_counters(self) -> list[int]:
        finished = []
        for entry in self:
            if not entry.done:
                entry.counter += 1
                if entry.counter >= entry.latency:
                    entry.done = True
                    finished.append(entry.seq)
        return finished

    def dump(self) -> str:
        return "sb: " + " ".join(f"slot{i}={e.describe()}" for i, e in self.items())
