"""Reading and writing instruction traces.

A trace file (``.rvft``) holds one retired instruction per line::

    <pc hex> <raw hex, 4 or 8 digits> [disassembly...]

Lines whose first non-blank character is ``#`` are comments. An annotated
trace appends `` @<commit cycle>`` to every instruction line.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Iterable, TextIO

log = logging.getLogger(__name__)


class TraceFormatError(ValueError):
    """Malformed trace line; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        self.reason = message
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class TraceEntry:
    pc: int
    raw: int
    disasm: str | None = None
    index: int = 0

    @property
    def compressed(self) -> bool:
        return self.raw & 0b11 != 0b11

    @property
    def length(self) -> int:
        return 2 if self.compressed else 4

    def format(self) -> str:
        """Canonical text line, without newline."""
        raw = f"{self.raw:04x}" if self.compressed else f"{self.raw:08x}"
        line = f"{self.pc:08x} {raw}"
        if self.disasm:
            line += f" {self.disasm}"
        return line


@dataclass(frozen=True)
class AnnotatedEntry:
    entry: TraceEntry
    commit_cycle: int

    def format(self) -> str:
        return f"{self.entry.format()} @{self.commit_cycle}"


_ANNOTATION = re.compile(r"(.*\S)\s+@(\S*)$")
_HEX = re.compile(r"[0-9a-fA-F]+")
_DECIMAL = re.compile(r"[0-9]+")


def _lines(text: str | TextIO | Iterable[str]):
    if isinstance(text, str):
        text = text.splitlines()
    for lineno, line in enumerate(text, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_hex(field: str, what: str, lineno: int) -> int:
    if not _HEX.fullmatch(field):
        raise TraceFormatError(f"malformed {what} {field!r}", lineno)
    return int(field, 16)


def _parse_entry(line: str, lineno: int, index: int) -> TraceEntry:
    fields = line.split(None, 2)
    if len(fields) < 2:
        raise TraceFormatError("expected '<pc> <raw> [disasm]'", lineno)
    pc = _parse_hex(fields[0], "pc", lineno)
    raw = _parse_hex(fields[1], "encoding", lineno)
    digits = len(fields[1])
    if digits == 4:
        if raw & 0b11 == 0b11:
            raise TraceFormatError(
                f"4-digit encoding {fields[1]} has a 32-bit opcode (low bits 0b11)", lineno)
    elif digits == 8:
        if raw & 0b11 != 0b11:
            raise TraceFormatError(
                f"8-digit encoding {fields[1]} has a compressed opcode", lineno)
    else:
        raise TraceFormatError(f"encoding {fields[1]!r} must have 4 or 8 hex digits", lineno)
    if pc & 1:
        raise TraceFormatError(f"odd pc {fields[0]}", lineno)
    disasm = fields[2].strip() if len(fields) > 2 else None
    return TraceEntry(pc=pc, raw=raw, disasm=disasm or None, index=index)


def parse_trace(text: str | TextIO | Iterable[str]) -> list[TraceEntry]:
    """Parse a trace into entries indexed from 0 in file order."""
    return [_parse_entry(line, lineno, index)
            for index, (lineno, line) in enumerate(_lines(text))]


def write_trace(entries: Iterable[TraceEntry]) -> str:
    return "".join(e.format() + "\n" for e in entries)


def parse_annotated(text: str | TextIO | Iterable[str],
                    warnings: list[str] | None = None) -> list[AnnotatedEntry]:
    """Parse a cycle-annotated trace.

    Commit cycles that go backwards are tolerated: a message is logged and,
    if given, appended to ``warnings``.
    """
    result = []
    previous = None
    for index, (lineno, line) in enumerate(_lines(text)):
        match = _ANNOTATION.match(line)
        if not match:
            raise TraceFormatError("missing commit cycle '@<n>'", lineno)
        body, cycle = match.groups()
        if not _DECIMAL.fullmatch(cycle):
            raise TraceFormatError(f"bad commit cycle {cycle!r}", lineno)
        commit = int(cycle)
        entry = _parse_entry(body, lineno, index)
        if previous is not None and commit < previous:
            msg = f"line {lineno}: commit cycle {commit} after {previous}"
            log.warning("non-monotonic annotated trace: %s", msg)
            if warnings is not None:
                warnings.append(msg)
        previous = commit
        result.append(AnnotatedEntry(entry, commit))
    return result


def write_annotated(entries: Iterable[AnnotatedEntry]) -> str:
    return "".join(a.format() + "\n" for a in entries)


def read_trace(path) -> list[TraceEntry]:
    with open(path, encoding="utf-8") as f:
        return parse_trace(f)


def read_annotated(path, warnings: list[str] | None = None) -> list[AnnotatedEntry]:
    with open(path, encoding="utf-8") as f:
        return parse_annotated(f, warnings)
