"""Comparing annotated traces, and sweeping configurations.

Accuracy between two annotated traces of the same instruction stream is the
fraction of instructions whose commit-to-commit gap (``t[i] - t[i-1]``) is
equal on both sides. The first instruction has no predecessor and is not
counted.
"""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .config import PipelineConfig, override
from .pipeline import STALL_CAUSES, SimStats, run_pipeline
from .trace_io import AnnotatedEntry, TraceEntry

CONTEXT = 2


class AlignmentError(ValueError):
    def __init__(self, message: str, index: int):
        self.index = index
        super().__init__(message)


@dataclass
class MismatchCluster:
    start: int
    end: int
    left_dt: list[int]
    right_dt: list[int]
    context: list[tuple[int, str, int | None, int | None]] = field(default_factory=list)

    def __len__(self):
        return self.end - self.start + 1


@dataclass
class AccuracyReport:
    n_instructions: int
    n_compared: int
    n_matching: int
    total_cycles_left: int
    total_cycles_right: int
    mismatches: list[MismatchCluster]

    @property
    def accuracy(self) -> float:
        # nothing to compare counts as a perfect match
        return self.n_matching / self.n_compared if self.n_compared else 1.0

    def summary(self) -> str:
        return (f"accuracy={self.accuracy:.6f} ({self.n_matching}/{self.n_compared} matching)\n"
                f"cycles: left={self.total_cycles_left} right={self.total_cycles_right}\n"
                f"instructions={self.n_instructions} mismatch_clusters={len(self.mismatches)}\n")


def deltas(annotated: Sequence[AnnotatedEntry]) -> list[int]:
    """Commit-cycle gaps; element ``i - 1`` is the gap before instruction ``i``."""
    cycles = [a.commit_cycle for a in annotated]
    return [b - a for a, b in zip(cycles, cycles[1:])]


def _span(annotated: Sequence[AnnotatedEntry]) -> int:
    return annotated[-1].commit_cycle - annotated[0].commit_cycle if annotated else 0


def compute_accuracy(left: Sequence[AnnotatedEntry],
                     right: Sequence[AnnotatedEntry]) -> AccuracyReport:
    for i, (a, b) in enumerate(zip(left, right)):
        if a.entry.pc != b.entry.pc or a.entry.raw != b.entry.raw:
            raise AlignmentError(
                f"traces diverge at instruction {i}: "
                f"{a.entry.pc:08x}/{a.entry.raw:x} vs {b.entry.pc:08x}/{b.entry.raw:x}", i)
    if len(left) != len(right):
        i = min(len(left), len(right))
        raise AlignmentError(f"trace lengths differ ({len(left)} vs {len(right)}); "
                             f"first unmatched instruction {i}", i)

    dl, dr = deltas(left), deltas(right)
    bad = [i + 1 for i, (a, b) in enumerate(zip(dl, dr)) if a != b]
    clusters = []
    for _, run in itertools.groupby(enumerate(bad), key=lambda p: p[1] - p[0]):
        indices = [i for _, i in run]
        start, end = indices[0], indices[-1]
        context = []
        for j in range(max(0, start - CONTEXT), min(len(left), end + CONTEXT + 1)):
            text = left[j].entry.format()
            context.append((j, text, dl[j - 1] if j else None, dr[j - 1] if j else None))
        clusters.append(MismatchCluster(start, end, dl[start - 1:end], dr[start - 1:end], context))

    n = len(left)
    return AccuracyReport(
        n_instructions=n,
        n_compared=max(n - 1, 0),
        n_matching=max(n - 1, 0) - len(bad),
        total_cycles_left=_span(left),
        total_cycles_right=_span(right),
        mismatches=clusters,
    )


def diff_report(report: AccuracyReport, limit: int = 10) -> str:
    """Summary plus the first ``limit`` mismatch clusters with context."""
    out = [report.summary()]
    for number, cluster in enumerate(report.mismatches[:max(limit, 0)], 1):
        out.append(f"\n--- cluster {number}: instructions {cluster.start}-{cluster.end}\n")
        out.append("      idx  dt_left dt_right  instruction\n")
        for j, text, a, b in cluster.context:
            mark = "*" if cluster.start <= j <= cluster.end else " "
            a = "-" if a is None else a
            b = "-" if b is None else b
            out.append(f"  {mark} {j:6d} {a!s:>8} {b!s:>8}  {text}\n")
    hidden = len(report.mismatches) - max(limit, 0)
    if report.mismatches and hidden > 0:
        out.append(f"\n({hidden} more clusters not shown)\n")
    return "".join(out)


@dataclass
class SweepRow:
    params: dict[str, str]
    stats: SimStats


def _run_point(args) -> SimStats:
    trace, config = args
    return run_pipeline(trace, config).stats


def sweep_points(base: PipelineConfig,
                 grid: Mapping[str, Sequence]) -> list[tuple[dict[str, str], PipelineConfig]]:
    """Cartesian product over sorted keys; values keep their given order."""
    keys = sorted(grid)
    points = []
    for values in itertools.product(*(grid[k] for k in keys)):
        config = base
        params = {}
        for key, value in zip(keys, values):
            value = str(value).strip()
            config = override(config, key, value)
            params[key] = value
        points.append((params, config))
    return points


def sweep(base: PipelineConfig, grid: Mapping[str, Sequence],
          trace: Sequence[TraceEntry], jobs: int = 1) -> list[SweepRow]:
    points = sweep_points(base, grid)
    work = [(list(trace), config) for _, config in points]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_point, work))
    else:
        results = [_run_point(w) for w in work]
    return [SweepRow(params, stats) for (params, _), stats in zip(points, results)]


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    keys = list(rows[0].params) if rows else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys + ["cycles", "ipc"] + [f"stall_{c}" for c in STALL_CAUSES]
                    + ["mispredicts"])
    for row in rows:
        s = row.stats
        writer.writerow([row.params[k] for k in keys]
                        + [s.total_cycles, f"{s.ipc:.4f}"]
                        + [s.stalls[c] for c in STALL_CAUSES] + [s.mispredicts])
    return buf.getvalue()
