"""Cycle engine for the issue, execute and commit stages.

Each simulated cycle runs ``try_commit``, ``try_execute`` then ``try_issue``:
evaluating the stages back to front lets every stage see the state its
upstream neighbour left at the end of the previous cycle, as registers would.

Two interchangeable back ends exist. :class:`Pipeline` is the readable
reference and the only one that can emit the per-cycle debug log. The
compiled kernel in ``_kernel.pyx`` implements the same rules on flat arrays
and is chosen by :func:`run_pipeline` when it was built and no debug output
is requested.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence, TextIO

from .config import ConfigError, PipelineConfig
from .decode import DecodedOp, FuClass, decode
from .predictors import Bht, Ras
from .scoreboard import Scoreboard, ScoreboardEntry
from .trace_io import AnnotatedEntry, TraceEntry

try:
    from . import _kernel
except ImportError:
    _kernel = None

if os.environ.get("CVA6PERF_PURE"):
    _kernel = None

STALL_CAUSES = ("raw", "waw", "structural", "capacity", "control")

_UNIT_CLASS = {
    FuClass.ALU: "alu",
    FuClass.MUL: "mul",
    FuClass.LOAD: "load",
    FuClass.STORE: "store",
    FuClass.BRANCH: "branch",
    FuClass.JUMP_DIRECT: "branch",
    FuClass.JUMP_INDIRECT: "branch",
    FuClass.CSR: "csr",
    FuClass.NOP_OTHER: "alu",
}


class SimulationError(RuntimeError):
    """The engine stopped making progress."""


@dataclass
class SimStats:
    total_cycles: int = 0
    retired_count: int = 0
    mispredicts: int = 0
    stalled_attempts: int = 0
    cancelled: int = 0
    divisions: int = 0
    issue_counts: dict[str, int] = field(default_factory=dict)
    stalls: dict[str, int] = field(default_factory=lambda: dict.fromkeys(STALL_CAUSES, 0))

    @property
    def ipc(self) -> float:
        return self.retired_count / self.total_cycles if self.total_cycles else 0.0

    def summary(self) -> str:
        return f"cycles={self.total_cycles} ipc={self.ipc:.4f}"


@dataclass
class SimResult:
    annotated: list[AnnotatedEntry]
    stats: SimStats
    issue_cycles: list[int]
    backend: str


def unit_candidates(config: PipelineConfig) -> dict[FuClass, tuple[int, ...]]:
    """Indices of the units able to run each class, in selection order.

    Control transfers use ``branch`` units and CSR/system ops use ``csr``
    units when declared, otherwise they share the ALUs.
    """
    by_class: dict[str, tuple[int, ...]] = {}
    for i, unit in enumerate(config.fu_table):
        by_class[unit.unit_class] = by_class.get(unit.unit_class, ()) + (i,)
    result = {}
    for cls, unit_class in _UNIT_CLASS.items():
        units = by_class.get(unit_class)
        if not units and unit_class in ("branch", "csr"):
            units = by_class.get("alu")
        result[cls] = units or ()
    return result


def check_units(ops: Sequence[DecodedOp], config: PipelineConfig):
    candidates = unit_candidates(config)
    for cls in {op.fu_class for op in ops}:
        if not candidates[cls]:
            raise ConfigError(f"no functional unit can execute class {cls.name} "
                              f"(needs a '{_UNIT_CLASS[cls]}' unit)")
    return candidates


class ControlPredictor:
    """Predicts control transfers at issue, in program order."""

    def __init__(self, config: PipelineConfig):
        self.ras = Ras(config.ras_depth)
        self.bht = Bht(config.bht_entries)

    def resolve(self, entry: TraceEntry, op: DecodedOp, next_pc: int | None) -> bool:
        """Update the predictors and return True on a correct prediction.

        Without a successor in the trace there is nothing to mispredict.
        """
        fallthrough = entry.pc + op.length_bytes
        if op.fu_class is FuClass.JUMP_DIRECT:
            hit = True
        elif op.is_return:
            hit = self.ras.pop() == next_pc or next_pc is None
        elif op.fu_class is FuClass.BRANCH:
            if next_pc is None:
                hit = True
            else:
                taken = next_pc != fallthrough
                hit = self.bht.predict(entry.pc) == taken
                self.bht.update(entry.pc, taken)
        else:
            hit = next_pc is None  # no BTB
        if op.is_call:
            self.ras.push(fallthrough)
        return hit


def predict_all(trace: Sequence[TraceEntry], ops: Sequence[DecodedOp],
                config: PipelineConfig) -> list[bool]:
    """Misprediction flag per instruction, as the issue stage will see them."""
    predictor = ControlPredictor(config)
    missed = [False] * len(trace)
    for i, op in enumerate(ops):
        if op.fu_class.is_control:
            next_pc = trace[i + 1].pc if i + 1 < len(trace) else None
            missed[i] = not predictor.resolve(trace[i], op, next_pc)
    return missed


class Pipeline:
    """Reference engine; one instance simulates one trace once."""

    def __init__(self, trace: Sequence[TraceEntry], config: PipelineConfig,
                 debug: TextIO | None = None, verbose_sb: bool = False):
        self.trace = list(trace)
        self.config = config
        self.ops = [decode(e.raw) for e in self.trace]
        self.candidates = check_units(self.ops, config)
        self.units = config.fu_table
        self.debug = debug
        self.verbose_sb = verbose_sb

        n = len(self.trace)
        self.cycle = 0
        self.next_seq = 0
        self.retired = 0
        self.sb = Scoreboard(config.scoreboard_depth)
        self.predictor = ControlPredictor(config)
        self.last_miss: int | None = None
        self.last_unit_issue: list[int | None] = [None] * len(self.units)
        self.commit_cycles: list[int | None] = [None] * n
        self.issue_cycles: list[int | None] = [None] * n
        self.stats = SimStats()
        self._idle = 0
        self._guard = config.scoreboard_depth + config.max_latency + config.mispredict_penalty
        self._misses: list[int] = []

    @property
    def finished(self) -> bool:
        return self.retired == len(self.trace)

    def run(self) -> SimResult:
        while not self.finished:
            self.step()
        stats = self.stats
        stats.retired_count = self.retired
        stats.total_cycles = self.commit_cycles[-1] + 1 if self.trace else 0
        stats.issue_counts = dict(sorted(stats.issue_counts.items()))
        annotated = [AnnotatedEntry(e, c) for e, c in zip(self.trace, self.commit_cycles)]
        return SimResult(annotated, stats, list(self.issue_cycles), "python")

    def step(self) -> None:
        self._misses = []
        committed = self.try_commit()
        done = self.try_execute()
        issued = self.try_issue()
        if committed or done or issued:
            self._idle = 0
        else:
            self._idle += 1
            if self._idle > self._guard:
                head = self.sb.head()
                raise SimulationError(
                    f"no progress for {self._idle} cycles at cycle {self.cycle}: "
                    f"next to issue #{self.next_seq}, "
                    f"head #{head.seq if head else None}")
        if self.debug is not None:
            self._log(issued, done, committed)
        self.cycle += 1

    def try_commit(self) -> list[int]:
        retired = []
        for port in range(self.config.commit_width):
            head = self.sb.head()
            if head is None or not head.done:
                break
            if head.op.fu_class is FuClass.STORE and port > 0:
                break  # only the first commit port handles stores
            self.sb.pop_head()
            if head.cancelled:
                self.stats.cancelled += 1
                continue
            self.commit_cycles[head.seq] = self.cycle
            self.retired += 1
            retired.append(head.seq)
        return retired

    def try_execute(self) -> list[int]:
        return self.sb.tick_counters()

    def _busy_units(self) -> list[bool]:
        # a multi-stage unit issued recently keeps its write-back port for
        # the other units sharing it; the unit itself is pipelined
        busy = [False] * len(self.units)
        for u, unit in enumerate(self.units):
            t = self.last_unit_issue[u]
            if t is not None and 0 < self.cycle - t < unit.stages:
                for v, other in enumerate(self.units):
                    if v != u and other.wb_port == unit.wb_port:
                        busy[v] = True
        return busy

    def _claim(self, u: int, busy: list[bool]) -> None:
        port = self.units[u].wb_port
        for v, other in enumerate(self.units):
            if other.wb_port == port:
                busy[v] = True
        self.last_unit_issue[u] = self.cycle

    def _hazard(self, op: DecodedOp, k: int, flags, busy) -> str | None:
        cfg = self.config
        if self.last_miss is not None and self.cycle - self.last_miss < cfg.mispredict_penalty:
            return "control"
        full, one_free = flags
        if (k == 0 and full) or (k == 1 and one_free) or \
                (k > 1 and self.sb.occupancy >= cfg.scoreboard_depth):
            return "capacity"
        for src in op.sources:
            writer = self.sb.latest_writer(src)
            if writer is not None and not writer[1]:
                return "raw"
        if op.rd and not cfg.renaming and self.sb.has_writer(op.rd):
            return "waw"
        if not any(not busy[u] for u in self.candidates[op.fu_class]):
            return "structural"
        return None

    def try_issue(self) -> list[tuple[int, str]]:
        cfg = self.config
        busy = self._busy_units()
        flags = self.sb.occupancy_flags()
        issued = []
        for k in range(cfg.issue_width):
            seq = self.next_seq
            if seq >= len(self.trace):
                break
            op = self.ops[seq]
            cause = self._hazard(op, k, flags, busy)
            if cause is not None:
                self.stats.stalls[cause] += 1
                self.stats.stalled_attempts += 1
                break
            u = next(u for u in self.candidates[op.fu_class] if not busy[u])
            unit = self.units[u]
            entry = ScoreboardEntry(seq, op, unit.latency, self.cycle, fu=unit.name)
            slot = self.sb.push(entry)
            self._claim(u, busy)
            self.issue_cycles[seq] = self.cycle
            self.next_seq += 1
            counts = self.stats.issue_counts
            counts[op.fu_class.value] = counts.get(op.fu_class.value, 0) + 1
            self.stats.divisions += op.is_div
            issued.append((seq, unit.name))
            if op.fu_class.is_control:
                next_pc = self.trace[seq + 1].pc if seq + 1 < len(self.trace) else None
                if not self.predictor.resolve(self.trace[seq], op, next_pc):
                    self.stats.mispredicts += 1
                    self.last_miss = self.cycle
                    self._misses.append(seq)
                    if cfg.speculative_sb:
                        self.stats.cancelled += self.sb.cancel_from(slot)
                    break
                if not cfg.speculative_sb:
                    break
        return issued

    def _log(self, issued, done, committed) -> None:
        parts = [f"C{self.cycle}"]
        if issued:
            parts.append("issue:" + ",".join(f"{s}@{fu}" for s, fu in issued))
        if done:
            parts.append("done:" + ",".join(map(str, done)))
        if committed:
            parts.append("commit:" + ",".join(map(str, committed)))
        parts += [f"miss@{s}" for s in self._misses]
        print(" | ".join(parts), file=self.debug)
        if self.verbose_sb:
            print(self.sb.dump(), file=self.debug)


def compiled_available() -> bool:
    return _kernel is not None


def _run_compiled(trace: Sequence[TraceEntry], config: PipelineConfig) -> SimResult:
    from array import array

    ops = [decode(e.raw) for e in trace]
    candidates = check_units(ops, config)
    groups: dict[tuple[int, ...], int] = {}
    flat: list[int] = []
    starts: list[int] = []
    lengths: list[int] = []
    for cls in FuClass:
        units = candidates[cls]
        if units and units not in groups:
            groups[units] = len(starts)
            starts.append(len(flat))
            lengths.append(len(units))
            flat.extend(units)
    missed = predict_all(trace, ops, config)
    n = len(trace)
    commit = array("q", bytes(8 * n))
    issue = array("q", bytes(8 * n))
    stalls = array("q", bytes(8 * len(STALL_CAUSES)))
    units = config.fu_table
    status = _kernel.run(
        array("q", [op.rd or 0 for op in ops]),
        array("q", [op.rs1 or 0 for op in ops]),
        array("q", [op.rs2 or 0 for op in ops]),
        array("q", [groups[candidates[op.fu_class]] for op in ops]),
        array("q", [op.fu_class is FuClass.STORE for op in ops]),
        array("q", [op.fu_class.is_control for op in ops]),
        array("q", missed),
        array("q", starts), array("q", lengths), array("q", flat),
        array("q", [u.latency for u in units]),
        array("q", [u.wb_port for u in units]),
        array("q", [u.stages for u in units]),
        config.issue_width, config.commit_width, config.scoreboard_depth,
        config.mispredict_penalty, int(config.renaming), int(config.speculative_sb),
        commit, issue, stalls,
    )
    if status != 0:
        raise SimulationError(f"no progress at cycle {status - 1} (compiled engine)")
    stats = SimStats()
    stats.retired_count = n
    stats.total_cycles = commit[-1] + 1 if n else 0
    stats.mispredicts = sum(missed)
    stats.stalls = dict(zip(STALL_CAUSES, stalls))
    stats.stalled_attempts = sum(stalls)
    stats.divisions = sum(op.is_div for op in ops)
    counts: dict[str, int] = {}
    for op in ops:
        counts[op.fu_class.value] = counts.get(op.fu_class.value, 0) + 1
    stats.issue_counts = dict(sorted(counts.items()))
    annotated = [AnnotatedEntry(e, c) for e, c in zip(trace, commit)]
    return SimResult(annotated, stats, list(issue), "compiled")


def run_pipeline(trace: Sequence[TraceEntry], config: PipelineConfig, *,
                 debug: TextIO | None = None, verbose_sb: bool = False,
                 backend: str = "auto") -> SimResult:
    """Simulate ``trace`` and return commit cycles, statistics and issue cycles.

    ``backend`` is ``"auto"``, ``"python"`` or ``"compiled"``; debug output
    always uses the Python engine.
    """
    if backend not in ("auto", "python", "compiled"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "compiled" and _kernel is None:
        raise RuntimeError("compiled engine not built; reinstall with Cython available")
    if backend == "compiled" and debug is not None:
        raise ValueError("the compiled engine has no debug output")
    if backend == "python" or debug is not None or _kernel is None:
        return Pipeline(trace, config, debug, verbose_sb).run()
    return _run_compiled(trace, config)


def simulate(trace: Sequence[TraceEntry], config: PipelineConfig | None = None,
             **kwargs) -> tuple[list[AnnotatedEntry], SimStats]:
    result = run_pipeline(trace, config or PipelineConfig(), **kwargs)
    return result.annotated, result.stats
