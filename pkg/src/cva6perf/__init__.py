"""Trace-driven timing model of an in-order-issue, out-of-order-execute
RISC-V pipeline, with an accuracy comparator and a design-space sweep."""

from .analysis import AccuracyReport, AlignmentError, compute_accuracy, diff_report, sweep
from .config import ConfigError, FUnit, PipelineConfig, load_config, load_preset, parse_config
from .decode import DecodedOp, FuClass, decode, insn_length
from .pipeline import SimStats, SimulationError, compiled_available, run_pipeline, simulate
from .trace_io import (AnnotatedEntry, TraceEntry, TraceFormatError, parse_annotated,
                       parse_trace, write_annotated, write_trace)

__version__ = "0.1.0"
