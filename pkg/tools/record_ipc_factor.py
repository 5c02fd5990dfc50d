"""Record the superscalar-over-single-issue IPC factor on the bundled corpus.

Run only when the corpus or the engine changes on purpose; the acceptance
suite compares against tests/data/ipc_factor.json.
"""

import json
from pathlib import Path

from cva6perf.config import load_config
from cva6perf.pipeline import run_pipeline
from cva6perf.trace_io import read_trace

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "src" / "cva6perf" / "corpus"
OUT = ROOT / "tests" / "data" / "ipc_factor.json"


def corpus_ipc(preset):
    instructions = cycles = 0
    for path in sorted(CORPUS.glob("*.rvft")):
        stats = run_pipeline(read_trace(path), load_config(preset)).stats
        instructions += stats.retired_count
        cycles += stats.total_cycles
    return instructions / cycles


def main():
    single, superscalar = corpus_ipc("single_issue"), corpus_ipc("superscalar")
    record = {
        "corpus": sorted(p.name for p in CORPUS.glob("*.rvft")),
        "ipc_single_issue": round(single, 6),
        "ipc_superscalar": round(superscalar, 6),
        "factor": round(superscalar / single, 6),
    }
    OUT.write_text(json.dumps(record, indent=2) + "\n")
    print(json.dumps(record, indent=2))


if __name__ == "__main__":
    main()
