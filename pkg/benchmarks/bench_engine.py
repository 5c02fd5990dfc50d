"""Compare the pure-Python and compiled cycle engines on the bundled corpus.

    python benchmarks/bench_engine.py [--repeat N]
"""

import argparse
import time
from pathlib import Path

from cva6perf.config import load_config
from cva6perf.pipeline import compiled_available, run_pipeline
from cva6perf.trace_io import read_trace

CORPUS = Path(__file__).resolve().parent.parent / "src" / "cva6perf" / "corpus"


def best_of(trace, config, backend, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = run_pipeline(trace, config, backend=backend)
        times.append(time.perf_counter() - start)
    return min(times), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--config", default="superscalar")
    args = parser.parse_args()
    if not compiled_available():
        raise SystemExit("compiled engine not built; run `pip install -e . --no-build-isolation`")

    config = load_config(args.config)
    print(f"{'trace':<16}{'insns':>7}{'python ms':>11}{'compiled ms':>13}{'speedup':>9}")
    total_py = total_c = 0.0
    for path in sorted(CORPUS.glob("*.rvft")):
        trace = read_trace(path)
        t_py, r_py = best_of(trace, config, "python", args.repeat)
        t_c, r_c = best_of(trace, config, "compiled", args.repeat)
        assert r_py.stats == r_c.stats, path.name
        total_py += t_py
        total_c += t_c
        print(f"{path.stem:<16}{len(trace):>7}{t_py * 1e3:>11.2f}{t_c * 1e3:>13.2f}"
              f"{t_py / t_c:>8.1f}x")
    print(f"{'total':<16}{'':>7}{total_py * 1e3:>11.2f}{total_c * 1e3:>13.2f}"
          f"{total_py / total_c:>8.1f}x")


if __name__ == "__main__":
    main()
