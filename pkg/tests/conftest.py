import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cva6perf.pipeline import compiled_available  # noqa: E402

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"
CORPUS = Path(__file__).parent.parent / "src" / "cva6perf" / "corpus"

BACKENDS = ["python"] + (["compiled"] if compiled_available() else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


# acceptance lines, printed after the run
RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
