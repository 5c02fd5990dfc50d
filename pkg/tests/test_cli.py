import shutil
import subprocess
import sys

import pytest

from conftest import CORPUS, GOLDEN
from cva6perf.cli import main


@pytest.fixture
def work(tmp_path):
    shutil.copy(GOLDEN / "mul_chain.rvft", tmp_path / "t.rvft")
    shutil.copy(CORPUS / "matmul.rvft", tmp_path / "big.rvft")
    return tmp_path


def test_run_default_output(work, capsys):
    assert main(["run", str(work / "t.rvft")]) == 0
    assert capsys.readouterr().out == "cycles=8 ipc=0.5000\n"
    expected = (GOLDEN / "mul_chain.annotated").read_text()
    assert (work / "t.rvft.annotated").read_text() == expected


def test_run_debug_goes_to_stderr(work, capsys):
    assert main(["run", str(work / "t.rvft"), "--out", str(work / "o"), "--verbose-sb"]) == 0
    err = capsys.readouterr().err
    assert err.startswith("C0 | issue:0@mul0\nsb: slot0=0:0/2\n")


def test_run_errors(work, capsys):
    assert main(["run", str(work / "missing.rvft")]) == 1
    (work / "bad.rvft").write_text("80000000 zz\n")
    assert main(["run", str(work / "bad.rvft")]) == 1
    assert main(["run", str(work / "t.rvft"), "--config", "nonesuch"]) == 1
    (work / "nomul.cfg").write_text("[fu.alu0]\nclass = alu\n")
    assert main(["run", str(work / "t.rvft"), "--config", str(work / "nomul.cfg")]) == 1
    err = capsys.readouterr().err
    assert "line 1" in err and "no such config" in err and "MUL" in err


def test_compare_exit_codes(work, capsys):
    good = GOLDEN / "alu_chain.annotated"
    assert main(["compare", str(good), str(good)]) == 0
    assert capsys.readouterr().out.startswith("accuracy=1.000000 (4/4 matching)")
    shifted = work / "shifted.annotated"
    shifted.write_text(good.read_text().replace("@4", "@5"))
    assert main(["compare", str(good), str(shifted)]) == 2
    out = capsys.readouterr().out
    assert out.startswith("accuracy=0.500000 (2/4 matching)")
    assert out.count("--- cluster") == 1
    assert main(["compare", str(good), str(GOLDEN / "mul_chain.annotated")]) == 1


def test_sweep_stdout_and_file(work, capsys):
    args = ["sweep", str(work / "big.rvft"), "--grid", "issue_width=1,2",
            "--grid", "commit_width=1,2", "--jobs", "1"]
    assert main(args) == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0].startswith("commit_width,issue_width,cycles,ipc,")
    assert len(text.splitlines()) == 5
    assert main(args + ["--out", str(work / "s.csv")]) == 0
    assert (work / "s.csv").read_text() == text


@pytest.mark.parametrize("grid", ["issue_width", "issue_width=", "bogus=1"])
def test_sweep_bad_grid(work, grid):
    assert main(["sweep", str(work / "big.rvft"), "--grid", grid]) == 1


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "cva6perf", *args],
                          capture_output=True, text=True, check=False)


def test_subcommands_byte_identical(work):
    trace = str(work / "big.rvft")
    outputs = []
    for attempt in range(2):
        run = _cli("run", trace, "--config", "superscalar", "--out", str(work / f"a{attempt}"))
        cmp_ = _cli("compare", str(work / "a0"), str(work / f"a{attempt}"))
        sw = _cli("sweep", trace, "--grid", "issue_width=1,2", "--grid", "renaming=false,true",
                  "--jobs", "4", "--out", str(work / f"s{attempt}.csv"))
        assert run.returncode == cmp_.returncode == sw.returncode == 0, run.stderr + sw.stderr
        outputs.append((run.stdout, (work / f"a{attempt}").read_bytes(), cmp_.stdout,
                        sw.stdout, (work / f"s{attempt}.csv").read_bytes()))
    assert outputs[0] == outputs[1]
