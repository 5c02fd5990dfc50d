import pytest
from hypothesis import given, strategies as st

from cva6perf.trace_io import (AnnotatedEntry, TraceEntry, TraceFormatError, parse_annotated,
                               parse_trace, write_annotated, write_trace)

SAMPLE = """\
# comment
80000000 00100513 addi a0, zero, 1

80000004 4501 c.li a0, 0
  80000006 00a505b3
"""


def test_parse_sample():
    trace = parse_trace(SAMPLE)
    assert [(e.pc, e.raw, e.disasm, e.index) for e in trace] == [
        (0x80000000, 0x00100513, "addi a0, zero, 1", 0),
        (0x80000004, 0x4501, "c.li a0, 0", 1),
        (0x80000006, 0x00A505B3, None, 2),
    ]
    assert [e.length for e in trace] == [4, 2, 4]


def test_format_pads_compressed():
    assert TraceEntry(0x80000004, 0x0001).format() == "80000004 0001"


@pytest.mark.parametrize("line, reason", [
    ("80000000", "expected"),
    ("8000000g 00100513", "malformed pc"),
    ("80000000 0x100513", "malformed encoding"),
    ("80000000 00100513x", "malformed encoding"),
    ("80000000 0013", "32-bit opcode"),
    ("80000000 00004501", "compressed opcode"),
    ("80000000 100513", "4 or 8"),
    ("80000001 00100513", "odd pc"),
])
def test_errors(line, reason):
    with pytest.raises(TraceFormatError, match=reason) as info:
        parse_trace("# header\n" + line)
    assert info.value.lineno == 2


def test_annotated_round_trip():
    text = "80000000 00100513 addi a0, zero, 1 @2\n80000004 4501 @3\n"
    parsed = parse_annotated(text)
    assert [a.commit_cycle for a in parsed] == [2, 3]
    assert write_annotated(parsed) == text


def test_disasm_kept_verbatim():
    text = "80000000 00100513 addi  a0,\tzero, 1 @2\n"
    assert parse_annotated(text)[0].entry.disasm == "addi  a0,\tzero, 1"


@pytest.mark.parametrize("line", ["80000000 00100513", "80000000 00100513 @", "80000000 00100513 @-1",
                                  "80000000 00100513 @1.5"])
def test_bad_annotation(line):
    with pytest.raises(TraceFormatError):
        parse_annotated(line)


def test_non_monotonic_warns(caplog):
    found = []
    parsed = parse_annotated("80000000 4501 @5\n80000002 4501 @4\n", found)
    assert len(parsed) == 2
    assert found == ["line 2: commit cycle 4 after 5"]
    assert "non-monotonic" in caplog.text


disasm = st.text(st.characters(min_codepoint=33, max_codepoint=126), min_size=1, max_size=12)
entries = st.builds(
    lambda pc, raw32, raw16, short, text: TraceEntry(
        pc * 2, (raw16 & 0xFFFF) if short and raw16 & 3 != 3 else raw32 | 3, text),
    st.integers(0, 2**31 - 1), st.integers(0, 2**32 - 1), st.integers(0, 2**16 - 1),
    st.booleans(), st.one_of(st.none(), disasm.filter(lambda s: not s.startswith("#"))))


@given(st.lists(entries, max_size=20))
def test_trace_round_trip(trace):
    trace = [TraceEntry(e.pc, e.raw, e.disasm, i) for i, e in enumerate(trace)]
    assert parse_trace(write_trace(trace)) == trace


@given(st.lists(st.tuples(entries, st.integers(0, 10**9)), max_size=20))
def test_annotated_round_trip_property(items):
    annotated = [AnnotatedEntry(TraceEntry(e.pc, e.raw, e.disasm, i), c)
                 for i, (e, c) in enumerate(items)]
    assert parse_annotated(write_annotated(annotated)) == annotated
