import pytest
from hypothesis import given, strategies as st

from cva6perf.decode import decode
from cva6perf.scoreboard import Scoreboard, ScoreboardEntry, ScoreboardError, interval_mask

ADD_A0 = decode(0x00C58533)  # add a0, a1, a2
ADD_A3 = decode(0x00F706B3)  # add a3, a4, a5


def walk(a, b, n):
    """Slots visited stepping from a to b, wrapping."""
    slots, i = {a}, a
    while i != b:
        i = (i + 1) % n
        slots.add(i)
    return sum(1 << s for s in slots)


@pytest.mark.parametrize("n", [4, 8, 16])
def test_interval_mask_exhaustive(n):
    for a in range(n):
        for b in range(n):
            assert interval_mask(a, b, n) == walk(a, b, n), (a, b)


def test_interval_mask_examples():
    assert interval_mask(2, 4, 8) == 0b00011100
    assert interval_mask(6, 1, 8) == 0b11000011
    assert interval_mask(3, 3, 8) == 0b00001000


def test_interval_mask_range():
    with pytest.raises(ScoreboardError):
        interval_mask(0, 8, 8)


def filled(n, start, count):
    sb = Scoreboard(n)
    sb.commit_ptr = sb.issue_ptr = start
    for k in range(count):
        sb.push(ScoreboardEntry(k, ADD_A0, 1))
    return sb


@pytest.mark.parametrize("n", range(2, 17, 2))
def test_occupancy_flags_exhaustive(n):
    for start in range(n):
        for count in range(n + 1):
            assert filled(n, start, count).occupancy_flags() == (count == n, count >= n - 1)


def test_odd_depth_rejected():
    for n in (1, 3, 5, 7):
        with pytest.raises(ScoreboardError):
            Scoreboard(n)


def test_odd_depth_parity_counterexample():
    # 5 slots, 3 entries at slots 1..3: both odd slots are taken, so the
    # predicate reports at most one free slot while two are free
    slots = [False, True, True, True, False]
    odd = all(slots[i] for i in range(1, 5, 2))
    even = all(slots[i] for i in range(0, 5, 2))
    assert (odd and even, odd or even) == (False, True)


@given(st.lists(st.sampled_from(["push", "pop"]), max_size=60), st.sampled_from([2, 4, 8]))
def test_fifo_matches_list(ops, n):
    sb, model, seq = Scoreboard(n), [], 0
    for op in ops:
        if op == "push":
            if len(model) == n:
                with pytest.raises(ScoreboardError):
                    sb.push(ScoreboardEntry(seq, ADD_A0, 1))
                continue
            sb.push(ScoreboardEntry(seq, ADD_A0, 1))
            model.append(seq)
            seq += 1
        elif not model:
            with pytest.raises(ScoreboardError):
                sb.pop_head()
        else:
            assert sb.pop_head().seq == model.pop(0)
        assert [e.seq for e in sb] == model
        assert len(sb) == len(model)


def test_cancel_from_wraps():
    sb = filled(8, 6, 3)  # slots 6, 7, 0
    assert sb.cancel_from(7) == 1
    assert [e.cancelled for e in sb] == [False, False, True]
    assert sb.cancel_from(0) == 0
    with pytest.raises(ScoreboardError):
        sb.cancel_from(3)


def test_latest_writer_skips_cancelled():
    sb = Scoreboard(4)
    sb.push(ScoreboardEntry(0, ADD_A0, 1, done=True))
    sb.push(ScoreboardEntry(1, ADD_A0, 1))
    sb.push(ScoreboardEntry(2, ADD_A3, 1))
    assert sb.latest_writer(10) == (1, False)
    sb.slots[1].cancelled = True
    assert sb.latest_writer(10) == (0, True)
    assert sb.has_writer(10)
    assert sb.latest_writer(5) is None


def test_tick_counters():
    sb = Scoreboard(4)
    sb.push(ScoreboardEntry(0, ADD_A0, 2))
    sb.push(ScoreboardEntry(1, ADD_A3, 1))
    assert sb.tick_counters() == [1]
    assert sb.tick_counters() == [0]
    assert sb.tick_counters() == []
    assert sb.dump() == "sb: slot0=0:2/2D slot1=1:1/1D"
