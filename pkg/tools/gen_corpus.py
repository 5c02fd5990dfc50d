"""Regenerate the bundled microtrace corpus (src/cva6perf/corpus/*.rvft).

Each program is laid out statically, then its control flow is walked with
scripted branch outcomes (loop trip counts, seeded pseudo-random decisions),
so every pc in the emitted trace is consistent with the previous
instruction. Data values are never computed.

    python tools/gen_corpus.py
"""

import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

import rvasm as A  # noqa: E402
from cva6perf.trace_io import TraceEntry, write_trace  # noqa: E402

OUT = ROOT / "src" / "cva6perf" / "corpus"
BASE = 0x80000000


def size(raw):
    return 4 if raw & 3 == 3 else 2


class Program:
    def __init__(self):
        self.items = []
        self.labels = {}

    def label(self, name):
        self.labels[name] = len(self.items)

    def op(self, *encoded):
        for enc in encoded:
            self.items.append(("op", enc))

    def branch(self, fn, rs1, rs2, target, taken):
        self.items.append(("br", fn, rs1, rs2, target, taken))

    def cbranch(self, fn, rs1, target, taken):
        self.items.append(("cbr", fn, rs1, target, taken))

    def jump(self, target):
        self.items.append(("j", target))

    def call(self, target):
        self.items.append(("call", target))

    def ret(self, compressed=False):
        self.items.append(("ret", compressed))

    def halt(self):
        self.items.append(("halt",))

    def _size(self, item):
        kind = item[0]
        if kind == "op":
            return size(item[1][0])
        if kind in ("cbr",) or (kind == "ret" and item[1]):
            return 2
        return 0 if kind == "halt" else 4

    def run(self, start="main", limit=100000):
        pcs, pc = [], BASE
        for item in self.items:
            pcs.append(pc)
            pc += self._size(item)

        def enc(i):
            item = self.items[i]
            kind = item[0]
            if kind == "op":
                return item[1]
            if kind == "br":
                _, fn, rs1, rs2, target, _ = item
                return fn(rs1, rs2, pcs[self.labels[target]] - pcs[i])
            if kind == "cbr":
                _, fn, rs1, target, _ = item
                return fn(rs1, pcs[self.labels[target]] - pcs[i])
            if kind == "j":
                return A.jal("zero", pcs[self.labels[item[1]]] - pcs[i])
            if kind == "call":
                return A.jal("ra", pcs[self.labels[item[1]]] - pcs[i])
            return A.c_jr("ra") if item[1] else A.ret()

        trace, stack = [], []
        i = self.labels[start]
        while self.items[i][0] != "halt":
            if len(trace) >= limit:
                raise RuntimeError("program did not halt")
            raw, text = enc(i)
            trace.append(TraceEntry(pcs[i], raw, text, len(trace)))
            item = self.items[i]
            kind = item[0]
            if kind in ("br", "cbr"):
                i = self.labels[item[-2]] if item[-1]() else i + 1
            elif kind == "j":
                i = self.labels[item[1]]
            elif kind == "call":
                stack.append(i + 1)
                i = self.labels[item[1]]
            elif kind == "ret":
                i = stack.pop()
            else:
                i += 1
        return trace


def loop(n):
    """Back-edge outcome: taken n-1 times, then not taken once; repeats."""
    state = {"k": 0}

    def taken():
        state["k"] += 1
        if state["k"] == n:
            state["k"] = 0
            return False
        return True
    return taken


def chance(rng, p):
    return lambda: rng.random() < p


def matmul(n=6):
    p = Program()
    p.label("main")
    p.op(A.addi("s0", "zero", n), A.lui("s1", 0x80010), A.lui("s2", 0x80020), A.lui("s3", 0x80030))
    p.label("row")
    p.op(A.addi("s4", "zero", n), A.c_mv("a1", "s3"))
    p.label("col")
    p.op(A.c_li("a0", 0), A.addi("t0", "zero", n), A.c_mv("a2", "s1"), A.c_mv("a3", "s2"))
    p.label("dot")
    p.op(A.c_lw("a4", 0, "a2"), A.c_lw("a5", 0, "a3"), A.mul("a6", "a4", "a5"),
         A.c_add("a0", "a6"), A.c_addi("a2", 4), A.addi("a3", "a3", 4 * n), A.addi("t0", "t0", -1))
    p.branch(A.bne, "t0", "zero", "dot", loop(n))
    p.op(A.c_sw("a0", 0, "a1"), A.c_addi("a1", 4), A.addi("s2", "s2", 4), A.addi("s4", "s4", -1))
    p.branch(A.bne, "s4", "zero", "col", loop(n))
    p.op(A.addi("s1", "s1", 4 * n), A.addi("s2", "s2", -4 * n), A.addi("s3", "s3", 4 * n),
         A.addi("s0", "s0", -1))
    p.branch(A.bne, "s0", "zero", "row", loop(n))
    p.halt()
    return p.run()


def list_walk(nodes=140, seed=1):
    rng = random.Random(seed)
    p = Program()
    p.label("main")
    p.op(A.lui("s0", 0x80040), A.c_li("s1", 0), A.c_li("a1", 3))
    p.label("next")
    p.op(A.c_lw("a0", 4, "s0"))
    p.call("process")
    p.op(A.c_add("s1", "a0"), A.c_lw("s0", 0, "s0"))
    p.cbranch(A.c_bnez, "s0", "next", loop(nodes))
    p.op(A.sw("s1", 0, "gp"))
    p.halt()
    p.label("process")
    p.op(A.andi("t0", "a0", 1))
    p.branch(A.beq, "t0", "zero", "even", chance(rng, 0.6))
    p.op(A.mul("a0", "a0", "a1"), A.addi("a0", "a0", 1))
    p.ret(compressed=True)
    p.label("even")
    p.op(A.srli("a0", "a0", 1), A.sh1add("a0", "a0", "a1"))
    p.branch(A.bltu, "a0", "a1", "small", chance(rng, 0.2))
    p.op(A.xor("a0", "a0", "s1"))
    p.label("small")
    p.ret()
    return p.run()


def state_machine(steps=170, seed=2):
    rng = random.Random(seed)
    p = Program()
    p.label("main")
    p.op(A.c_li("s0", 0), A.lui("s1", 0x80050), A.addi("s2", "zero", steps), A.c_li("a5", 7))
    p.label("step")
    p.op(A.c_lw("a0", 0, "s1"), A.andi("t0", "a0", 3))
    p.branch(A.beq, "t0", "zero", "s_zero", chance(rng, 0.35))
    p.branch(A.blt, "t0", "a5", "s_small", chance(rng, 0.5))
    # state: large
    p.op(A.div("a1", "a0", "a5"), A.rem("a2", "a0", "a5"), A.c_add("s0", "a1"))
    p.jump("s_done")
    p.label("s_zero")
    p.op(A.slli("a1", "a0", 2), A.sh2add("a1", "a1", "s1"), A.sw("a0", 8, "a1"), A.c_addi("s0", 1))
    p.jump("s_done")
    p.label("s_small")
    p.call("hash")
    p.op(A.sb("a0", 4, "s1"), A.sw("s0", 12, "s1"))
    p.label("s_done")
    p.op(A.c_addi("a0", 1), A.c_sw("a0", 0, "s1"), A.addi("s2", "s2", -1))
    p.branch(A.bne, "s2", "zero", "step", loop(steps))
    p.halt()
    p.label("hash")
    p.op(A.xori("a0", "a0", 0x5a), A.rol("a0", "a0", "a5"), A.mul("a3", "a0", "a0"),
         A.xor("a0", "a0", "a3"), A.andn("a0", "a0", "a5"))
    p.ret()
    return p.run()


def crc_bitops(words=40, seed=3):
    rng = random.Random(seed)
    p = Program()
    p.label("main")
    p.op(A.lui("s0", 0x80060), A.addi("s1", "zero", words), A.lui("a7", 0xEDB88), A.c_li("a0", -1))
    p.label("word")
    p.op(A.c_lw("a1", 0, "s0"), A.xor("a0", "a0", "a1"), A.addi("t1", "zero", 4))
    p.label("bit")
    p.op(A.bexti("t0", "a0", 0), A.srli("a0", "a0", 1))
    p.branch(A.beq, "t0", "zero", "skip", chance(rng, 0.5))
    p.op(A.xor("a0", "a0", "a7"))
    p.label("skip")
    p.op(A.addi("t1", "t1", -1))
    p.branch(A.bne, "t1", "zero", "bit", loop(4))
    p.op(A.clmul("a2", "a1", "a7"), A.cpop("a3", "a2"), A.rev8("a4", "a2"), A.orc_b("a4", "a4"),
         A.max_("a3", "a3", "a4"), A.c_add("a3", "a2"), A.sw("a3", 0x100, "s0"),
         A.c_addi("s0", 4), A.addi("s1", "s1", -1))
    p.branch(A.bne, "s1", "zero", "word", loop(words))
    p.halt()
    return p.run()


def mixed_random(blocks=60, seed=4):
    """Random basic blocks over a small register pool, joined by branches."""
    rng = random.Random(seed)
    regs = ["a0", "a1", "a2", "a3", "a4", "a5", "s0", "s1", "t0", "t1", "t2"]
    p = Program()
    p.label("main")
    p.op(A.lui("gp", 0x80070))
    for b in range(blocks):
        p.label(f"b{b}")
        for _ in range(rng.randint(4, 12)):
            kind = rng.choices(["alu", "mul", "load", "store", "zb"], [45, 12, 20, 13, 10])[0]
            rd, r1, r2 = rng.choice(regs), rng.choice(regs), rng.choice(regs)
            if kind == "alu":
                p.op(rng.choice([A.add, A.sub, A.xor, A.or_, A.and_, A.slt])(rd, r1, r2))
            elif kind == "mul":
                p.op(rng.choice([A.mul, A.mulh, A.mulhu])(rd, r1, r2))
            elif kind == "load":
                p.op(A.lw(rd, 4 * rng.randint(0, 31), "gp"))
            elif kind == "store":
                p.op(A.sw(r1, 4 * rng.randint(0, 31), "gp"))
            else:
                p.op(rng.choice([A.sh1add, A.min_, A.maxu, A.ror, A.bset])(rd, r1, r2))
        if b % 7 == 6:
            p.call("leaf")
        if b + 1 < blocks:
            # forward branch skipping nothing: both outcomes land on the next block
            p.branch(A.bne, rng.choice(regs), rng.choice(regs), f"b{b + 1}", chance(rng, 0.5))
    p.op(A.addi("t0", "zero", 1))
    p.halt()
    p.label("leaf")
    p.op(A.c_swsp("ra", 12), A.addi("a0", "a0", 1), A.c_lwsp("ra", 12))
    p.ret()
    return p.run()


PROGRAMS = {
    "matmul": matmul,
    "list_walk": list_walk,
    "state_machine": state_machine,
    "crc_bitops": crc_bitops,
    "mixed_random": mixed_random,
}

HEADER = "# generated by tools/gen_corpus.py ({name}); {n} instructions\n"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, build in PROGRAMS.items():
        trace = build()
        path = OUT / f"{name}.rvft"
        path.write_text(HEADER.format(name=name, n=len(trace)) + write_trace(trace))
        print(f"{path.relative_to(ROOT)}: {len(trace)} instructions")


if __name__ == "__main__":
    main()
