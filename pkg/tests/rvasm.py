"""Minimal RV32IMC/Zb* encoder for building test traces.

Every helper returns ``(raw, text)``. Encodings are checked against the
assembler-produced table in tests/data/decoder_table.tsv.
"""

from cva6perf.trace_io import TraceEntry

ABI = "zero ra sp gp tp t0 t1 t2 s0 s1 a0 a1 a2 a3 a4 a5 a6 a7 " \
      "s2 s3 s4 s5 s6 s7 s8 s9 s10 s11 t3 t4 t5 t6".split()
REG = {name: i for i, name in enumerate(ABI)} | {f"x{i}": i for i in range(32)} | {"fp": 8}


def _r(x):
    return REG[x] if isinstance(x, str) else x


def _n(x):
    return ABI[_r(x)]


def _rtype(f7, f3, opcode, name):
    def enc(rd, rs1, rs2):
        raw = f7 << 25 | _r(rs2) << 20 | _r(rs1) << 15 | f3 << 12 | _r(rd) << 7 | opcode
        return raw, f"{name} {_n(rd)}, {_n(rs1)}, {_n(rs2)}"
    return enc


def _itype(f3, opcode, name, f7=None):
    def enc(rd, rs1, imm):
        imm12 = (f7 << 5 | imm & 0x1F) if f7 is not None else imm & 0xFFF
        raw = imm12 << 20 | _r(rs1) << 15 | f3 << 12 | _r(rd) << 7 | opcode
        return raw, f"{name} {_n(rd)}, {_n(rs1)}, {imm}"
    return enc


def _unary(f3, imm12, name):
    def enc(rd, rs1):
        return imm12 << 20 | _r(rs1) << 15 | f3 << 12 | _r(rd) << 7 | 0x13, \
            f"{name} {_n(rd)}, {_n(rs1)}"
    return enc


add = _rtype(0x00, 0, 0x33, "add")
sub = _rtype(0x20, 0, 0x33, "sub")
sll = _rtype(0x00, 1, 0x33, "sll")
slt = _rtype(0x00, 2, 0x33, "slt")
sltu = _rtype(0x00, 3, 0x33, "sltu")
xor = _rtype(0x00, 4, 0x33, "xor")
srl = _rtype(0x00, 5, 0x33, "srl")
sra = _rtype(0x20, 5, 0x33, "sra")
or_ = _rtype(0x00, 6, 0x33, "or")
and_ = _rtype(0x00, 7, 0x33, "and")
mul = _rtype(0x01, 0, 0x33, "mul")
mulh = _rtype(0x01, 1, 0x33, "mulh")
mulhu = _rtype(0x01, 3, 0x33, "mulhu")
div = _rtype(0x01, 4, 0x33, "div")
divu = _rtype(0x01, 5, 0x33, "divu")
rem = _rtype(0x01, 6, 0x33, "rem")
remu = _rtype(0x01, 7, 0x33, "remu")
sh1add = _rtype(0x10, 2, 0x33, "sh1add")
sh2add = _rtype(0x10, 4, 0x33, "sh2add")
sh3add = _rtype(0x10, 6, 0x33, "sh3add")
andn = _rtype(0x20, 7, 0x33, "andn")
orn = _rtype(0x20, 6, 0x33, "orn")
xnor = _rtype(0x20, 4, 0x33, "xnor")
min_ = _rtype(0x05, 4, 0x33, "min")
minu = _rtype(0x05, 5, 0x33, "minu")
max_ = _rtype(0x05, 6, 0x33, "max")
maxu = _rtype(0x05, 7, 0x33, "maxu")
rol = _rtype(0x30, 1, 0x33, "rol")
ror = _rtype(0x30, 5, 0x33, "ror")
clmul = _rtype(0x05, 1, 0x33, "clmul")
clmulh = _rtype(0x05, 3, 0x33, "clmulh")
bset = _rtype(0x14, 1, 0x33, "bset")
bclr = _rtype(0x24, 1, 0x33, "bclr")
bext = _rtype(0x24, 5, 0x33, "bext")
binv = _rtype(0x34, 1, 0x33, "binv")

addi = _itype(0, 0x13, "addi")
slti = _itype(2, 0x13, "slti")
xori = _itype(4, 0x13, "xori")
ori = _itype(6, 0x13, "ori")
andi = _itype(7, 0x13, "andi")
slli = _itype(1, 0x13, "slli", 0x00)
srli = _itype(5, 0x13, "srli", 0x00)
srai = _itype(5, 0x13, "srai", 0x20)
rori = _itype(5, 0x13, "rori", 0x30)
bseti = _itype(1, 0x13, "bseti", 0x14)
bexti = _itype(5, 0x13, "bexti", 0x24)

clz = _unary(1, 0x600, "clz")
ctz = _unary(1, 0x601, "ctz")
cpop = _unary(1, 0x602, "cpop")
sext_b = _unary(1, 0x604, "sext.b")
rev8 = _unary(5, 0x698, "rev8")
orc_b = _unary(5, 0x287, "orc.b")


def _load(f3, name):
    def enc(rd, imm, rs1):
        raw = (imm & 0xFFF) << 20 | _r(rs1) << 15 | f3 << 12 | _r(rd) << 7 | 0x03
        return raw, f"{name} {_n(rd)}, {imm}({_n(rs1)})"
    return enc


def _store(f3, name):
    def enc(rs2, imm, rs1):
        imm &= 0xFFF
        raw = (imm >> 5) << 25 | _r(rs2) << 20 | _r(rs1) << 15 | f3 << 12 | (imm & 0x1F) << 7 | 0x23
        return raw, f"{name} {_n(rs2)}, {imm if imm < 2048 else imm - 4096}({_n(rs1)})"
    return enc


lb = _load(0, "lb")
lh = _load(1, "lh")
lw = _load(2, "lw")
lbu = _load(4, "lbu")
sb = _store(0, "sb")
sh = _store(1, "sh")
sw = _store(2, "sw")


def _branch(f3, name):
    def enc(rs1, rs2, offset):
        o = offset & 0x1FFF
        raw = ((o >> 12 & 1) << 31 | (o >> 5 & 0x3F) << 25 | _r(rs2) << 20 | _r(rs1) << 15
               | f3 << 12 | (o >> 1 & 0xF) << 8 | (o >> 11 & 1) << 7 | 0x63)
        return raw, f"{name} {_n(rs1)}, {_n(rs2)}, {offset}"
    return enc


beq = _branch(0, "beq")
bne = _branch(1, "bne")
blt = _branch(4, "blt")
bge = _branch(5, "bge")
bltu = _branch(6, "bltu")
bgeu = _branch(7, "bgeu")


def jal(rd, offset):
    o = offset & 0x1FFFFF
    raw = ((o >> 20 & 1) << 31 | (o >> 1 & 0x3FF) << 21 | (o >> 11 & 1) << 20
           | (o >> 12 & 0xFF) << 12 | _r(rd) << 7 | 0x6F)
    return raw, f"jal {_n(rd)}, {offset}"


def jalr(rd, rs1, imm=0):
    raw = (imm & 0xFFF) << 20 | _r(rs1) << 15 | _r(rd) << 7 | 0x67
    return raw, f"jalr {_n(rd)}, {imm}({_n(rs1)})"


def ret():
    return jalr("zero", "ra")[0], "ret"


def lui(rd, imm20):
    return (imm20 & 0xFFFFF) << 12 | _r(rd) << 7 | 0x37, f"lui {_n(rd)}, {imm20:#x}"


def csrrs(rd, csr, rs1):
    return csr << 20 | _r(rs1) << 15 | 2 << 12 | _r(rd) << 7 | 0x73, f"csrrs {_n(rd)}, {csr:#x}, {_n(rs1)}"


def fence():
    return 0x0FF0000F, "fence"


# compressed

def _p(x):
    r = _r(x)
    assert 8 <= r < 16, f"{x} is not a compressed register"
    return r - 8


def c_addi(rd, imm):
    i = imm & 0x3F
    return (0 << 13 | (i >> 5) << 12 | _r(rd) << 7 | (i & 0x1F) << 2 | 1), f"c.addi {_n(rd)}, {imm}"


def c_li(rd, imm):
    i = imm & 0x3F
    return (2 << 13 | (i >> 5) << 12 | _r(rd) << 7 | (i & 0x1F) << 2 | 1), f"c.li {_n(rd)}, {imm}"


def c_mv(rd, rs2):
    return (4 << 13 | _r(rd) << 7 | _r(rs2) << 2 | 2), f"c.mv {_n(rd)}, {_n(rs2)}"


def c_add(rd, rs2):
    return (4 << 13 | 1 << 12 | _r(rd) << 7 | _r(rs2) << 2 | 2), f"c.add {_n(rd)}, {_n(rs2)}"


def c_slli(rd, shamt):
    return (0 << 13 | _r(rd) << 7 | (shamt & 0x1F) << 2 | 2), f"c.slli {_n(rd)}, {shamt}"


def c_lw(rd, offset, rs1):
    o = offset
    raw = (2 << 13 | (o >> 3 & 7) << 10 | _p(rs1) << 7 | (o >> 2 & 1) << 6
           | (o >> 6 & 1) << 5 | _p(rd) << 2 | 0)
    return raw, f"c.lw {_n(rd)}, {offset}({_n(rs1)})"


def c_sw(rs2, offset, rs1):
    o = offset
    raw = (6 << 13 | (o >> 3 & 7) << 10 | _p(rs1) << 7 | (o >> 2 & 1) << 6
           | (o >> 6 & 1) << 5 | _p(rs2) << 2 | 0)
    return raw, f"c.sw {_n(rs2)}, {offset}({_n(rs1)})"


def c_lwsp(rd, offset):
    o = offset
    raw = 2 << 13 | (o >> 5 & 1) << 12 | _r(rd) << 7 | (o >> 2 & 7) << 4 | (o >> 6 & 3) << 2 | 2
    return raw, f"c.lwsp {_n(rd)}, {offset}(sp)"


def c_swsp(rs2, offset):
    o = offset
    raw = 6 << 13 | (o >> 2 & 0xF) << 9 | (o >> 6 & 3) << 7 | _r(rs2) << 2 | 2
    return raw, f"c.swsp {_n(rs2)}, {offset}(sp)"


def _cb(f3, name):
    def enc(rs1, offset):
        o = offset & 0x1FF
        raw = (f3 << 13 | (o >> 8 & 1) << 12 | (o >> 3 & 3) << 10 | _p(rs1) << 7
               | (o >> 6 & 3) << 5 | (o >> 1 & 3) << 3 | (o >> 5 & 1) << 2 | 1)
        return raw, f"{name} {_n(rs1)}, {offset}"
    return enc


c_beqz = _cb(6, "c.beqz")
c_bnez = _cb(7, "c.bnez")


def c_j(offset):
    o = offset & 0xFFF
    raw = (5 << 13 | (o >> 11 & 1) << 12 | (o >> 4 & 1) << 11 | (o >> 8 & 3) << 9
           | (o >> 10 & 1) << 8 | (o >> 6 & 1) << 7 | (o >> 7 & 1) << 6 | (o >> 1 & 7) << 3
           | (o >> 5 & 1) << 2 | 1)
    return raw, f"c.j {offset}"


def c_jr(rs1):
    return (4 << 13 | _r(rs1) << 7 | 2), f"c.jr {_n(rs1)}"


def straight(*instrs, base=0x80000000):
    """Trace of instructions executed back to back from ``base``."""
    entries = []
    pc = base
    for i, (raw, text) in enumerate(instrs):
        entries.append(TraceEntry(pc, raw, text, i))
        pc += 2 if raw & 3 != 3 else 4
    return entries


def at(*items):
    """Trace from explicit ``(pc, (raw, text))`` pairs."""
    return [TraceEntry(pc, raw, text, i) for i, (pc, (raw, text)) in enumerate(items)]
