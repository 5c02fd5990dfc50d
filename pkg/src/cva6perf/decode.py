"""RV32IMC + Zba/Zbb/Zbc/Zbs classification for the timing model.

Only what the scheduler needs is extracted: the functional-unit class, the
integer registers read and written, and the control-flow kind. Immediates
are never evaluated.
"""

from __future__ import annotations

import enum
import functools
import warnings
from dataclasses import dataclass


class FuClass(enum.Enum):
    ALU = "alu"
    MUL = "mul"
    LOAD = "load"
    STORE = "store"
    BRANCH = "branch"
    JUMP_DIRECT = "jump_direct"
    JUMP_INDIRECT = "jump_indirect"
    CSR = "csr"
    NOP_OTHER = "nop_other"

    @property
    def is_control(self) -> bool:
        return self in _CONTROL


_CONTROL = frozenset({FuClass.BRANCH, FuClass.JUMP_DIRECT, FuClass.JUMP_INDIRECT})


class DecodeWarning(UserWarning):
    """An encoding the model does not time precisely (unknown, FP, atomics)."""


@dataclass(frozen=True)
class DecodedOp:
    fu_class: FuClass
    rd: int | None = None
    rs1: int | None = None
    rs2: int | None = None
    length_bytes: int = 4
    is_call: bool = False
    is_return: bool = False
    name: str = "unknown"

    @property
    def is_div(self) -> bool:
        return self.name.startswith(("div", "rem"))

    @property
    def sources(self) -> tuple[int, ...]:
        return tuple(r for r in (self.rs1, self.rs2) if r)


LINK_REGS = (1, 5)


def insn_length(raw: int) -> int:
    return 4 if raw & 0b11 == 0b11 else 2


def _op(fu_class, name, rd=None, rs1=None, rs2=None, length=4, call=False, ret=False):
    return DecodedOp(fu_class, rd or None, rs1, rs2, length, call, ret, name)


def _unknown(raw: int, why: str, name="unknown", **regs) -> DecodedOp:
    warnings.warn(f"{why}: {raw:#010x}", DecodeWarning, stacklevel=3)
    return _op(FuClass.NOP_OTHER, name, length=insn_length(raw), **regs)


_BRANCHES = {0: "beq", 1: "bne", 4: "blt", 5: "bge", 6: "bltu", 7: "bgeu"}
_LOADS = {0: "lb", 1: "lh", 2: "lw", 4: "lbu", 5: "lhu"}
_STORES = {0: "sb", 1: "sh", 2: "sw"}
_OP_IMM = {0: "addi", 2: "slti", 3: "sltiu", 4: "xori", 6: "ori", 7: "andi"}
_CSR = {1: "csrrw", 2: "csrrs", 3: "csrrc", 5: "csrrwi", 6: "csrrsi", 7: "csrrci"}
_SYSTEM = {0x000: "ecall", 0x001: "ebreak", 0x302: "mret", 0x102: "sret",
           0x105: "wfi", 0x7b2: "dret"}

# (funct7, funct3) -> (name, class) for the OP major opcode
_OP = {
    (0x00, 0): "add", (0x20, 0): "sub", (0x00, 1): "sll", (0x00, 2): "slt",
    (0x00, 3): "sltu", (0x00, 4): "xor", (0x00, 5): "srl", (0x20, 5): "sra",
    (0x00, 6): "or", (0x00, 7): "and",
    (0x01, 0): "mul", (0x01, 1): "mulh", (0x01, 2): "mulhsu", (0x01, 3): "mulhu",
    (0x01, 4): "div", (0x01, 5): "divu", (0x01, 6): "rem", (0x01, 7): "remu",
    # Zba
    (0x10, 2): "sh1add", (0x10, 4): "sh2add", (0x10, 6): "sh3add",
    # Zbb
    (0x20, 7): "andn", (0x20, 6): "orn", (0x20, 4): "xnor",
    (0x05, 4): "min", (0x05, 5): "minu", (0x05, 6): "max", (0x05, 7): "maxu",
    (0x30, 1): "rol", (0x30, 5): "ror",
    # Zbc
    (0x05, 1): "clmul", (0x05, 3): "clmulh", (0x05, 2): "clmulr",
    # Zbs
    (0x24, 1): "bclr", (0x24, 5): "bext", (0x34, 1): "binv", (0x14, 1): "bset",
}

# shift-immediate group: (funct3, imm[11:5]) -> name; shamt in rs2 field
_SHIFT_IMM = {
    (1, 0x00): "slli", (5, 0x00): "srli", (5, 0x20): "srai",
    (5, 0x30): "rori", (1, 0x14): "bseti", (1, 0x24): "bclri", (1, 0x34): "binvi",
    (5, 0x24): "bexti",
}
# unary Zbb ops with a fixed 12-bit immediate: (funct3, imm12) -> name
_UNARY = {
    (1, 0x600): "clz", (1, 0x601): "ctz", (1, 0x602): "cpop",
    (1, 0x604): "sext.b", (1, 0x605): "sext.h",
    (5, 0x287): "orc.b", (5, 0x698): "rev8",
}

_FP_OPCODES = {0x07, 0x27, 0x43, 0x47, 0x4B, 0x4F, 0x53}


def _decode32(raw: int) -> DecodedOp:
    opcode = raw & 0x7F
    rd = (raw >> 7) & 0x1F
    f3 = (raw >> 12) & 0x7
    rs1 = (raw >> 15) & 0x1F
    rs2 = (raw >> 20) & 0x1F
    f7 = raw >> 25

    if opcode == 0x33:
        name = _OP.get((f7, f3))
        if name is None:
            if f7 == 0x04 and f3 == 4 and rs2 == 0:
                return _op(FuClass.ALU, "zext.h", rd, rs1)
            return _unknown(raw, "unknown OP encoding")
        cls = FuClass.MUL if f7 == 0x01 else FuClass.ALU
        return _op(cls, name, rd, rs1, rs2)
    if opcode == 0x13:
        if f3 in _OP_IMM:
            return _op(FuClass.ALU, _OP_IMM[f3], rd, rs1)
        name = _UNARY.get((f3, raw >> 20)) or _SHIFT_IMM.get((f3, f7))
        if name is None:
            return _unknown(raw, "unknown OP-IMM encoding")
        return _op(FuClass.ALU, name, rd, rs1)
    if opcode == 0x37:
        return _op(FuClass.ALU, "lui", rd)
    if opcode == 0x17:
        return _op(FuClass.ALU, "auipc", rd)
    if opcode == 0x6F:
        return _op(FuClass.JUMP_DIRECT, "jal", rd, call=rd in LINK_REGS)
    if opcode == 0x67 and f3 == 0:
        return _op(FuClass.JUMP_INDIRECT, "jalr", rd, rs1,
                   call=rd in LINK_REGS, ret=rs1 in LINK_REGS and rs1 != rd)
    if opcode == 0x63 and f3 in _BRANCHES:
        return _op(FuClass.BRANCH, _BRANCHES[f3], None, rs1, rs2)
    if opcode == 0x03 and f3 in _LOADS:
        return _op(FuClass.LOAD, _LOADS[f3], rd, rs1)
    if opcode == 0x23 and f3 in _STORES:
        return _op(FuClass.STORE, _STORES[f3], None, rs1, rs2)
    if opcode == 0x0F:
        return _op(FuClass.CSR, "fence.i" if f3 == 1 else "fence")
    if opcode == 0x73:
        if f3 in _CSR:
            return _op(FuClass.CSR, _CSR[f3], rd, rs1 if f3 < 4 else None)
        if f3 == 0:
            name = _SYSTEM.get(raw >> 20, "sfence.vma" if f7 == 0x09 else "system")
            return _op(FuClass.CSR, name)
        return _unknown(raw, "unknown SYSTEM encoding")
    if opcode == 0x2F:
        # atomics go through the LSU but are outside the timed ISA subset
        return _unknown(raw, "atomic instruction", "amo", rd=rd, rs1=rs1, rs2=rs2)
    if opcode in _FP_OPCODES:
        return _unknown(raw, "floating-point instruction", "fp")
    return _unknown(raw, "unknown opcode")


def _decode16(raw: int) -> DecodedOp:
    quadrant = raw & 0b11
    f3 = (raw >> 13) & 0x7
    r_hi = (raw >> 7) & 0x1F       # rd/rs1 full field
    r_lo = (raw >> 2) & 0x1F       # rs2 full field
    p_hi = ((raw >> 7) & 0x7) + 8  # rd'/rs1'
    p_lo = ((raw >> 2) & 0x7) + 8  # rd'/rs2'
    bit12 = (raw >> 12) & 1

    def c(fu_class, name, rd=None, rs1=None, rs2=None, **kw):
        return _op(fu_class, name, rd, rs1, rs2, length=2, **kw)

    if raw == 0:
        return _unknown(raw, "illegal all-zero instruction")
    if quadrant == 0:
        if f3 == 0:
            return c(FuClass.ALU, "c.addi4spn", p_lo, 2)
        if f3 == 2:
            return c(FuClass.LOAD, "c.lw", p_lo, p_hi)
        if f3 == 6:
            return c(FuClass.STORE, "c.sw", None, p_hi, p_lo)
        if f3 in (1, 3, 5, 7):
            return _unknown(raw, "floating-point instruction", "fp")
        return _unknown(raw, "reserved compressed encoding")
    if quadrant == 1:
        if f3 == 0:
            if r_hi == 0:
                return c(FuClass.ALU, "c.nop")  # no operand fields
            return c(FuClass.ALU, "c.addi", r_hi, r_hi)
        if f3 == 1:
            return c(FuClass.JUMP_DIRECT, "c.jal", 1, call=True)
        if f3 == 2:
            return c(FuClass.ALU, "c.li", r_hi)
        if f3 == 3:
            if r_hi == 2:
                return c(FuClass.ALU, "c.addi16sp", 2, 2)
            return c(FuClass.ALU, "c.lui", r_hi)
        if f3 == 4:
            funct2 = (raw >> 10) & 0b11
            if funct2 == 0:
                return c(FuClass.ALU, "c.srli", p_hi, p_hi)
            if funct2 == 1:
                return c(FuClass.ALU, "c.srai", p_hi, p_hi)
            if funct2 == 2:
                return c(FuClass.ALU, "c.andi", p_hi, p_hi)
            if bit12 == 0:
                name = ("c.sub", "c.xor", "c.or", "c.and")[(raw >> 5) & 0b11]
                return c(FuClass.ALU, name, p_hi, p_hi, p_lo)
            return _unknown(raw, "RV64-only compressed encoding")
        if f3 == 5:
            return c(FuClass.JUMP_DIRECT, "c.j")
        return c(FuClass.BRANCH, "c.beqz" if f3 == 6 else "c.bnez", None, p_hi)
    # quadrant 2
    if f3 == 0:
        return c(FuClass.ALU, "c.slli", r_hi, r_hi)
    if f3 == 2:
        return c(FuClass.LOAD, "c.lwsp", r_hi, 2)
    if f3 == 4:
        if bit12 == 0:
            if r_lo == 0:
                return c(FuClass.JUMP_INDIRECT, "c.jr", None, r_hi, ret=r_hi in LINK_REGS)
            return c(FuClass.ALU, "c.mv", r_hi, None, r_lo)
        if r_lo == 0:
            if r_hi == 0:
                return c(FuClass.CSR, "c.ebreak")
            return c(FuClass.JUMP_INDIRECT, "c.jalr", 1, r_hi, call=True, ret=r_hi == 5)
        return c(FuClass.ALU, "c.add", r_hi, r_hi, r_lo)
    if f3 == 6:
        return c(FuClass.STORE, "c.swsp", None, 2, r_lo)
    return _unknown(raw, "floating-point instruction", "fp")


@functools.lru_cache(maxsize=8192)
def decode(raw: int) -> DecodedOp:
    """Classify one encoding; compressed forms use the low 16 bits."""
    if raw & 0b11 == 0b11:
        return _decode32(raw & 0xFFFFFFFF)
    return _decode16(raw & 0xFFFF)
