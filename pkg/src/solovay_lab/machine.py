"""Concrete prefix-free machines and stage-bounded complexity.

Two machines stand in for a universal one:

* :class:`CodecMachine` decodes a fixed, prefix-free program grammar
  (literal / zero-run / repeat).  It is total on its domain, fast, and its
  exact complexity is computable, which makes it the oracle-grade machine.
* :class:`DovetailMachine` runs a tiny four-register machine; programs may
  diverge, so its stage-bounded complexities genuinely move over time.

A stage-``b`` enumeration runs every program of length ``<= b`` for ``b``
steps.  A program of length ``l`` halting after ``t`` steps is thereby
discovered at stage ``max(l, t)``; that is the order in which
:func:`enumerate_halting` yields events.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from .core import INF, Value, strings_upto


# ---------------------------------------------------------------------------
# Elias gamma


def gamma(m: int) -> str:
    """Elias gamma code of ``m >= 1``: ``floor(log2 m)`` zeros, then ``m`` in binary."""
    if m < 1:
        raise ValueError("gamma is defined for m >= 1")
    b = format(m, "b")
    return "0" * (len(b) - 1) + b


def read_gamma(bits: str, pos: int) -> Optional[tuple[int, int]]:
    """Decode one gamma codeword at ``pos``; ``None`` if the input ends first."""
    z = 0
    n = len(bits)
    while pos + z < n and bits[pos + z] == "0":
        z += 1
    end = pos + 2 * z + 1
    if end > n:
        return None
    return int(bits[pos + z:end], 2), end


# ---------------------------------------------------------------------------
# run results


class Status(enum.Enum):
    HALT = "halt"
    OUT_OF_BUDGET = "out_of_budget"
    REJECT = "reject"


class RunResult(NamedTuple):
    status: Status
    output: Optional[str] = None
    steps: Optional[int] = None

    @property
    def halted(self) -> bool:
        return self.status is Status.HALT


REJECT = RunResult(Status.REJECT)
OUT_OF_BUDGET = RunResult(Status.OUT_OF_BUDGET)


@dataclass(frozen=True)
class HaltingEvent:
    program: str
    output: str
    steps: int
    stage: int

    def dump(self) -> str:
        return f"{self.stage} {self.steps} {len(self.program)} {self.program} {self.output or '-'}"


def dump_events(events: Iterable[HaltingEvent]) -> str:
    return "".join(e.dump() + "\n" for e in events)


def load_events(text: str) -> list[HaltingEvent]:
    events = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        stage, steps, length, program, output = line.split()
        if int(length) != len(program):
            raise ValueError(f"length field disagrees with program {program!r}")
        events.append(HaltingEvent(program, "" if output == "-" else output, int(steps), int(stage)))
    return events


# ---------------------------------------------------------------------------
# machines


class Machine:
    """Common surface: ``run`` plus program generation.

    Subclasses that can list the programs printing a given string up to a
    length bound implement ``descriptions``; the complexity functions then
    avoid full enumeration.  The list must contain every shortest such
    program, and may omit longer ones that are also slower.
    """

    name = "machine"

    def run(self, p: str, budget: int) -> RunResult:
        raise NotImplementedError

    def is_program(self, p: str) -> bool:
        raise NotImplementedError

    def programs(self, max_len: int) -> Iterator[str]:
        """Well-formed programs of length ``<= max_len``, length-lex order."""
        for p in strings_upto(max_len):
            if self.is_program(p):
                yield p

    def descriptions(self, x: str, max_len: int) -> Optional[list[str]]:
        return None


@dataclass(frozen=True)
class CodecMachine(Machine):
    """Prefix-free decoder.

    ``0 g(l+1) w``           prints the ``l``-bit payload ``w``;
    ``10 g(n+1)``            prints ``0**n``;
    ``11 g(k) g(l+1) w``     prints ``w`` repeated ``k >= 2`` times.

    Steps are bits read plus bits written.
    """

    name = "codec"

    def decode(self, p: str) -> Optional[str]:
        if not p:
            return None
        if p[0] == "0":
            r = read_gamma(p, 1)
            if r is None:
                return None
            m, pos = r
            if pos + m - 1 != len(p):
                return None
            return p[pos:]
        if len(p) < 2:
            return None
        if p[1] == "0":
            r = read_gamma(p, 2)
            if r is None or r[1] != len(p):
                return None
            return "0" * (r[0] - 1)
        r = read_gamma(p, 2)
        if r is None or r[0] < 2:
            return None
        k, pos = r
        r = read_gamma(p, pos)
        if r is None:
            return None
        m, pos = r
        if pos + m - 1 != len(p):
            return None
        return p[pos:] * k

    def is_program(self, p: str) -> bool:
        return self.decode(p) is not None

    def run(self, p: str, budget: int) -> RunResult:
        out = self.decode(p)
        if out is None:
            return REJECT
        steps = len(p) + len(out)
        if steps > budget:
            return OUT_OF_BUDGET
        return RunResult(Status.HALT, out, steps)

    def programs(self, max_len: int) -> Iterator[str]:
        found: list[str] = []
        # literal
        l = 0
        while 1 + len(gamma(l + 1)) + l <= max_len:
            head = "0" + gamma(l + 1)
            found.extend(head + w for w in strings_upto_exact(l))
            l += 1
        # zero run
        n = 0
        while 2 + len(gamma(n + 1)) <= max_len:
            found.append("10" + gamma(n + 1))
            n += 1
        # repeat
        k = 2
        while 2 + len(gamma(k)) + 1 <= max_len:
            l = 0
            while 2 + len(gamma(k)) + len(gamma(l + 1)) + l <= max_len:
                head = "11" + gamma(k) + gamma(l + 1)
                found.extend(head + w for w in strings_upto_exact(l))
                l += 1
            k += 1
        found.sort(key=lambda s: (len(s), s))
        return iter(found)

    def descriptions(self, x: str, max_len: int) -> list[str]:
        out = ["0" + gamma(len(x) + 1) + x]
        if "1" not in x:
            out.append("10" + gamma(len(x) + 1))
        n = len(x)
        for k in range(2, n + 1):
            if n % k == 0 and x[: n // k] * k == x:
                u = x[: n // k]
                out.append("11" + gamma(k) + gamma(len(u) + 1) + u)
        if n == 0:
            # empty payload repeated: the k = 2, 3 forms are the shortest and fastest
            out.extend("11" + gamma(k) + "1" for k in (2, 3))
        return sorted((p for p in out if len(p) <= max_len), key=lambda s: (len(s), s))


@dataclass(frozen=True)
class PlainCodecMachine(CodecMachine):
    """Same modes as :class:`CodecMachine`, payload length read off the program end.

    Not prefix-free; it defines the plain complexity used by :func:`c_approx`.
    """

    name = "plain"

    def decode(self, p: str) -> Optional[str]:
        if not p:
            return None
        if p[0] == "0":
            return p[1:]
        if len(p) < 2:
            return None
        if p[1] == "0":
            r = read_gamma(p, 2)
            if r is None or r[1] != len(p):
                return None
            return "0" * (r[0] - 1)
        r = read_gamma(p, 2)
        if r is None or r[0] < 2:
            return None
        k, pos = r
        return p[pos:] * k

    def programs(self, max_len: int) -> Iterator[str]:
        return Machine.programs(self, max_len)

    def descriptions(self, x: str, max_len: int) -> list[str]:
        out = ["0" + x]
        if "1" not in x:
            out.append("10" + gamma(len(x) + 1))
        n = len(x)
        for k in range(2, n + 1):
            if n % k == 0 and x[: n // k] * k == x:
                out.append("11" + gamma(k) + x[: n // k])
        if n == 0:
            out.extend("11" + gamma(k) for k in (2, 3))
        return sorted((p for p in out if len(p) <= max_len), key=lambda s: (len(s), s))


def strings_upto_exact(length: int) -> Iterator[str]:
    if length == 0:
        yield ""
        return
    for v in range(1 << length):
        yield format(v, f"0{length}b")


# ---------------------------------------------------------------------------
# register machine

HALT, INC, DECJZ, OUT = "000", "001", "010", "011"


class Instr(NamedTuple):
    op: str
    reg: int = 0
    delta: int = 0
    bit: str = ""


def encode_instr(ins: Instr) -> str:
    if ins.op == "HALT":
        return HALT
    if ins.op == "INC":
        return INC + format(ins.reg, "02b")
    if ins.op == "DECJZ":
        sign = "1" if ins.delta < 0 else "0"
        return DECJZ + format(ins.reg, "02b") + sign + gamma(abs(ins.delta) + 1)
    if ins.op == "OUT":
        return OUT + ins.bit
    raise ValueError(f"unknown opcode {ins.op}")


def parse_instrs(bits: str) -> Optional[list[Instr]]:
    prog = []
    pos = 0
    n = len(bits)
    while pos < n:
        op = bits[pos:pos + 3]
        pos += 3
        if len(op) < 3:
            return None
        if op == HALT:
            prog.append(Instr("HALT"))
        elif op == INC:
            if pos + 2 > n:
                return None
            prog.append(Instr("INC", int(bits[pos:pos + 2], 2)))
            pos += 2
        elif op == DECJZ:
            if pos + 3 > n:
                return None
            reg = int(bits[pos:pos + 2], 2)
            neg = bits[pos + 2] == "1"
            r = read_gamma(bits, pos + 3)
            if r is None:
                return None
            mag, pos = r[0] - 1, r[1]
            if neg and mag == 0:
                return None  # "-0" would give the jump two encodings
            prog.append(Instr("DECJZ", reg, -mag if neg else mag))
        elif op == OUT:
            if pos + 1 > n:
                return None
            prog.append(Instr("OUT", bit=bits[pos]))
            pos += 1
        else:
            return None
    return prog


def assemble(instrs: Sequence[Instr]) -> str:
    """Prefix the self-delimiting length header to an instruction list."""
    body = "".join(encode_instr(i) for i in instrs)
    return gamma(len(body) + 1) + body


@dataclass(frozen=True)
class DovetailMachine(Machine):
    """Four unbounded registers; ``INC r``, ``DECJZ r d``, ``OUT b``, ``HALT``.

    A program is ``gamma(len+1)`` followed by ``len`` instruction bits that
    must parse exactly.  Opcodes are three bits (``000`` halt, ``001`` inc,
    ``010`` decrement-or-jump, ``011`` out); operands are two register bits,
    a sign bit with a gamma-coded jump magnitude, or one output bit.
    ``DECJZ`` jumps relative to itself when the register is zero.  Control
    leaving the instruction list halts the machine.  One executed
    instruction is one step.
    """

    name = "dovetail"

    def split(self, p: str) -> Optional[list[Instr]]:
        r = read_gamma(p, 0)
        if r is None:
            return None
        m, pos = r
        if pos + m - 1 != len(p):
            return None
        return parse_instrs(p[pos:])

    def is_program(self, p: str) -> bool:
        return self.split(p) is not None

    def run(self, p: str, budget: int) -> RunResult:
        prog = self.split(p)
        if prog is None:
            return REJECT
        regs = [0, 0, 0, 0]
        out = []
        pc = 0
        steps = 0
        n = len(prog)
        while 0 <= pc < n:
            if steps >= budget:
                return OUT_OF_BUDGET
            ins = prog[pc]
            steps += 1
            if ins.op == "HALT":
                break
            if ins.op == "INC":
                regs[ins.reg] += 1
                pc += 1
            elif ins.op == "DECJZ":
                if regs[ins.reg] == 0:
                    pc += ins.delta
                else:
                    regs[ins.reg] -= 1
                    pc += 1
            else:
                out.append(ins.bit)
                pc += 1
        return RunResult(Status.HALT, "".join(out), steps)

    def programs(self, max_len: int) -> Iterator[str]:
        found = []
        body_len = 0
        while len(gamma(body_len + 1)) + body_len <= max_len:
            head = gamma(body_len + 1)
            found.extend(head + body for body in _instr_bodies(body_len))
            body_len += 1
        found.sort(key=lambda s: (len(s), s))
        return iter(found)


@functools.lru_cache(maxsize=None)
def _instr_bodies(length: int) -> tuple[str, ...]:
    """Every instruction string of exactly ``length`` bits that parses."""
    if length == 0:
        return ("",)
    out = []
    for first in _first_instrs(length):
        for rest in _instr_bodies(length - len(first)):
            out.append(first + rest)
    return tuple(out)


def _first_instrs(max_len: int) -> list[str]:
    cands = [HALT]
    cands += [INC + format(r, "02b") for r in range(4)]
    cands += [OUT + "0", OUT + "1"]
    mag = 0
    while 6 + len(gamma(mag + 1)) <= max_len:
        for r in range(4):
            cands.append(DECJZ + format(r, "02b") + "0" + gamma(mag + 1))
            if mag:
                cands.append(DECJZ + format(r, "02b") + "1" + gamma(mag + 1))
        mag += 1
    return [c for c in cands if len(c) <= max_len]


@dataclass(frozen=True)
class JoinMachine(Machine):
    """``0q`` runs ``left`` on ``q``; ``1q`` runs ``right`` on ``q``.

    The standard way to get one prefix-free machine that is within one bit
    of each of two others.
    """

    left: Machine
    right: Machine
    name = "join"

    def is_program(self, p: str) -> bool:
        if not p:
            return False
        return (self.left if p[0] == "0" else self.right).is_program(p[1:])

    def run(self, p: str, budget: int) -> RunResult:
        if not p:
            return REJECT
        inner = (self.left if p[0] == "0" else self.right).run(p[1:], max(budget - 1, 0))
        if inner.status is Status.REJECT:
            return REJECT
        if inner.status is Status.OUT_OF_BUDGET or budget < 1:
            return OUT_OF_BUDGET
        return RunResult(Status.HALT, inner.output, inner.steps + 1)

    def programs(self, max_len: int) -> Iterator[str]:
        found = ["0" + q for q in self.left.programs(max_len - 1)]
        found += ["1" + q for q in self.right.programs(max_len - 1)]
        found.sort(key=lambda s: (len(s), s))
        return iter(found)

    def descriptions(self, x: str, max_len: int) -> Optional[list[str]]:
        a = self.left.descriptions(x, max_len - 1)
        b = self.right.descriptions(x, max_len - 1)
        if a is None or b is None:
            return None
        out = ["0" + q for q in a] + ["1" + q for q in b]
        return sorted(out, key=lambda s: (len(s), s))


# ---------------------------------------------------------------------------
# operations


def run_program(machine: Machine, p: str, budget: int) -> RunResult:
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    return machine.run(p, budget)


def enumerate_halting(machine: Machine, budget: int) -> list[HaltingEvent]:
    """Halting events of the stage-``budget`` dovetail, in discovery order.

    Discovery order is by stage, then by program in length-lex order.
    """
    return list(_enumerate(machine, budget))


@functools.lru_cache(maxsize=64)
def _enumerate(machine: Machine, budget: int) -> tuple[HaltingEvent, ...]:
    if budget <= 0:
        return ()
    events = []
    for p in machine.programs(budget):
        r = machine.run(p, budget)
        if r.halted:
            events.append(HaltingEvent(p, r.output, r.steps, max(len(p), r.steps)))
    events.sort(key=lambda e: (e.stage, len(e.program), e.program))
    return tuple(events)


@functools.lru_cache(maxsize=64)
def _k_table(machine: Machine, budget: int) -> dict[str, int]:
    table: dict[str, int] = {}
    for e in _enumerate(machine, budget):
        if e.output not in table or len(e.program) < table[e.output]:
            table[e.output] = len(e.program)
    return table


def k_approx(machine: Machine, x: str, budget: int) -> Value:
    """Shortest program printing ``x`` found by the stage-``budget`` dovetail."""
    if budget <= 0:
        return INF
    cands = machine.descriptions(x, budget)
    if cands is not None:
        for p in cands:
            r = machine.run(p, budget)
            if r.halted and r.output == x:
                return len(p)
        return INF
    return _k_table(machine, budget).get(x, INF)


def c_approx(x: str, budget: int) -> Value:
    """Plain complexity of ``x`` on :class:`PlainCodecMachine` at ``budget``."""
    return k_approx(PLAIN, x, budget)


def literal_length(n: int) -> int:
    """Length of the literal-mode codec program for an ``n``-bit string."""
    return 1 + len(gamma(n + 1)) + n


def stabilization_bound(n: int) -> int:
    """A budget after which ``k_approx`` on the codec machine is exact for length-``n`` strings.

    ``L = n + 2 floor(log2(n+1)) + 3`` bounds the shortest program length
    from above; the bound is (number of strings of length <= L) times L.
    """
    L = n + 2 * ((n + 1).bit_length() - 1) + 3
    return ((1 << (L + 1)) - 1) * L


CODEC = CodecMachine()
PLAIN = PlainCodecMachine()
DOVETAIL = DovetailMachine()
