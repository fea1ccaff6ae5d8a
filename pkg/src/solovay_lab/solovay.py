"""Solovay functions and the weight-based criterion around them.

This module holds Solovay's function ``g_S`` over an explicit triple code,
the tail cut-off used when a prefix of ``Omega_f`` is known, the
Martin-Lof test component ``U_c`` built from increments of a right-c.e.
``f``, the rewrite of a series into an order, and the interval partitions
that let one weak Solovay function dominate another.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Sequence

from .core import (
    ZERO,
    Dyadic,
    StagedFunction,
    Value,
    binary,
    dy_partial_weight,
    is_inf,
    weight,
)
from .errors import BudgetTooSmall, HorizonTooSmall, InvalidPartition, NotInRange
from .machine import Machine, RunResult, Status, gamma, read_gamma

# ---------------------------------------------------------------------------
# triple code


def _d(w: str) -> str:
    return gamma(len(w) + 1) + w


def triple_codec(x: str, p: str, t: int) -> str:
    """Self-delimiting code ``D(x) D(p) D(binary(t))`` with ``D(w) = gamma(|w|+1) w``."""
    if t < 0:
        raise ValueError("step counts are nonnegative")
    return _d(x) + _d(p) + _d(binary(t))


def triple_decode(m: str) -> tuple[str, str, int]:
    pos = 0
    parts = []
    for _ in range(3):
        r = read_gamma(m, pos)
        if r is None:
            raise NotInRange(m=m or "-")
        length, pos = r[0] - 1, r[1]
        if pos + length > len(m):
            raise NotInRange(m=m)
        parts.append(m[pos:pos + length])
        pos += length
    if pos != len(m) or parts[2].startswith("0"):
        raise NotInRange(m=m)
    return parts[0], parts[1], int(parts[2], 2) if parts[2] else 0


def g_solovay(machine: Machine, m: str, budget: int) -> int:
    """``|p|`` when ``m`` codes ``(x, p, t)`` and ``p`` prints ``x`` in exactly ``t`` steps, else ``2|m|``."""
    try:
        x, p, t = triple_decode(m)
    except NotInRange:
        return 2 * len(m)
    if t > budget:
        raise BudgetTooSmall(t=t, budget=budget)
    r = machine.run(p, t)
    if r.halted and r.output == x and r.steps == t:
        return len(p)
    return 2 * len(m)


@dataclass(frozen=True)
class TripleMachine(Machine):
    """On ``p``, simulates ``base`` and prints ``triple_codec(base(p), p, steps)``.

    Steps are the simulated steps plus the bits written.
    """

    base: Machine
    name = "triple"

    def is_program(self, p: str) -> bool:
        return self.base.is_program(p)

    def run(self, p: str, budget: int) -> RunResult:
        inner = self.base.run(p, budget)
        if not inner.halted:
            return inner
        m = triple_codec(inner.output, p, inner.steps)
        steps = inner.steps + len(m)
        if steps > budget:
            return RunResult(Status.OUT_OF_BUDGET)
        return RunResult(Status.HALT, m, steps)

    def programs(self, max_len: int) -> Iterator[str]:
        return self.base.programs(max_len)

    def descriptions(self, x: str, max_len: int) -> list[str]:
        try:
            _, p, _ = triple_decode(x)
        except NotInRange:
            return []
        if len(p) > max_len or not self.base.is_program(p):
            return []
        return [p]


# ---------------------------------------------------------------------------
# series


@dataclass
class OmegaSeries:
    """Partial sums of ``sum_n 2**-f(n)`` at a horizon and (optionally) a stage."""

    source: Sequence[Value] | StagedFunction
    horizon: int
    stage: Optional[int] = None

    @property
    def terms(self) -> list[Value]:
        if isinstance(self.source, StagedFunction):
            t = self.source.T if self.stage is None else self.stage
            return self.source.stage(t)
        return list(self.source)

    @property
    def partial_sum(self) -> Dyadic:
        return dy_partial_weight(self.terms, self.horizon)


def tail_cutoff(f: Sequence[Value], N: int, k: int, weight_cap: Dyadic) -> int:
    """Least ``s < N`` with ``cap - sum_{n<=s} 2**-f(n) <= 2**-k``.

    The caller certifies ``sum over all n <= cap``; under that certificate
    the tail beyond ``s`` weighs at most ``2**-k``.
    """
    if dy_partial_weight(f, N) > weight_cap:
        raise ValueError("partial weight already exceeds the certified cap")
    bound = Dyadic.pow2(k)
    partial = ZERO
    for s in range(N):
        partial = partial + weight(f[s])
        if weight_cap - partial <= bound:
            return s
    raise HorizonTooSmall(N=N, k=k)


# ---------------------------------------------------------------------------
# the test component U_c


class Increment(NamedTuple):
    n: int
    stage: int
    size: Dyadic
    left: Dyadic  # the running sum a_i before this increment
    cumulative: Dyadic  # b_i: increments due to n so far, this one included


class Interval(NamedTuple):
    stage: int
    left: Dyadic
    right: Dyadic

    @property
    def length(self) -> Dyadic:
        return self.right - self.left


def increments(f: StagedFunction) -> list[Increment]:
    """Increments of the lower approximation of ``Omega_f``, in (n, s) order.

    ``f`` must move in unit steps (see :func:`stage_refine`); the first
    finite value of a row counts as its appearance.
    """
    out = []
    a = ZERO
    for n, row in enumerate(f.rows):
        b = ZERO
        prev: Value | None = None
        for s, v in enumerate(row):
            if is_inf(v):
                prev = v
                continue
            if prev is None or is_inf(prev):
                d = Dyadic.pow2(v)
            elif prev - v == 1:
                d = Dyadic.pow2(prev)
            elif prev == v:
                continue
            else:
                raise ValueError(f"row {n} drops by {prev - v} at stage {s}; refine first")
            b = b + d
            out.append(Increment(n, s, d, a, b))
            a = a + d
            prev = v
    return out


@dataclass
class TestComponent:
    __test__ = False  # keep pytest from collecting it

    c: int
    intervals: list[Interval] = field(default_factory=list)
    matched: list[int] = field(default_factory=list)

    @property
    def total_length(self) -> Dyadic:
        total = ZERO
        for iv in self.intervals:
            total = total + iv.length
        return total

    def length_by_stage(self) -> list[tuple[int, Dyadic]]:
        """Cumulative length after each stage that added something."""
        out: list[tuple[int, Dyadic]] = []
        total = ZERO
        for iv in self.intervals:
            total = total + iv.length
            if out and out[-1][0] == iv.stage:
                out[-1] = (iv.stage, total)
            else:
                out.append((iv.stage, total))
        return out

    def dumps(self) -> str:
        return "".join(
            f"{self.c} {iv.stage} {iv.left.numerator} {iv.left.exponent} "
            f"{iv.right.numerator} {iv.right.exponent}\n"
            for iv in self.intervals
        )


def build_test_Uc(f: StagedFunction, k_table: StagedFunction, c: int, budget: int) -> TestComponent:
    """Replay the increments of ``Omega_f`` and cover the ``c``-matched ones.

    Stage ``u`` reveals increment ``u``; then every revealed, unmatched
    increment due to ``n`` is checked against ``k_table`` at stage ``u``:
    it is matched once ``2**(c+2) * b_i <= 2**-K_u(n)``.  A matched
    increment of size ``d`` adds an interval of length ``2d`` starting at
    the larger of its ``a_i`` and the right end of everything added so far.
    """
    incs = increments(f)
    comp = TestComponent(c)
    pending: list[int] = []
    sup = ZERO
    for u in range(budget):
        if u < len(incs):
            pending.append(u)
        still = []
        for i in pending:
            inc = incs[i]
            kv = k_table.at(inc.n, u) if inc.n < k_table.N else None
            if kv is not None and inc.cumulative.scale2(c + 2) <= weight(kv):
                left = max(inc.left, sup)
                right = left + inc.size.scale2(1)
                comp.intervals.append(Interval(u, left, right))
                comp.matched.append(i)
                sup = right
            else:
                still.append(i)
        pending = still
    return comp


# ---------------------------------------------------------------------------
# order from a series


def rewrite_to_order(k: Sequence[int]) -> list[int]:
    """Replace each ``2**-k_n`` by ``2**(m-k_n)`` copies of ``2**-m``, ``m`` the running max."""
    out: list[int] = []
    top = None
    for v in k:
        if v < 0:
            raise ValueError("exponents must be nonnegative")
        top = v if top is None else max(top, v)
        out.extend([top] * (1 << (top - v)))
    return out


# ---------------------------------------------------------------------------
# partitions and domination


@dataclass
class Partition:
    g: list[Value]
    p: int
    intervals: list[tuple[int, int]] = field(default_factory=list)
    stages: list[int] = field(default_factory=list)
    stuck: Optional[tuple[int, int]] = None

    def block_of(self, i: int) -> Optional[int]:
        for n, (s, t) in enumerate(self.intervals):
            if s <= i <= t:
                return n
        return None


def _block_weight(h: StagedFunction, s: int, t: int, stage: int) -> Dyadic:
    return dy_partial_weight([h.at(i, stage) for i in range(s, t + 1)], t - s + 1)


def partition_for(g: Sequence[Value], h: StagedFunction, p: int, horizon: int) -> Partition:
    """Cut ``N`` into consecutive blocks ``I_n = [s, t]`` with ``n < s < t``.

    For each ``n`` in the domain of ``g``, ``s`` is the least unused integer
    above ``n`` and ``t > s`` is the least stage with
    ``sum_{i in [s, t]} 2**-h_t(i) >= 2**-p * 2**-g(n)``.  ``t`` may not
    pass ``horizon`` nor the domain of ``h``; if it would, the partition
    records ``stuck = (n, s)`` and stops.
    """
    part = Partition(list(g), p)
    limit = min(horizon, h.N - 1)
    nxt = 0
    for n in range(len(g)):
        s = max(n + 1, nxt)
        target = weight(g[n]).scale2(-p)
        found = None
        for t in range(s + 1, limit + 1):
            if _block_weight(h, s, t, t) >= target:
                found = t
                break
        if found is None:
            part.stuck = (n, s)
            return part
        part.intervals.append((s, found))
        part.stages.append(found)
        nxt = found + 1
    return part


def dominate_solovay(g: Sequence[Value], h: StagedFunction, partition: Partition, c: int) -> list[Value]:
    """Freeze ``h`` on each block at the first stage the block inequality holds.

    On ``I_n`` the result is ``h_t`` for the least ``t`` with
    ``2**-g(n) <= 2**c * sum_{i in I_n} 2**-h_t(i)``.  Points outside every
    block keep their stage-0 value, which already bounds ``h`` from above.
    """
    out: list[Value] = [h.at(i, 0) for i in range(h.N)]
    for n, (s, t) in enumerate(partition.intervals):
        target = weight(g[n])
        for stage in range(h.T + 1):
            if _block_weight(h, s, t, stage).scale2(c) >= target:
                for i in range(s, t + 1):
                    out[i] = h.at(i, stage)
                break
        else:
            raise InvalidPartition(n=n, interval=f"{s}:{t}")
    return out
