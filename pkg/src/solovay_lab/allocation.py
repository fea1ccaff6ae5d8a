"""Splitting a cylinder into pieces whose lengths respect capacity bounds.

Given ``sigma``, an interval ``[s, t]`` and capacities ``a_i``, the loop
over ``i = s..t`` either skips ``i`` (when ``|S| >= a_i`` already) or puts
``i`` into ``J`` and adds the lexicographically first ``a_i - |S|`` length-``i``
pieces of the part of ``[sigma]`` not yet covered.

The uncovered part is always a right end of ``[sigma]`` because pieces are
taken leftmost first, so each length contributes one contiguous run of
strings.  Results store those runs: capacities may be astronomically large
(the covering procedure asks for ``2**(i - g(i) - k)`` pieces at lengths in
the millions) and only the run form stays small.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

from .core import ZERO, Dyadic
from .errors import PreconditionFailed


class Run(NamedTuple):
    """Strings of ``length`` bits with values ``start .. start+count-1``."""

    length: int
    start: int
    count: int

    def strings(self) -> Iterator[str]:
        for v in range(self.start, self.start + self.count):
            yield format(v, f"0{self.length}b") if self.length else ""


@dataclass
class AllocationResult:
    sigma: str
    J: list[int] = field(default_factory=list)
    runs: list[Run] = field(default_factory=list)

    @property
    def size(self) -> int:
        return sum(r.count for r in self.runs)

    @property
    def S(self) -> list[str]:
        """Materialized piece set (only sensible for small results)."""
        return [w for r in self.runs for w in r.strings()]

    @property
    def lengths(self) -> list[int]:
        return [r.length for r in self.runs]

    def measure(self) -> Dyadic:
        total = ZERO
        for r in self.runs:
            total = total + Dyadic(r.count, r.length)
        return total

    def count_upto(self, j: int) -> int:
        return sum(r.count for r in self.runs if r.length <= j)

    def to_json(self) -> dict:
        return {"J": list(self.J), "S": self.S}


def capacity_weight(s: int, caps: Sequence[int]) -> Dyadic:
    total = ZERO
    for offset, a in enumerate(caps):
        total = total + Dyadic(a, s + offset)
    return total


def allocate(sigma: str, interval: tuple[int, int], caps: Sequence[int]) -> AllocationResult:
    """Run the capacity-bounded piece allocation on ``[sigma]``.

    ``caps[j]`` is the capacity of length ``s + j``.
    """
    s, t = interval
    if len(caps) != max(t - s + 1, 0):
        raise ValueError(f"need {t - s + 1} capacities for [{s},{t}], got {len(caps)}")
    if any(a < 0 for a in caps):
        raise ValueError("capacities are nonnegative")
    n = len(sigma)
    if s < n:
        raise PreconditionFailed(reason="s<|sigma|", s=s, sigma_len=n)
    have = capacity_weight(s, caps)
    need = Dyadic.pow2(n - 1)
    if have < need:
        raise PreconditionFailed(reason="capacity", weight=have, required=need)

    result = AllocationResult(sigma)
    base = int(sigma, 2) if sigma else 0
    # cursor/end are positions among length-i strings: [cursor, end) is uncovered
    cursor = base << (s - n)
    end = (base + 1) << (s - n)
    size = 0
    for offset, a in enumerate(caps):
        i = s + offset
        if offset:
            cursor <<= 1
            end <<= 1
        if size >= a:
            continue
        result.J.append(i)
        take = min(a - size, end - cursor)
        if take > 0:
            result.runs.append(Run(i, cursor, take))
            cursor += take
            size += take
    return result
