"""Bounded request sets and the online Kraft-Chaitin allocator.

The free part of the unit interval is kept as a set of aligned dyadic
intervals (identified with bit strings), at most one per size.  A request
for length ``n`` splits the smallest free interval of size ``>= 2**-n``,
always keeping the left half.  Because the free sizes are the binary digits
of ``1 - weight``, a request fits whenever the weight cap allows it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .core import ONE, ZERO, Dyadic
from .errors import WeightOverflow


class Request(NamedTuple):
    label: str
    length: int


class Assigned(NamedTuple):
    label: str
    length: int
    codeword: str


@dataclass
class RequestSet:
    requests: list[Request] = field(default_factory=list)
    weight: Dyadic = ZERO

    def add(self, label: str, length: int) -> None:
        w = self.weight + Dyadic.pow2(length)
        if w > ONE:
            raise WeightOverflow(len(self.requests), label, length)
        self.requests.append(Request(label, length))
        self.weight = w

    def __len__(self) -> int:
        return len(self.requests)

    def __iter__(self):
        return iter(self.requests)


class KCState:
    """Sequential allocator; callers serialize :meth:`insert` calls."""

    def __init__(self):
        # free[n] is the one free aligned interval of size 2**-n, if any
        self.free: dict[int, str] = {0: ""}
        self.weight = ZERO
        self.count = 0
        self.assigned: list[Assigned] = []

    def insert(self, label: str, length: int) -> str:
        if length < 0:
            raise ValueError("request lengths are nonnegative")
        if self.weight + Dyadic.pow2(length) > ONE:
            raise WeightOverflow(self.count, label, length)
        size = max((m for m in self.free if m <= length), default=None)
        if size is None:  # unreachable while the weight invariant holds
            raise AssertionError("free list inconsistent with weight")
        node = self.free.pop(size)
        while size < length:
            self.free[size + 1] = node + "1"
            node += "0"
            size += 1
        self.weight = self.weight + Dyadic.pow2(length)
        self.count += 1
        self.assigned.append(Assigned(label, length, node))
        return node


def kc_insert(state: KCState, request: tuple[str, int]) -> str:
    label, length = request
    return state.insert(label, length)


def kc_encode_all(requests: Iterable[tuple[str, int]]) -> list[Assigned]:
    state = KCState()
    for label, length in requests:
        state.insert(label, length)
    return state.assigned


def is_prefix_free(words: Iterable[str]) -> bool:
    ws = sorted(words)
    # in sorted order a prefix sits right before some extension of it
    return all(not ws[i + 1].startswith(ws[i]) for i in range(len(ws) - 1))


def load_requests(text: str) -> list[Request]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'label length'")
        out.append(Request(parts[0], int(parts[1])))
    return out


def dump_assignment(assigned: Iterable[Assigned]) -> str:
    return "".join(f"{a.label} {a.length} {a.codeword or '-'}\n" for a in assigned)
