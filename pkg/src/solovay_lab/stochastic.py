"""Zero insertion driven by computation times, and the rule that finds the zeros.

A functional ``phi`` computes ``h^{-1}(k)`` from an oracle in ``t(k)``
declared steps.  Inserting the ``k``-th zero at ``n_k = h^{-1}(k) + t(k)``
yields a sequence ``B`` that a selection rule can decode: at position ``n``
it reruns ``phi`` with step cap ``n`` on the bits it has not selected and
selects bit ``n`` exactly when ``value + steps == n``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple, Optional, Sequence, Union

from .core import OrderFn, h_inverse
from .errors import EmptySelection, FunctionalMismatch, NonMonotonePositions


class Answer(NamedTuple):
    value: int
    steps: int


class NeedMoreOracle(NamedTuple):
    required: int


class Diverge(NamedTuple):
    cap: int


Outcome = Union[Answer, NeedMoreOracle, Diverge]


class Entry(NamedTuple):
    prefix_len: int
    value: int
    steps: int


@dataclass
class ScriptedFunctional:
    """Table-driven ``phi``: query ``k`` reads ``prefix_len`` oracle bits and
    answers ``value`` after ``steps`` steps.  Unscripted queries diverge.

    The answer does not depend on the oracle bits themselves, only on having
    enough of them, so it is trivially monotone in the oracle prefix.
    """

    script: Mapping[int, Entry] = field(default_factory=dict)

    def query(self, oracle: str, k: int, cap: Optional[int] = None) -> Outcome:
        entry = self.script.get(k)
        if entry is None:
            return Diverge(cap if cap is not None else -1)
        if cap is not None and entry.steps > cap:
            return Diverge(cap)
        if len(oracle) < entry.prefix_len:
            return NeedMoreOracle(entry.prefix_len)
        return Answer(entry.value, entry.steps)

    def dumps(self) -> str:
        return "".join(f"{k} {e.prefix_len} {e.value} {e.steps}\n" for k, e in sorted(self.script.items()))

    @classmethod
    def loads(cls, text: str) -> "ScriptedFunctional":
        script = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise ValueError(f"line {lineno}: expected 'k prefixLenRequired value steps'")
            k, need, value, steps = map(int, parts)
            script[k] = Entry(need, value, steps)
        return cls(script)


@dataclass
class InsertionRecord:
    B: str
    inserted: list[int]
    times: list[int]

    def delete_inserted(self) -> str:
        marks = set(self.inserted)
        return "".join(b for i, b in enumerate(self.B) if i not in marks)


def insert_zeroes(A: str, h: OrderFn, phi: ScriptedFunctional, N: int) -> InsertionRecord:
    """Insert zeros into ``A`` at ``n_k = h^{-1}(k) + t(k)`` below ``N``.

    ``A`` must supply at least ``N`` bits; ``phi`` receives all of them.
    Queries stop once a position leaves ``[0, N)`` or ``h^{-1}(k)`` reaches
    the end of ``h``'s domain (the true inverse is then unknown).
    """
    if len(A) < N:
        raise ValueError(f"need {N} bits of A, got {len(A)}")
    positions: list[int] = []
    times: list[int] = []
    k = 0
    while True:
        inv = h_inverse(h, k)
        if inv.clipped:
            break
        out = phi.query(A, k)
        if not isinstance(out, Answer):
            raise FunctionalMismatch(k=k, expected=inv.value, got=type(out).__name__)
        if out.value != inv.value:
            raise FunctionalMismatch(k=k, expected=inv.value, got=out.value)
        n_k = out.value + out.steps
        if positions and n_k <= positions[-1]:
            raise NonMonotonePositions(k=k, previous=positions[-1], position=n_k)
        if n_k >= N:
            break
        positions.append(n_k)
        times.append(out.steps)
        k += 1

    marks = set(positions)
    out_bits = []
    a = iter(A)
    for i in range(N):
        out_bits.append("0" if i in marks else next(a))
    return InsertionRecord("".join(out_bits), positions, times)


class Selection(NamedTuple):
    positions: list[int]
    bits: str
    oracle_used: list[int]  # oracle bits read by each successful query


def selection_rule_run(B: str, phi: ScriptedFunctional) -> Selection:
    """Scan ``B`` left to right, selecting where ``phi``'s timing says a zero was put."""
    positions: list[int] = []
    bits: list[str] = []
    used: list[int] = []
    x: list[str] = []
    k = 0
    for n, b in enumerate(B):
        out = phi.query("".join(x), k, cap=n)
        if isinstance(out, Answer) and out.value + out.steps == n:
            positions.append(n)
            bits.append(b)
            used.append(phi.script[k].prefix_len)
            k += 1
        else:
            x.append(b)
    return Selection(positions, "".join(bits), used)


def selected_bias(bits: str) -> Fraction:
    """Exact frequency of ones in a selection."""
    if not bits:
        raise EmptySelection()
    return Fraction(bits.count("1"), len(bits))


def sparsity_constant(positions: Sequence[int], h: OrderFn) -> int:
    """``max_n (#positions below n) - h(n)`` over the domain of ``h``."""
    best = None
    j = 0
    for n in range(len(h)):
        while j < len(positions) and positions[j] < n:
            j += 1
        v = j - h(n)
        best = v if best is None else max(best, v)
    return best if best is not None else 0


# ---------------------------------------------------------------------------
# instance generation


@dataclass
class Instance:
    A: str
    h: OrderFn
    phi: ScriptedFunctional


def random_instance(seed: int, N: int) -> Instance:
    """A random ``(A, h, phi)`` with ``h(0) = 0``, ``h(n) <= n`` and increasing times.

    Each query reads at most ``t(k)`` oracle bits, which keeps every query
    answerable from the non-selected bits the rule has seen by ``n_k``.
    """
    rng = random.Random(seed)
    A = "".join(rng.choice("01") for _ in range(N))
    values = [0]
    for n in range(1, N + 1):
        step = 1 if rng.random() < 0.25 else 0
        values.append(min(values[-1] + step, n))
    h = OrderFn(values)

    script = {}
    t = rng.randint(1, 4)
    k = 0
    while True:
        inv = h_inverse(h, k)
        if inv.clipped:
            break
        script[k] = Entry(rng.randint(0, t), inv.value, t)
        if inv.value + t >= N:
            break
        t += rng.randint(1, 3)
        k += 1
    return Instance(A, h, ScriptedFunctional(script))
