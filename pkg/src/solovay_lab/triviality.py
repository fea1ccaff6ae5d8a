"""g-triviality measurements, trivial trees, order transforms and hitting sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence, Union

from .core import (
    INF,
    NEG_INF,
    ZERO,
    Dyadic,
    OrderFn,
    StagedFunction,
    Value,
    binary,
    is_inf,
    weight,
)
from .errors import NotCrossed, NoWitness
from .kc_coding import RequestSet
from .machine import HaltingEvent, Machine, k_approx
from .solovay import Partition

Table = Union[Sequence[Value], Callable[[int], Value]]


def _at(f: Table, n: int) -> Value:
    if callable(f):
        return f(n)
    return f[n] if n < len(f) else INF


def _diff(a: Value, b: Value) -> Value:
    """``a - b`` with ``x - inf = -inf`` and ``inf - x = inf`` for finite ``x``."""
    if is_inf(b):
        return NEG_INF
    return a - b


def trivial_constant(prefixes: Sequence[str], g: Table, machine: Machine, budget: int) -> Value:
    """``max_n K_budget(A|n) - g(n)`` over the given prefixes ``A|0, A|1, ...``."""
    for a, b in zip(prefixes, prefixes[1:]):
        if not b.startswith(a):
            raise ValueError("prefixes must extend one another")
    best: Value = NEG_INF
    for n, x in enumerate(prefixes):
        best = max(best, _diff(k_approx(machine, x, budget), _at(g, n)))
    return best


# ---------------------------------------------------------------------------
# requests for g-trivial sequences


class Emission(NamedTuple):
    sigma: str
    length: int
    witness: str


def build_requests_for_trivial(
    h: Table,
    d: int,
    partition: Partition,
    events: Iterable[HaltingEvent],
    horizon: int,
    c: int = 0,
) -> tuple[RequestSet, list[Emission]]:
    """Requests ``(sigma, g(n) + c + d)`` for every ``sigma`` of length ``n`` with a witness.

    A witness is a ``tau`` of length ``max I_n`` extending ``sigma`` such that
    every ``tau|i`` with ``i`` in ``I_n`` has an event of stage ``<= horizon``
    printing it from a program of length ``<= h(i) + d``.  Emissions come in
    ``(n, sigma)`` order, each ``sigma`` at most once.
    """
    best: dict[str, int] = {}
    for ev in events:
        if ev.stage > horizon:
            continue
        if ev.output not in best or len(ev.program) < best[ev.output]:
            best[ev.output] = len(ev.program)

    def described(w: str) -> bool:
        bound = _at(h, len(w))
        return w in best and not is_inf(bound) and best[w] <= bound + d

    requests = RequestSet()
    emitted: list[Emission] = []
    for n, (s, t) in enumerate(partition.intervals):
        gn = partition.g[n]
        if is_inf(gn):
            continue
        seen = set()
        for tau in sorted(w for w in best if len(w) == t):
            sigma = tau[:n]
            if sigma in seen:
                continue
            if all(described(tau[:i]) for i in range(s, t + 1)):
                seen.add(sigma)
                length = gn + c + d
                requests.add(sigma, length)
                emitted.append(Emission(sigma, length, tau))
    return requests, emitted


# ---------------------------------------------------------------------------
# trivial trees


@dataclass
class TrivialTree:
    levels: list[int]
    nodes: list[str] = field(default_factory=list)
    S: list[str] = field(default_factory=list)

    def dumps(self) -> str:
        members = set(self.S)
        return "".join(f"{len(w)} {w or '-'} {int(w in members)}\n" for w in self.nodes)


def tree_levels(g: Table, depth: int) -> list[int]:
    """The values ``g^{-1}(k)`` computed on ``g`` restricted to ``[0, depth]``.

    Those are the ``n < depth`` with ``g(n+1) > g(n)``, plus ``depth`` itself,
    whose inverse is clipped by the horizon.
    """
    if depth < 0:
        return []
    return [n for n in range(depth) if _at(g, n + 1) > _at(g, n)] + [depth]


def build_trivial_tree(g: Table, c: int, machine: Machine, budget: int, depth: int) -> TrivialTree:
    levels = tree_levels(g, depth)
    top = levels[-1] if levels else -1
    # good[j]: strings of length j all of whose prefixes meet the bound
    bound = _at(g, 0)
    good = [""] if k_approx(machine, "", budget) <= bound + c else []
    S: list[str] = []
    level_set = set(levels)
    for j in range(top + 1):
        if j in level_set:
            S.extend(good)
        if j == top:
            break
        bound = _at(g, j + 1)
        good = [w + b for w in good for b in "01" if k_approx(machine, w + b, budget) <= bound + c]
    nodes = {w[:i] for w in S for i in range(len(w) + 1)}
    return TrivialTree(levels, sorted(nodes, key=lambda w: (len(w), w)), sorted(S, key=lambda w: (len(w), w)))


# ---------------------------------------------------------------------------
# orders below a right-c.e. bound


def approximation(h0: Sequence[Sequence[int]], s: int, n: int) -> int:
    """``h_s(n) = max_{i <= n} h0_{n+s}(i)``; stages past the table repeat its last row."""
    row = h0[min(n + s, len(h0) - 1)]
    return max(row[: n + 1])


def change_points(h0: Sequence[Sequence[int]], N: int) -> list[int]:
    """The ``z`` stream: ``h_s(n)`` at ``s = 0`` and wherever it changes, in ``(n, s)`` order."""
    z = []
    for n in range(N + 1):
        prev = None
        for s in range(len(h0)):
            v = approximation(h0, s, n)
            if prev is None or v != prev:
                z.append(v)
            prev = v
    return z


def extend_block(g: Sequence[int], k: int) -> list[int]:
    """Grow the ``k``-block of ``g`` by one, shifting larger values right."""
    for j, v in enumerate(g):
        if v > k:
            return list(g[:j]) + [k] + list(g[j:-1])
    return list(g)


def rce_order_below(h0: Sequence[Sequence[int]], N: int, I: int) -> list[OrderFn]:
    """Approximants ``g_0 .. g_m`` on ``[0, N]``, ``m = min(I, len(z))``."""
    z = change_points(h0, N)
    g = list(range(N + 1))
    out = [OrderFn(list(g))]
    for k in z[:I]:
        g = extend_block(g, k)
        out.append(OrderFn(list(g)))
    return out


# ---------------------------------------------------------------------------
# gap points


class GapPoint(NamedTuple):
    m: int
    stage: int
    lower: Dyadic


def _value_of(sigma: str) -> Dyadic:
    return Dyadic(int(sigma, 2), len(sigma))


def gap_point(g: StagedFunction, sigma: str, budget: int) -> GapPoint:
    """First stage whose lower sum of ``Omega_g`` passes ``0.sigma``.

    Stage ``t`` counts the terms ``2**-g_t(n)`` with ``n < t``.  ``m`` is one
    above the largest index that has contributed by then.
    """
    if not sigma:
        raise ValueError("sigma must be nonempty")
    target = _value_of(sigma)
    for t in range(budget + 1):
        lower = ZERO
        top = -1
        for n in range(min(t, g.N)):
            v = g.at(n, t)
            if not is_inf(v):
                lower = lower + weight(v)
                top = n
        if lower > target:
            return GapPoint(top + 1, t, lower)
    raise NotCrossed(sigma=sigma, budget=budget)


# ---------------------------------------------------------------------------
# hitting sets


@dataclass
class HittingSet:
    c: int
    stage: int
    members: list[int]


def hitting_set_stage(f: Table, c: int, machine: Machine, s: int, N: int) -> HittingSet:
    members = [n for n in range(N + 1) if _at(f, n) <= k_approx(machine, binary(n), s) + c]
    return HittingSet(c, s, members)


def witness_high_complexity(f: Table, c: int, k: int, machine: Machine, s: int, N: int) -> int:
    """Least hitting-set member ``n <= N`` with ``f(n) >= k + c``."""
    for n in hitting_set_stage(f, c, machine, s, N).members:
        if _at(f, n) >= k + c:
            return n
    raise NoWitness(k=k, c=c, N=N)
