"""Randomness deficiency and the length-controlled cover of a test level.

:func:`cover_with_lengths` re-expresses a level ``U_k`` of a Martin-Lof
test (a list of cylinders) as a set ``S_k`` of strings whose lengths are
dictated by a Solovay-type function ``g``, while enumerating a companion
interval set ``V_k`` that tests the randomness of ``sum 2**-g(i)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Optional, Sequence, Union

from .allocation import AllocationResult, allocate
from .core import INF, NEG_INF, ZERO, Dyadic, Value, is_inf, weight
from .kc_coding import is_prefix_free
from .machine import Machine, k_approx

Table = Union[Sequence[Value], Mapping[int, Value]]


def deficiency(machine: Machine, x: str, budget: int):
    """``|x| - K_budget(x)``; ``-inf`` while no description has been found."""
    k = k_approx(machine, x, budget)
    if is_inf(k):
        return NEG_INF
    return len(x) - k


def _log_ok(v: Value, i: int) -> bool:
    # v <= 2 log2(i)  <=>  2**v <= i**2
    return not is_inf(v) and (1 << v) <= i * i


def preprocess_g(g: Table) -> Table:
    """Keep ``g(i)`` where ``g(i) <= 2 log2 i``, otherwise replace it by ``inf``.

    Sparse mappings stay sparse: dropped entries are simply removed.
    """
    if isinstance(g, Mapping):
        return {i: v for i, v in g.items() if _log_ok(v, i)}
    return [v if _log_ok(v, i) else INF for i, v in enumerate(g)]


class _Weights:
    """Prefix sums of ``2**-g(i)`` over a dense or sparse table."""

    def __init__(self, g: Table):
        if isinstance(g, Mapping):
            items = sorted((i, v) for i, v in g.items() if not is_inf(v))
        else:
            items = [(i, v) for i, v in enumerate(g) if not is_inf(v)]
        self.points = [i for i, _ in items]
        self.values = dict(items)
        self.prefix = [ZERO]
        for _, v in items:
            self.prefix.append(self.prefix[-1] + weight(v))

    def below(self, s: int) -> Dyadic:
        """``sum_{i<s} 2**-g(i)``."""
        import bisect

        return self.prefix[bisect.bisect_left(self.points, s)]

    def value(self, i: int) -> Value:
        return self.values.get(i, INF)

    def crossing(self, s: int, threshold: Dyadic) -> Optional[int]:
        """Least ``t >= s`` with ``sum_{s<=i<=t} 2**-g(i) > threshold``."""
        import bisect

        base = self.below(s)
        j = bisect.bisect_left(self.points, s)
        while j < len(self.points):
            if self.prefix[j + 1] - base > threshold:
                return self.points[j]
            j += 1
        return None


class CoverStatus(enum.Enum):
    COMPLETED = "Completed"
    STUCK_AT_STEP4 = "StuckAtStep4"
    BUDGET_EXHAUSTED = "BudgetExhausted"


class Piece(NamedTuple):
    sigma: str
    stage: int
    s: int
    t: int
    allocation: AllocationResult


class VInterval(NamedTuple):
    sigma: str
    left: Dyadic
    right: Dyadic

    @property
    def length(self) -> Dyadic:
        return self.right - self.left


@dataclass
class CoverRun:
    k: int
    pieces: list[Piece] = field(default_factory=list)
    V: list[VInterval] = field(default_factory=list)
    status: CoverStatus = CoverStatus.COMPLETED
    stuck: Optional[tuple[str, int]] = None
    mentioned: list[int] = field(default_factory=list)

    @property
    def V_length(self) -> Dyadic:
        total = ZERO
        for iv in self.V:
            total = total + iv.length
        return total

    @property
    def S_measure(self) -> Dyadic:
        total = ZERO
        for piece in self.pieces:
            total = total + piece.allocation.measure()
        return total


def cylinder_measure(sigmas: Sequence[str]) -> Dyadic:
    total = ZERO
    for sigma in sigmas:
        total = total + Dyadic.pow2(len(sigma))
    return total


def cover_with_lengths(
    cylinders: Sequence[tuple[int, str]],
    g: Table,
    k: int,
    horizon_N: int,
    budget: int,
) -> CoverRun:
    """Process cylinders in stage order, one allocation per cylinder.

    For each ``sigma``: take ``N`` one above every integer recorded so far
    (``k``, stages, lengths, earlier ``N``, ``s`` and ``t``), set
    ``s = 2**N``, enumerate ``[P(s), P(s) + 2**(1+k-|sigma|)]`` into ``V``
    where ``P(s) = sum_{i<s} 2**-g(i)``, wait for the least ``t`` at which
    ``sum_{i=s}^{t} 2**-g(i)`` passes ``2**(1+k-|sigma|)``, then allocate
    ``[sigma]`` over ``[s, t]`` with capacities ``floor(2**(i-g(i)-k))``.

    ``N > horizon_N`` or a crossing past index ``budget`` ends the run with
    ``BudgetExhausted``; a crossing that the table can never produce (the
    table is zero weight beyond its entries) ends it with ``StuckAtStep4``.
    """
    sigmas = [sigma for _, sigma in cylinders]
    if not is_prefix_free(sigmas):
        raise ValueError("cylinders must form an antichain")
    if cylinder_measure(sigmas) > Dyadic.pow2(2 * k + 1):
        raise ValueError("cylinder measure exceeds 2**(-2k-1)")

    w = _Weights(g)
    run = CoverRun(k)
    run.mentioned.append(k)
    for stage, sigma in sorted(cylinders, key=lambda c: c[0]):
        run.mentioned.extend([stage, len(sigma)])
        N = max(run.mentioned) + 1
        if N > horizon_N:
            run.status = CoverStatus.BUDGET_EXHAUSTED
            return run
        s = 1 << N
        run.mentioned.extend([N, s])
        width = Dyadic.pow2(len(sigma) - 1 - k)
        left = w.below(s)
        run.V.append(VInterval(sigma, left, left + width))
        t = w.crossing(s, width)
        if t is None:
            run.status = CoverStatus.STUCK_AT_STEP4
            run.stuck = (sigma, s)
            return run
        if t > budget:
            run.status = CoverStatus.BUDGET_EXHAUSTED
            return run
        run.mentioned.append(t)
        caps = [_capacity(i, w.value(i), k) for i in range(s, t + 1)]
        run.pieces.append(Piece(sigma, stage, s, t, allocate(sigma, (s, t), caps)))
    return run


def _capacity(i: int, g_i: Value, k: int) -> int:
    if is_inf(g_i):
        return 0
    e = i - g_i - k
    return 1 << e if e >= 0 else 0


def load_cylinders(text: str) -> list[tuple[int, str]]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        stage, sigma = line.split()
        out.append((int(stage), "" if sigma == "-" else sigma))
    return out
