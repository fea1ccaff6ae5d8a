from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import frac_weight
from solovay_lab.core import INF, Dyadic, StagedFunction, stage_refine
from solovay_lab.errors import BudgetTooSmall, HorizonTooSmall, InvalidPartition, NotInRange
from solovay_lab.machine import CODEC, JoinMachine, k_approx
from solovay_lab.solovay import (
    OmegaSeries,
    TripleMachine,
    build_test_Uc,
    dominate_solovay,
    g_solovay,
    increments,
    partition_for,
    rewrite_to_order,
    tail_cutoff,
    triple_codec,
    triple_decode,
)


def test_triple_examples():
    assert triple_codec("", "01", 2) == "10110101110"
    assert triple_decode("10110101110") == ("", "01", 2)
    with pytest.raises(NotInRange):
        triple_decode("0")
    assert triple_decode(triple_codec("0", "1", 1)) == ("0", "1", 1)


@given(st.text("01", max_size=8), st.text("01", max_size=8), st.integers(0, 5000))
def test_triple_round_trip(x, p, t):
    assert triple_decode(triple_codec(x, p, t)) == (x, p, t)


@pytest.mark.parametrize("m", ["", "1", "101101011100", "101101011", "10110101101"])
def test_triple_rejects(m):
    with pytest.raises(NotInRange):
        triple_decode(m)


def test_g_solovay_examples():
    m = triple_codec("", "01", 2)
    assert g_solovay(CODEC, m, 10) == 2
    assert g_solovay(CODEC, "0", 10) == 2
    wrong = triple_codec("", "01", 3)
    assert g_solovay(CODEC, wrong, 10) == 2 * len(wrong)
    with pytest.raises(BudgetTooSmall):
        g_solovay(CODEC, triple_codec("", "01", 30), 10)


def test_triple_machine_descriptions():
    joined = JoinMachine(CODEC, TripleMachine(CODEC))
    m = triple_codec("0000", "1000101", 11)
    assert TripleMachine(CODEC).run("1000101", 1000).output == m
    assert k_approx(joined, m, 1000) == 8


def test_omega_series():
    assert OmegaSeries([2, 3, 4, 5], 4).partial_sum == Dyadic(15, 5)
    f = StagedFunction([[INF, 2], [3, 1]])
    assert OmegaSeries(f, 2, stage=0).partial_sum == Dyadic(1, 3)
    assert OmegaSeries(f, 2).partial_sum == Dyadic(3, 2)


def test_tail_cutoff_examples():
    f = [n + 2 for n in range(10)]
    assert tail_cutoff(f, 10, 3, Dyadic(1, 1)) == 1
    assert tail_cutoff(f, 10, 0, Dyadic(1, 1)) == 0
    assert tail_cutoff([1] + [INF] * 5, 6, 10, Dyadic(1, 1)) == 0
    with pytest.raises(HorizonTooSmall):
        tail_cutoff(f, 2, 10, Dyadic(1, 1))
    with pytest.raises(ValueError):
        tail_cutoff([0, 0], 2, 1, Dyadic(1, 1))


def test_uc_examples():
    f = StagedFunction([[3]])
    comp = build_test_Uc(f, StagedFunction([[0]]), 0, 5)
    assert [(iv.left, iv.length) for iv in comp.intervals] == [(Dyadic(0), Dyadic(1, 2))]
    assert build_test_Uc(f, StagedFunction([[0]]), 3, 5).intervals == []
    assert build_test_Uc(StagedFunction([]), StagedFunction([]), 0, 5).intervals == []


def test_uc_matching_waits_for_k():
    f = StagedFunction([[3]])
    k = StagedFunction([[INF, INF, 0]])
    comp = build_test_Uc(f, k, 0, 5)
    assert [iv.stage for iv in comp.intervals] == [2]
    assert comp.dumps() == "0 2 0 0 1 2\n"


def test_increments():
    f = stage_refine(StagedFunction([[INF, 2, 1], [3, 3, 3]]))
    incs = increments(f)
    assert [(i.n, i.size) for i in incs] == [(0, Dyadic(1, 2)), (0, Dyadic(1, 2)), (1, Dyadic(1, 3))]
    assert incs[1].cumulative == Dyadic(1, 1)
    # the increments sum to Omega_f at the limit
    total = sum((i.size.as_fraction() for i in incs), Fraction(0))
    assert total == Fraction(1, 2) + Fraction(1, 8)
    with pytest.raises(ValueError):
        increments(StagedFunction([[3, 1]]))


@pytest.mark.parametrize(
    "k,out",
    [((2, 3, 1), (2, 3, 3, 3, 3, 3)), ((3,), (3,)), ((1, 1), (1, 1))],
)
def test_rewrite_examples(k, out):
    assert tuple(rewrite_to_order(k)) == out


def test_partition_examples():
    g = [1, 2, 3]
    h = StagedFunction.constant([1] * 12)
    part = partition_for(g, h, 0, 11)
    assert part.intervals[0] == (1, 2)
    assert partition_for(g, StagedFunction.constant([INF] * 12), 0, 11).stuck == (0, 1)


def test_partition_interval_shape():
    g = [1, 2, 3, 4]
    h = StagedFunction.from_rows([[5, 4, 3]] * 40)
    for p in range(0, 6):
        part = partition_for(g, h, p, 39)
        prev = None
        for n, (s, t) in enumerate(part.intervals):
            assert s > n and t > s
            if prev is not None:
                assert s == prev + 1
            prev = t
            lhs = sum(frac_weight(h.at(i, t)) for i in range(s, t + 1))
            assert lhs >= Fraction(1, 2 ** (g[n] + p))


def test_dominate_examples():
    g = [2]
    h = StagedFunction([[9, 9], [3, 1], [3, 3]])
    from solovay_lab.solovay import Partition

    part = Partition(g, 0, [(1, 2)], [1])
    assert dominate_solovay(g, h, part, 0)[1:] == [3, 3]
    limit = StagedFunction.constant([9, 2, 2])
    assert dominate_solovay(g, limit, Partition(g, 0, [(1, 2)], [0]), 0) == [9, 2, 2]
    with pytest.raises(InvalidPartition):
        dominate_solovay([0], StagedFunction.constant([9, 5, 5]), Partition([0], 0, [(1, 2)], [0]), 0)
