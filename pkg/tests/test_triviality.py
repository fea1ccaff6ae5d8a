from __future__ import annotations

import pytest

from oracles import all_strings, codec_k_table, order_from_blocks
from solovay_lab.core import INF, Dyadic, StagedFunction, binary
from solovay_lab.errors import NoWitness, NotCrossed, WeightOverflow
from solovay_lab.machine import CODEC, DOVETAIL, HaltingEvent, enumerate_halting
from solovay_lab.solovay import Partition
from solovay_lab.triviality import (
    build_requests_for_trivial,
    build_trivial_tree,
    change_points,
    extend_block,
    gap_point,
    hitting_set_stage,
    rce_order_below,
    trivial_constant,
    tree_levels,
    witness_high_complexity,
)

AMPLE = 10**6


def log_g(n):
    return 2 * n.bit_length() + 4  # 2 ceil(log2(n+1)) + 4


def test_trivial_constant_examples():
    zeros = ["0" * n for n in range(9)]
    assert trivial_constant(zeros, log_g, CODEC, AMPLE) == -1
    assert trivial_constant([""], [7], CODEC, AMPLE) == 2 - 7
    assert trivial_constant(zeros, lambda n: INF, CODEC, AMPLE) < -(10**9)
    with pytest.raises(ValueError):
        trivial_constant(["0", "1"], log_g, CODEC, AMPLE)


def test_tree_examples():
    assert build_trivial_tree(log_g, -10, CODEC, AMPLE, 6).nodes == []
    tree = build_trivial_tree(log_g, 0, CODEC, AMPLE, 6)
    assert tree.levels == [0, 1, 3, 6]
    assert all("0" * n in tree.nodes for n in range(7))
    assert "000000" in tree.S
    wider = build_trivial_tree(log_g, 1, CODEC, AMPLE, 6)
    assert set(tree.nodes) <= set(wider.nodes)
    assert tree.dumps().splitlines()[0] == "0 - 1"


def test_tree_levels():
    assert tree_levels([0, 0, 1, 1, 2], 3) == [1, 3]
    assert tree_levels([0, 1, 2], -1) == []


def test_tree_level_count_bound():
    table = codec_k_table(13)
    tree = build_trivial_tree(log_g, 2, CODEC, AMPLE, 6)
    for n in tree.levels:
        at_level = [w for w in tree.nodes if len(w) == n]
        assert len(at_level) <= sum(1 for w in all_strings(n) if len(w) == n and table[w] <= log_g(n) + 2)


def test_requests_for_trivial():
    events = [
        HaltingEvent("p1", "0", 1, 1),
        HaltingEvent("p22", "00", 1, 1),
        HaltingEvent("p3", "01", 1, 1),
        HaltingEvent("late", "1", 1, 50),
    ]
    part = Partition([3], 0, [(1, 2)], [2])
    h = [0, 2, 2]
    rs, em = build_requests_for_trivial(h, 1, part, events, 10, c=2)
    # tau "00" and "01" both witness sigma "" once
    assert [(e.sigma, e.length) for e in em] == [("", 6)]
    assert rs.weight == Dyadic.pow2(6)
    rs, em = build_requests_for_trivial(h, 1, part, events, 0, c=2)
    assert em == []


def test_requests_two_sigmas():
    events = [HaltingEvent("x" * 2, w, 1, 1) for w in ["0", "1", "00", "10"]]
    part = Partition([4, 5], 0, [(1, 1), (2, 2)], [1, 2])
    rs, em = build_requests_for_trivial([3, 3, 3], 0, part, events, 5)
    assert [(e.sigma, e.length) for e in em] == [("", 4), ("0", 5), ("1", 5)]
    assert rs.weight == Dyadic.pow2(4) + Dyadic.pow2(5) + Dyadic.pow2(5)


def test_requests_overflow_surfaces():
    events = [HaltingEvent("x", w, 1, 1) for w in ["0", "1"]]
    part = Partition([0, 0], 0, [(1, 1), (2, 2)], [1, 2])
    events += [HaltingEvent("x", w, 1, 1) for w in ["00", "01", "10"]]
    with pytest.raises(WeightOverflow):
        build_requests_for_trivial([9, 9, 9], 0, part, events, 5)


def test_extend_block():
    assert extend_block([0, 1, 2, 3], 0) == [0, 0, 1, 2]
    assert extend_block([0, 1, 2, 3], 3) == [0, 1, 2, 3]
    assert extend_block([0, 0, 2, 3], 1) == [0, 0, 1, 2]


def test_order_below_identity_instance():
    approx = rce_order_below([list(range(7))], 6, 100)
    assert list(approx[-1]) == [n // 2 for n in range(7)]
    assert list(rce_order_below([list(range(7))], 6, 0)[0]) == list(range(7))
    for a, b in zip(approx, approx[1:]):
        assert all(x >= y for x, y in zip(a, b))


def test_change_points_repair():
    # h0 drops once at n=2: only the change is re-emitted
    h0 = [[0, 1, 5], [0, 1, 5], [0, 1, 5], [0, 1, 2]]
    assert change_points(h0, 2) == [0, 1, 5, 2]


def test_order_below_matches_block_oracle():
    h0 = [[0, 1, 1, 2, 3, 3, 4, 5]] * 3
    for I in range(8):
        approx = rce_order_below(h0, 7, I)
        sizes = [1] * 16
        for k in change_points(h0, 7)[:I]:
            sizes[k] += 1
        assert list(approx[-1]) == order_from_blocks(sizes, 7)


def test_gap_point_examples():
    g = StagedFunction.constant([1, 2])
    gp = gap_point(g, "10", 5)
    assert gp.lower == Dyadic(3, 2) and gp.m == 2
    with pytest.raises(NotCrossed):
        gap_point(g, "11", 5)
    gp = gap_point(StagedFunction.constant([1]), "0", 5)
    assert (gp.m, gp.stage) == (1, 1)
    with pytest.raises(ValueError):
        gap_point(g, "", 5)


def test_gap_point_staged():
    g = StagedFunction([[3, 3, 1], [INF, 2, 2], [5, 5, 5]])
    gp = gap_point(g, "01", 10)
    assert gp.lower > Dyadic(1, 2)
    contributed = [n for n in range(min(gp.stage, g.N)) if g.at(n, gp.stage) is not INF]
    assert all(n < gp.m for n in contributed)


def test_hitting_examples():
    table = codec_k_table(13)
    K = [table[binary(n)] for n in range(33)]
    assert hitting_set_stage(K, 0, CODEC, AMPLE, 32).members == list(range(33))
    assert hitting_set_stage([k + 5 for k in K], 4, CODEC, AMPLE, 32).members == []


def test_hitting_sets_shrink_on_dovetail():
    f = [3 + (n % 5) for n in range(16)]
    prev = None
    for s in range(0, 28, 3):
        members = set(hitting_set_stage(f, 0, DOVETAIL, s, 15).members)
        if prev is not None:
            assert members <= prev
        prev = members


def test_witness():
    table = codec_k_table(15)
    K = [table[binary(n)] for n in range(65)]
    n = witness_high_complexity(K, 0, 5, CODEC, AMPLE, 64)
    assert n == min(i for i in range(65) if K[i] >= 5)
    assert witness_high_complexity(K, 0, 0, CODEC, AMPLE, 64) == 0
    with pytest.raises(NoWitness):
        witness_high_complexity(K, 0, 50, CODEC, AMPLE, 3)
