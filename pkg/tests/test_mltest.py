from __future__ import annotations

import pytest

from solovay_lab.core import INF, Dyadic
from solovay_lab.machine import CODEC, stabilization_bound
from solovay_lab.mltest import (
    CoverStatus,
    cover_with_lengths,
    cylinder_measure,
    deficiency,
    load_cylinders,
    preprocess_g,
)


def test_deficiency_examples():
    assert deficiency(CODEC, "0000", stabilization_bound(4)) == -3
    assert deficiency(CODEC, "", stabilization_bound(0)) == -2
    assert deficiency(CODEC, "0", 0) < -(10**9)


def test_deficiency_nondecreasing_in_budget():
    values = [deficiency(CODEC, "0110", b) for b in range(0, 25)]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_preprocess_examples():
    assert preprocess_g([0, 1, 2, 2]) == [INF, INF, 2, 2]
    assert preprocess_g([INF] * 4) == [INF] * 4
    g = [2 * (i).bit_length() for i in range(9)]  # 2 ceil(log2(i+1))
    assert preprocess_g(g) == [v if 2**v <= i * i else INF for i, v in enumerate(g)]
    assert preprocess_g({5: 4, 6: 9}) == {5: 4}


def test_empty_cover():
    run = cover_with_lengths([], [], 0, 10, 10)
    assert run.status is CoverStatus.COMPLETED and run.V == [] and run.pieces == []


def test_single_cylinder_crossing_at_s_plus_3():
    # k=0, sigma of length 3: N = 4, s = 16, threshold 2**-2
    # partial sums 4/32, 6/32, 7/32, 9/32: the strict crossing of 8/32 is at i = 19
    g = {16: 3, 17: 4, 18: 5, 19: 4, 20: 4}
    run = cover_with_lengths([(0, "101")], g, 0, 10, 100)
    assert run.status is CoverStatus.COMPLETED
    (piece,) = run.pieces
    assert (piece.s, piece.t) == (16, 19)
    assert run.V_length == Dyadic(1, 2)
    assert run.S_measure == Dyadic(1, 3)
    assert all(w.startswith("101") and len(w) in piece.allocation.J for w in piece.allocation.S)


def test_stuck_when_tail_is_too_light():
    g = {16: 4, 17: 4}
    run = cover_with_lengths([(0, "101")], g, 0, 10, 100)
    assert run.status is CoverStatus.STUCK_AT_STEP4
    assert run.stuck == ("101", 16)


def test_budget_exhaustion():
    g = {16: 3, 17: 4, 18: 5, 19: 4}
    assert cover_with_lengths([(0, "101")], g, 0, 3, 100).status is CoverStatus.BUDGET_EXHAUSTED
    assert cover_with_lengths([(0, "101")], g, 0, 10, 18).status is CoverStatus.BUDGET_EXHAUSTED


def test_fresh_integers_grow():
    g = {16: 3, 17: 4, 18: 5, 19: 4}
    g.update({i: 2 for i in range(1 << 20, (1 << 20) + 4)})
    run = cover_with_lengths([(0, "101"), (1, "110")], g, 0, 30, 1 << 21)
    assert run.status is CoverStatus.COMPLETED
    assert [p.s for p in run.pieces] == [16, 1 << 20]
    assert run.S_measure == cylinder_measure(["101", "110"])


def test_input_checks():
    with pytest.raises(ValueError):
        cover_with_lengths([(0, "1"), (1, "10")], {}, 0, 10, 10)
    with pytest.raises(ValueError):
        cover_with_lengths([(0, "1")], {}, 1, 10, 10)


def test_cylinder_file():
    assert load_cylinders("0 101\n3 -\n\n") == [(0, "101"), (3, "")]
