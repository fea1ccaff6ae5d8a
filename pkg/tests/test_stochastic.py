from __future__ import annotations

from fractions import Fraction

import pytest

from solovay_lab.core import OrderFn
from solovay_lab.errors import EmptySelection, FunctionalMismatch, NonMonotonePositions
from solovay_lab.stochastic import (
    Answer,
    Diverge,
    Entry,
    NeedMoreOracle,
    ScriptedFunctional,
    insert_zeroes,
    random_instance,
    selected_bias,
    selection_rule_run,
    sparsity_constant,
)

N = 40
HALF = OrderFn([n // 2 for n in range(N + 1)])


def half_phi(offset=0, time=lambda k: k + 1):
    return ScriptedFunctional({k: Entry(0, 2 * k + 1 + offset, time(k)) for k in range(N)})


def test_functional_outcomes():
    phi = ScriptedFunctional({0: Entry(3, 1, 5)})
    assert phi.query("0101", 0) == Answer(1, 5)
    assert phi.query("01", 0) == NeedMoreOracle(3)
    assert isinstance(phi.query("0101", 0, cap=4), Diverge)
    assert isinstance(phi.query("0101", 1), Diverge)
    assert ScriptedFunctional.loads(phi.dumps()) == phi


def test_insert_example():
    A = "".join("01"[i % 2] for i in range(N))
    rec = insert_zeroes(A, HALF, half_phi(), 12)
    assert rec.inserted == [2, 5, 8, 11]
    assert rec.B == A[0:2] + "0" + A[2:4] + "0" + A[4:6] + "0" + A[6:8] + "0"


def test_insert_beyond_horizon_is_identity():
    A = "1" * N
    rec = insert_zeroes(A, HALF, half_phi(time=lambda k: 1000 + k), 30)
    assert rec.B == A[:30] and rec.inserted == []


def test_insert_errors():
    with pytest.raises(FunctionalMismatch):
        insert_zeroes("0" * N, HALF, half_phi(offset=1), 20)
    with pytest.raises(NonMonotonePositions):
        insert_zeroes("0" * N, HALF, half_phi(time=lambda k: 10 - 3 * k if k < 3 else 100), 40)


def test_selection_round_trip():
    A = "1101001110010111010110011011100101101010"
    phi = half_phi()
    rec = insert_zeroes(A, HALF, phi, N)
    sel = selection_rule_run(rec.B, phi)
    assert sel.positions == rec.inserted == [2, 5, 8, 11, 14, 17, 20, 23, 26, 29, 32, 35, 38]
    assert set(sel.bits) == {"0"}
    assert rec.delete_inserted() == A[: N - len(rec.inserted)]


def test_selection_is_driven_by_timing():
    phi = half_phi()
    rec = insert_zeroes("0" * N, HALF, phi, N)
    assert selection_rule_run(rec.B, phi).positions == rec.inserted


def test_selection_without_halting():
    assert selection_rule_run("0101", ScriptedFunctional({})).positions == []


def test_bias():
    assert selected_bias("0" * 10) == 0
    assert selected_bias("1010") == Fraction(1, 2)
    with pytest.raises(EmptySelection):
        selected_bias("")


def test_sparsity_constant():
    assert sparsity_constant([2, 5, 8], HALF) == 0
    assert sparsity_constant([0, 1, 2], OrderFn([0, 0, 0, 0])) == 3


@pytest.mark.parametrize("seed", range(5))
def test_random_instances_are_valid(seed):
    inst = random_instance(seed, 512)
    assert inst.h(0) == 0 and all(inst.h(n) <= n for n in range(len(inst.h)))
    times = [e.steps for _, e in sorted(inst.phi.script.items())]
    assert all(a < b for a, b in zip(times, times[1:]))
    rec = insert_zeroes(inst.A, inst.h, inst.phi, 512)
    assert selection_rule_run(rec.B, inst.phi).positions == rec.inserted
