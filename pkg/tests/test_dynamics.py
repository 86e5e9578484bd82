import random

import pytest
from hypothesis import given, settings, strategies as st

from vassrank.dynamics import (
    BudgetExceeded,
    NonTerminationDetected,
    complexity_table,
    estimate_exponent,
    longest_trace,
    step,
    table_to_csv,
)
from vassrank.vass import Vass, VassState

from conftest import self_loop
from strategies import small_vass


def test_step(vprog):
    assert step(vprog, VassState("l1", (1, 1)), 0) == VassState("l2", (0, 2))
    assert step(vprog, VassState("l1", (0, 5)), 0) is None
    assert step(vprog, VassState("l2", (0, 5)), 0) is None
    assert step(self_loop([0, 0]), VassState("q", (3, 4)), 0) == VassState("q", (3, 4))


def test_vprog_from_l1(vprog, regression):
    got = {str(n): longest_trace(vprog, n, start_locations=["l1"]) for n in range(1, 6)}
    assert got == regression["vprog_from_l1"]


def test_vprog_all_locations(vprog, regression):
    got = {str(n): longest_trace(vprog, n) for n in range(1, 6)}
    assert got == regression["vprog_all_locations"]


def test_vcsys_regression(vcsys, regression):
    got = {str(n): longest_trace(vcsys, n) for n in range(1, 7)}
    assert got == regression["vcsys"]


def test_swap_detected(swap):
    for n in (1, 2, 3):
        assert isinstance(longest_trace(swap, n), NonTerminationDetected)
    # with N = 0 nothing can fire
    assert longest_trace(swap, 0) == 0


def test_no_transitions():
    assert longest_trace(Vass.build(2, ["a", "b"], []), 4) == 0


def test_budget(vexp):
    with pytest.raises(BudgetExceeded):
        longest_trace(vexp, 4, step_budget=100)
    with pytest.raises(BudgetExceeded):
        longest_trace(vexp, 4, value_ceiling=5)


def test_exponents(vprog, vcsys):
    assert estimate_exponent(vprog, [2, 4, 8, 16], start_locations=["l1"]) == pytest.approx(1.0, abs=1e-12)
    assert 1.6 <= estimate_exponent(vcsys, [2, 4, 8]) <= 2.3
    assert estimate_exponent(self_loop([-1]), [1, 3, 9]) == pytest.approx(1.0, abs=1e-12)


def test_csv(vprog):
    text = table_to_csv(complexity_table(vprog, [1, 2]))
    assert text.splitlines()[0] == "N,comp_N,explored_states"
    assert text.splitlines()[1].startswith("1,5,")


@settings(max_examples=30, deadline=None)
@given(small_vass(max_dim=2, max_locs=3, max_trans=4))
def test_comp_monotone_in_n(v):
    prev = 0
    for n in range(0, 4):
        try:
            comp = longest_trace(v, n, step_budget=50_000)
        except BudgetExceeded:
            return
        if isinstance(comp, NonTerminationDetected):
            return
        assert comp >= prev
        prev = comp


@settings(max_examples=50, deadline=None)
@given(small_vass(), st.integers(0, 2**16))
def test_replay_from_larger_valuation(v, seed):
    """A trace that runs from nu also runs from any nu' >= nu."""
    rng = random.Random(seed)
    state = VassState(rng.choice(v.locations), tuple(rng.randint(0, 3) for _ in range(v.dim)))
    path = []
    for _ in range(12):
        options = [t.id for t in v.transitions if step(v, state, t.id) is not None]
        if not options:
            break
        tid = rng.choice(options)
        path.append(tid)
        state = step(v, state, tid)
    bigger = None
    start = None
    # rebuild the start from the path (first state is recomputed backwards)
    if not path:
        return
    first = v.transition(path[0]).source
    total = [0] * v.dim
    low = [0] * v.dim
    for tid in path:
        total = [a + d for a, d in zip(total, v.transition(tid).update)]
        low = [min(a, b) for a, b in zip(low, total)]
    start = tuple(-x for x in low)
    bigger = VassState(first, tuple(x + rng.randint(0, 3) for x in start))
    s = bigger
    for tid in path:
        s = step(v, s, tid)
        assert s is not None
