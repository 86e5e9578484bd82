from hypothesis import given, settings

from vassrank.farkas import (
    check_alternative,
    is_cycle_solution,
    solve_primal_dual,
    solve_system_A,
    solve_system_B,
)
from vassrank.graphs import scc_decompose

from conftest import self_loop
from strategies import small_vass


def test_vprog_t2_has_no_cycle(vprog):
    assert solve_system_A(vprog, 1) is None


def test_swap_cycle_solution(swap):
    sol = solve_system_A(swap, 0)
    assert sol is not None and sol.mu[0] == sol.mu[1] >= 1
    assert is_cycle_solution(swap, sol.mu)


def test_zero_loop_cycle():
    assert solve_system_A(self_loop([0]), 0).mu == {0: 1}


def test_vprog_rank_for_t2(vprog):
    b = solve_system_B(vprog, 1)
    assert b is not None and b.is_quasi_ranking(vprog)
    assert b.row_value(vprog, 1) <= -1


def test_swap_has_no_rank(swap):
    assert solve_system_B(swap, 0) is None and solve_system_B(swap, 1) is None


def test_decrementing_loop_rank():
    v = self_loop([-1])
    b = solve_system_B(v, 0)
    assert b.r == (1,) and b.row_value(v, 0) == -1


def test_alternatives_on_examples(vprog, swap):
    assert check_alternative(vprog, 0).feasible == "B"
    assert check_alternative(swap, 0).feasible == "A"
    assert check_alternative(self_loop([0]), 0).feasible == "A"


def test_primal_dual_vprog(vprog):
    res = solve_primal_dual(vprog)
    assert res.decreasing_set == {0, 1, 2}
    assert res.primal_value == res.dual_value == 0


def test_primal_dual_swap(swap):
    res = solve_primal_dual(swap)
    assert res.decreasing_set == set()
    assert all(c >= 1 for c in res.cycle_solution.mu.values())
    assert res.primal_value == res.dual_value == 2


def test_primal_dual_vcsys(vcsys):
    res = solve_primal_dual(vcsys)
    assert res.decreasing_set == {0, 2}
    assert res.rank_solution.strict_rows(vcsys) == {0, 2}


@settings(max_examples=60, deadline=None)
@given(small_vass())
def test_exactly_one_system_feasible(v):
    for t in v.transitions:
        rep = check_alternative(v, t.id)
        if rep.feasible == "A":
            assert is_cycle_solution(v, rep.cycle_solution.mu)
            assert rep.cycle_solution.mu[t.id] >= 1
        else:
            assert rep.rank_solution.is_quasi_ranking(v)
            assert rep.rank_solution.row_value(v, t.id) <= -1


@settings(max_examples=60, deadline=None)
@given(small_vass())
def test_primal_dual_matches_per_transition(v):
    for comp in scc_decompose(v).components:
        if not comp.transitions:
            continue
        res = solve_primal_dual(comp)
        assert res.primal_value == res.dual_value
        assert res.active_primal == res.active_dual
        loop_set = {t.id for t in comp.transitions if solve_system_B(comp, t.id) is not None}
        assert res.decreasing_set == loop_set
        assert res.rank_solution.is_quasi_ranking(comp)
        assert res.rank_solution.strict_rows(comp) == set(res.decreasing_set)
        assert is_cycle_solution(comp, res.cycle_solution.mu)
