"""The two dual constraint systems behind the termination analysis.

For a transition ``t`` of a VASS, the cycle system asks for a balanced,
non-negative transition count ``mu`` with non-negative total value and
``mu(t) >= 1``; the ranking system asks for ``r >= 0, z >= 0`` with

    r . d_s + z(target(s)) - z(source(s)) <= 0   for every transition s,

strictly (encoded as ``<= -1``) for ``s = t``. Exactly one of the two is
feasible. ``solve_primal_dual`` answers the question for all transitions at
once with a pair of dual LPs whose 0/1 activity variables mark the
transitions that admit a ranking.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from . import lp as lpmod
from .lp import EQ, GE, LE, LinearProgram, Optimal, scale_to_integer
from .vass import Vass, build_flow_matrix, build_update_matrix


class BothFeasible(AssertionError):
    pass


class NeitherFeasible(AssertionError):
    pass


@dataclass(frozen=True)
class CycleSolution:
    mu: Mapping[int, int]

    def total(self) -> int:
        return sum(self.mu.values())


@dataclass(frozen=True)
class AffineRankSolution:
    r: tuple[int, ...]
    z: Mapping[str, int]

    def row_value(self, v: Vass, tid: int) -> int:
        t = v.transition(tid)
        return (
            sum(a * b for a, b in zip(self.r, t.update))
            + self.z.get(t.target, 0)
            - self.z.get(t.source, 0)
        )

    def strict_rows(self, v: Vass) -> set[int]:
        return {t.id for t in v.transitions if self.row_value(v, t.id) < 0}

    def is_quasi_ranking(self, v: Vass) -> bool:
        return (
            all(x >= 0 for x in self.r)
            and all(x >= 0 for x in self.z.values())
            and all(self.row_value(v, t.id) <= 0 for t in v.transitions)
        )

    def evaluate(self, location: str, valuation: Iterable[int]) -> int:
        return sum(a * b for a, b in zip(self.r, valuation)) + self.z.get(location, 0)


@dataclass(frozen=True)
class PrimalDualResult:
    decreasing_set: frozenset[int]
    rank_solution: AffineRankSolution
    cycle_solution: Optional[CycleSolution]
    active_primal: Mapping[int, int]
    active_dual: Mapping[int, int]
    primal_value: Fraction
    dual_value: Fraction


def is_cycle_solution(v: Vass, mu: Mapping[int, int]) -> bool:
    """Constraints on a multi-cycle count: ``D mu >= 0, mu >= 0, F mu = 0``."""
    vec = [mu.get(t.id, 0) for t in v.transitions]
    if any(x < 0 for x in vec):
        return False
    value = [sum(a * x for a, x in zip(row, vec)) for row in build_update_matrix(v)]
    flow = [sum(a * x for a, x in zip(row, vec)) for row in build_flow_matrix(v)]
    return all(x >= 0 for x in value) and all(x == 0 for x in flow)


def _add_cycle_rows(prog: LinearProgram, v: Vass, mu_offset: int) -> None:
    D = build_update_matrix(v)
    F = build_flow_matrix(v)
    for row in D:
        prog.add({mu_offset + j: a for j, a in enumerate(row) if a}, GE, 0)
    for row in F:
        if any(row):
            prog.add({mu_offset + j: a for j, a in enumerate(row) if a}, EQ, 0)


def _rank_row(v: Vass, j: int, r_offset: int, z_offset: int) -> dict[int, int]:
    t = v.transitions[j]
    row = {r_offset + i: a for i, a in enumerate(t.update) if a}
    if not t.is_loop:
        row[z_offset + v.location_index(t.target)] = 1
        row[z_offset + v.location_index(t.source)] = -1
    return row


def _rank_from_point(v: Vass, point, r_offset: int, z_offset: int) -> AffineRankSolution:
    raw = list(point[r_offset:r_offset + v.dim]) + list(
        point[z_offset:z_offset + len(v.locations)]
    )
    ints = scale_to_integer(raw)
    return AffineRankSolution(
        tuple(ints[:v.dim]), {loc: ints[v.dim + k] for k, loc in enumerate(v.locations)}
    )


def _position(v: Vass, tid: int) -> int:
    for j, t in enumerate(v.transitions):
        if t.id == tid:
            return j
    raise KeyError(f"transition {tid} is not part of this VASS")


def solve_system_A(v: Vass, tid: int) -> Optional[CycleSolution]:
    """Integral balanced non-negative multi-cycle count using ``tid``, or None."""
    pos = _position(v, tid)
    m = len(v.transitions)
    prog = LinearProgram([f"mu{t.id}" for t in v.transitions])
    _add_cycle_rows(prog, v, 0)
    prog.add({pos: 1}, GE, 1)
    out = lpmod.solve(prog)
    if not isinstance(out, Optimal):
        return None
    ints = scale_to_integer(out.point[:m])
    return CycleSolution({t.id: ints[j] for j, t in enumerate(v.transitions)})


def system_B_program(v: Vass, tid: int, small: bool = False) -> LinearProgram:
    pos = _position(v, tid)
    names = [f"r{i}" for i in range(v.dim)] + [f"z[{loc}]" for loc in v.locations]
    prog = LinearProgram(names)
    for j in range(len(v.transitions)):
        prog.add(_rank_row(v, j, 0, v.dim), LE, -1 if j == pos else 0)
    if small:
        prog.minimize([1] * len(names))
    return prog


def solve_system_B(v: Vass, tid: int, small: bool = False) -> Optional[AffineRankSolution]:
    """Integral affine quasi-ranking function strict on ``tid``, or None.

    With ``small=True`` the coefficient sum ``1.r + 1.z`` is minimized.
    """
    out = lpmod.solve(system_B_program(v, tid, small))
    if not isinstance(out, Optimal):
        return None
    return _rank_from_point(v, out.point, 0, v.dim)


@dataclass(frozen=True)
class AlternativeReport:
    transition: int
    feasible: str  # "A" or "B"
    cycle_solution: Optional[CycleSolution]
    rank_solution: Optional[AffineRankSolution]


def check_alternative(v: Vass, tid: int) -> AlternativeReport:
    """Solve both systems for ``tid`` and insist that exactly one is feasible."""
    a = solve_system_A(v, tid)
    b = solve_system_B(v, tid)
    if a is not None and b is not None:
        raise BothFeasible(f"both systems feasible for transition {tid}")
    if a is None and b is None:
        raise NeitherFeasible(f"neither system feasible for transition {tid}")
    return AlternativeReport(tid, "A" if a is not None else "B", a, b)


def primal_program(v: Vass) -> LinearProgram:
    """max 1.a  s.t.  0 <= a <= 1, a <= mu, D mu >= 0, F mu = 0, mu >= 0."""
    m = len(v.transitions)
    prog = LinearProgram([f"a{t.id}" for t in v.transitions] + [f"mu{t.id}" for t in v.transitions])
    for j in range(m):
        prog.set_bounds(j, 0, 1)
        prog.add({j: 1, m + j: -1}, LE, 0)
    _add_cycle_rows(prog, v, m)
    prog.maximize([1] * m + [0] * m)
    return prog


def dual_program(v: Vass) -> LinearProgram:
    """min 1.b  s.t.  0 <= b <= 1, r >= 0, z >= 0, D^T r + F^T z <= -1 + b."""
    m = len(v.transitions)
    names = (
        [f"b{t.id}" for t in v.transitions]
        + [f"r{i}" for i in range(v.dim)]
        + [f"z[{loc}]" for loc in v.locations]
    )
    prog = LinearProgram(names)
    for j in range(m):
        prog.set_bounds(j, 0, 1)
        row = _rank_row(v, j, m, m + v.dim)
        row[j] = -1
        prog.add(row, LE, -1)
    prog.minimize([1] * m + [0] * (v.dim + len(v.locations)))
    return prog


def solve_primal_dual(v: Vass) -> PrimalDualResult:
    m = len(v.transitions)
    p = lpmod.solve(primal_program(v))
    q = lpmod.solve(dual_program(v))
    if not (isinstance(p, Optimal) and isinstance(q, Optimal)):
        raise AssertionError("both LPs are feasible and bounded by construction")
    a = {t.id: p.point[j] for j, t in enumerate(v.transitions)}
    b = {t.id: q.point[j] for j, t in enumerate(v.transitions)}
    for tid in a:
        if a[tid] not in (0, 1) or a[tid] != b[tid]:
            raise AssertionError(f"activity mismatch on transition {tid}: a={a[tid]}, b={b[tid]}")
    decreasing = frozenset(tid for tid, x in a.items() if x == 0)
    rank = _rank_from_point(v, q.point, m, m + v.dim)
    mu_ints = scale_to_integer(p.point[m:2 * m])
    cycle = CycleSolution({t.id: mu_ints[j] for j, t in enumerate(v.transitions)})
    return PrimalDualResult(
        decreasing_set=decreasing,
        rank_solution=rank,
        cycle_solution=cycle,
        active_primal={tid: int(x) for tid, x in a.items()},
        active_dual={tid: int(x) for tid, x in b.items()},
        primal_value=p.value,
        dual_value=q.value,
    )
