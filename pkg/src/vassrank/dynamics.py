"""Concrete VASS semantics and brute-force longest-trace search.

This is the independent check on the LP-based engine: it never looks at
ranking functions or constraint systems, it just runs the VASS.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .vass import Vass, VassState


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class NonTerminationDetected:
    """Two states on one trace, same location, the later one componentwise larger."""

    earlier: VassState
    later: VassState


@dataclass(frozen=True)
class Exploration:
    result: Union[int, NonTerminationDetected]
    explored_states: int
    steps: int


def step(v: Vass, state: VassState, tid: int) -> Optional[VassState]:
    """Fire ``tid`` from ``state``; None when it is blocked."""
    t = v.transition(tid)
    if t.source != state.location:
        return None
    val = tuple(a + d for a, d in zip(state.valuation, t.update))
    if any(x < 0 for x in val):
        return None
    return VassState(t.target, val)


def bounded_states(v: Vass, n_bound: int, locations: Optional[Iterable[str]] = None):
    locs = list(v.locations if locations is None else locations)
    for loc in locs:
        for val in itertools.product(range(n_bound + 1), repeat=v.dim):
            yield VassState(loc, val)


def explore(
    v: Vass,
    n_bound: int,
    step_budget: int = 2_000_000,
    value_ceiling: Optional[int] = None,
    start_locations: Optional[Iterable[str]] = None,
) -> Exploration:
    """Longest trace from any ``n_bound``-bounded state, by memoized DFS.

    Gives up with :class:`BudgetExceeded` after ``step_budget`` explored
    steps, or as soon as a valuation entry exceeds ``value_ceiling``.
    """
    out_edges: dict[str, list[tuple[str, tuple[int, ...]]]] = {loc: [] for loc in v.locations}
    for t in v.transitions:
        out_edges[t.source].append((t.target, t.update))
    memo: dict[tuple[str, tuple[int, ...]], int] = {}
    on_path: dict[str, list[tuple[int, ...]]] = {loc: [] for loc in v.locations}
    steps = 0
    best_overall = 0

    for start in bounded_states(v, n_bound, start_locations):
        key0 = (start.location, start.valuation)
        if key0 in memo:
            best_overall = max(best_overall, memo[key0])
            continue
        # frame: [location, valuation, edge index, best length from here]
        stack = [[start.location, start.valuation, 0, 0]]
        on_path[start.location].append(start.valuation)
        while stack:
            frame = stack[-1]
            loc, val, k, best = frame
            edges = out_edges[loc]
            if k == len(edges):
                stack.pop()
                on_path[loc].pop()
                memo[(loc, val)] = best
                if stack:
                    parent = stack[-1]
                    if best + 1 > parent[3]:
                        parent[3] = best + 1
                continue
            frame[2] = k + 1
            target, update = edges[k]
            nxt = tuple(a + d for a, d in zip(val, update))
            if min(nxt, default=0) < 0:
                continue
            steps += 1
            if steps > step_budget:
                raise BudgetExceeded(f"more than {step_budget} steps explored at N={n_bound}")
            if value_ceiling is not None and max(nxt, default=0) > value_ceiling:
                raise BudgetExceeded(f"valuation entry above {value_ceiling} at N={n_bound}")
            for anc in on_path[target]:
                if all(a <= b for a, b in zip(anc, nxt)):
                    return Exploration(
                        NonTerminationDetected(VassState(target, anc), VassState(target, nxt)),
                        len(memo),
                        steps,
                    )
            known = memo.get((target, nxt))
            if known is not None:
                if known + 1 > frame[3]:
                    frame[3] = known + 1
                continue
            stack.append([target, nxt, 0, 0])
            on_path[target].append(nxt)
        best_overall = max(best_overall, memo[key0])
    return Exploration(best_overall, len(memo), steps)


def longest_trace(
    v: Vass,
    n_bound: int,
    step_budget: int = 2_000_000,
    value_ceiling: Optional[int] = None,
    start_locations: Optional[Iterable[str]] = None,
) -> Union[int, NonTerminationDetected]:
    return explore(v, n_bound, step_budget, value_ceiling, start_locations).result


def estimate_exponent(v: Vass, n_values: Sequence[int], **kwargs) -> float:
    """Least-squares slope of ``log comp_N`` against ``log N``."""
    xs, ys = [], []
    for n in n_values:
        comp = longest_trace(v, n, **kwargs)
        if isinstance(comp, NonTerminationDetected):
            raise ValueError(f"non-termination detected at N={n}")
        xs.append(math.log(n))
        ys.append(comp)
    if all(y == 0 for y in ys):
        return 0.0
    if any(y == 0 for y in ys):
        raise ValueError("comp_N is 0 for some but not all N; pick larger N")
    ys = [math.log(y) for y in ys]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise ValueError("need at least two distinct N values")
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def complexity_table(v: Vass, n_values: Sequence[int], **kwargs) -> list[dict]:
    rows = []
    for n in n_values:
        ex = explore(v, n, **kwargs)
        comp = ex.result if isinstance(ex.result, int) else "nonterminating"
        rows.append({"N": n, "comp_N": comp, "explored_states": ex.explored_states})
    return rows


def table_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["N", "comp_N", "explored_states"], lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
