"""Control-graph algorithms over a VASS: SCCs, Euler circuits, multi-cycles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .vass import MultiCycle, Vass


class NotBalanced(ValueError):
    pass


class NotConnected(ValueError):
    pass


@dataclass(frozen=True)
class SccDecomposition:
    """SCCs in the order Tarjan's algorithm emits them.

    That order is already a reverse topological order of the condensation:
    a component is only emitted after every component reachable from it, so
    ``reverse_topological_order`` is simply ``0, 1, ..., len(components) - 1``
    and a component's index in it serves as its height in the DAG.
    """

    components: tuple[Vass, ...]
    component_of: Mapping[str, int]
    reverse_topological_order: tuple[int, ...]

    def cross_transitions(self, v: Vass) -> list[int]:
        return [
            t.id
            for t in v.transitions
            if self.component_of[t.source] != self.component_of[t.target]
        ]


def _tarjan(nodes: list[str], succ: Mapping[str, list[str]]) -> list[list[str]]:
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    out: list[list[str]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(succ[root]))]
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(comp)
    return out


def scc_decompose(v: Vass) -> SccDecomposition:
    succ: dict[str, list[str]] = {loc: [] for loc in v.locations}
    for t in v.transitions:
        succ[t.source].append(t.target)
    comps = _tarjan(list(v.locations), succ)
    component_of = {loc: i for i, comp in enumerate(comps) for loc in comp}
    components = []
    for i, comp in enumerate(comps):
        members = set(comp)
        inner = [
            t.id for t in v.transitions if t.source in members and t.target in members
        ]
        components.append(v.sub_vass(members, inner))
    return SccDecomposition(tuple(components), component_of, tuple(range(len(comps))))


def is_strongly_connected(v: Vass) -> bool:
    return len(scc_decompose(v).components) <= 1


def is_fully_decomposable(v: Vass) -> bool:
    return not scc_decompose(v).cross_transitions(v)


def _check_balanced(v: Vass, counts: Mapping[int, int]) -> None:
    degree = {loc: 0 for loc in v.locations}
    for t in v.transitions:
        c = counts.get(t.id, 0)
        if c < 0:
            raise NotBalanced(f"negative count for transition {t.id}")
        degree[t.source] -= c
        degree[t.target] += c
    bad = [loc for loc, d in degree.items() if d]
    if bad:
        raise NotBalanced(f"in-degree differs from out-degree at {bad}")


def euler_circuit(v: Vass, counts: Mapping[int, int]) -> list[int]:
    """A cycle using each transition ``t`` exactly ``counts[t]`` times (Hierholzer).

    All-zero counts give the empty path.
    """
    _check_balanced(v, counts)
    return _hierholzer(v, counts)


def _hierholzer(v: Vass, counts: Mapping[int, int]) -> list[int]:
    remaining = {t.id: counts.get(t.id, 0) for t in v.transitions}
    total = sum(remaining.values())
    if total == 0:
        return []
    out: dict[str, list[int]] = {loc: [] for loc in v.locations}
    for t in v.transitions:
        if remaining[t.id]:
            out[t.source].append(t.id)
    pos = {loc: 0 for loc in v.locations}

    def next_edge(loc: str):
        edges = out[loc]
        while pos[loc] < len(edges):
            tid = edges[pos[loc]]
            if remaining[tid]:
                remaining[tid] -= 1
                return tid
            pos[loc] += 1
        return None

    first = next(t for t in v.transitions if remaining[t.id])
    circuit: list[int] = []
    stack: list[tuple[str, int | None]] = [(first.source, None)]
    while stack:
        loc, via = stack[-1]
        tid = next_edge(loc)
        if tid is None:
            stack.pop()
            if via is not None:
                circuit.append(via)
        else:
            stack.append((v.transition(tid).target, tid))
    circuit.reverse()
    if len(circuit) != total:
        raise NotConnected("counted transitions do not form a single connected multigraph")
    return circuit


def multicycle_from_counts(v: Vass, counts: Mapping[int, int]) -> MultiCycle:
    """Split a balanced count vector into one Euler cycle per connected component."""
    _check_balanced(v, counts)
    used = [t for t in v.transitions if counts.get(t.id, 0) > 0]
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in used:
        parent[find(t.source)] = find(t.target)
    groups: dict[str, list[int]] = {}
    for t in used:
        groups.setdefault(find(t.source), []).append(t.id)
    cycles = []
    for tids in groups.values():
        sub = {tid: counts[tid] for tid in tids}
        cycles.append(tuple(_hierholzer(v, sub)))
    cycles.sort(key=lambda c: min(c))
    return MultiCycle(tuple(cycles), {t.id: counts[t.id] for t in used})
