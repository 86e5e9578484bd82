"""Lexicographic ranking functions or non-negative cycles for a VASS.

``analyze_connected`` is the recursive procedure: find the transitions that
some affine quasi-ranking function decreases strictly, drop them, recurse on
the SCCs of what is left. If at some level no transition can be dropped, the
per-transition cycle solutions add up to a balanced count covering every
transition, whose Euler circuit is a non-negative cycle.

Coefficients depend on the LP solver's pivoting and are not canonical; the
decreasing sets, the verdict and the order are.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .farkas import (
    AffineRankSolution,
    CycleSolution,
    NeitherFeasible,
    solve_primal_dual,
    solve_system_A,
    solve_system_B,
)
from .graphs import euler_circuit, is_fully_decomposable, scc_decompose
from .vass import Vass, path_value

MODES = ("primal-dual", "loop")


class NotConnected(ValueError):
    pass


class NotFullyDecomposable(AssertionError):
    pass


class CoverageGap(ValueError):
    pass


@dataclass(frozen=True)
class RankNode:
    scope: tuple[str, ...]
    r: tuple[int, ...]
    z: Mapping[str, int]
    children: tuple["RankNode", ...] = ()

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children), default=0)

    @property
    def degree(self) -> int:
        """Like ``depth`` but skipping constant levels (``r == 0``)."""
        own = 1 if any(self.r) else 0
        return own + max((c.degree for c in self.children), default=0)

    def to_dict(self) -> dict:
        return {
            "scope": list(self.scope),
            "r": list(self.r),
            "z": dict(self.z),
            "children": [c.to_dict() for c in self.children],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "RankNode":
        return cls(
            tuple(data["scope"]),
            tuple(int(x) for x in data["r"]),
            {str(k): int(x) for k, x in data["z"].items()},
            tuple(cls.from_dict(c) for c in data.get("children", [])),
        )


@dataclass(frozen=True)
class RankingCertificate:
    """A tree of affine levels plus the level at which each transition decreases.

    ``root`` is None for the empty ranking of a VASS without transitions.
    """

    root: Optional[RankNode]
    transition_levels: Mapping[int, int]

    @property
    def order(self) -> int:
        return 0 if self.root is None else self.root.depth

    @property
    def degree(self) -> int:
        return 0 if self.root is None else self.root.degree

    def to_dict(self) -> dict:
        return {
            "verdict": "terminating",
            "order": self.order,
            "levels": None if self.root is None else self.root.to_dict(),
            "transition_levels": {str(k): v for k, v in sorted(self.transition_levels.items())},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "RankingCertificate":
        levels = data.get("levels")
        return cls(
            None if levels is None else RankNode.from_dict(levels),
            {int(k): int(v) for k, v in data["transition_levels"].items()},
        )


@dataclass(frozen=True)
class CycleWitness:
    start: str
    cycle: tuple[int, ...]
    value: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "verdict": "non_terminating",
            "witness": {"start": self.start, "transitions": list(self.cycle)},
            "value": list(self.value),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CycleWitness":
        w = data["witness"]
        return cls(str(w["start"]), tuple(int(t) for t in w["transitions"]), tuple(data.get("value", ())))


@dataclass
class Diagnostics:
    recursion_depth: int = 0
    # (depth, scope, decreasing set) for every call that had transitions
    levels: list[tuple[int, tuple[str, ...], frozenset[int]]] = field(default_factory=list)

    def canonical_levels(self) -> list[tuple[int, tuple[str, ...], tuple[int, ...]]]:
        return sorted((d, tuple(sorted(s)), tuple(sorted(t))) for d, s, t in self.levels)


@dataclass(frozen=True)
class Terminating:
    certificate: RankingCertificate
    diagnostics: Diagnostics

    terminating = True


@dataclass(frozen=True)
class NonTerminating:
    witness: CycleWitness
    diagnostics: Diagnostics

    terminating = False


AnalysisResult = Union[Terminating, NonTerminating]


def certificate_to_json(result: AnalysisResult, indent: int | None = 2) -> str:
    payload = result.certificate.to_dict() if result.terminating else result.witness.to_dict()
    return json.dumps(payload, indent=indent)


# --- combinators ----------------------------------------------------------------


def sum_combinator(parts: Sequence[AffineRankSolution]) -> AffineRankSolution:
    if not parts:
        raise ValueError("need at least one part")
    dim = len(parts[0].r)
    r = [0] * dim
    z: dict[str, int] = {}
    for p in parts:
        for i, x in enumerate(p.r):
            r[i] += x
        for loc, x in p.z.items():
            z[loc] = z.get(loc, 0) + x
    return AffineRankSolution(tuple(r), z)


def combine_combinator(
    v: Vass, qrank: AffineRankSolution, scc_certs: Iterable[RankingCertificate]
) -> RankingCertificate:
    """Put ``qrank`` on top of the rankings of the SCCs left after its strict transitions go."""
    strict = qrank.strict_rows(v)
    if not is_fully_decomposable(v.without(strict)):
        raise NotFullyDecomposable("removing the strict transitions leaves cross-SCC transitions")
    levels = {tid: 1 for tid in strict}
    children = []
    for cert in scc_certs:
        for tid, lvl in cert.transition_levels.items():
            levels[tid] = lvl + 1
        if cert.root is not None:
            children.append(cert.root)
    children.sort(key=lambda n: v.location_index(n.scope[0]))
    root = RankNode(
        tuple(v.locations),
        tuple(qrank.r),
        {loc: qrank.z.get(loc, 0) for loc in v.locations},
        tuple(children),
    )
    return RankingCertificate(root, levels)


# --- witnesses ------------------------------------------------------------------


def extract_witness(
    v: Vass, solutions: Iterable[CycleSolution], minimize: bool = False
) -> CycleWitness:
    """Euler circuit of the summed cycle solutions, which must cover every transition."""
    total: dict[int, int] = {t.id: 0 for t in v.transitions}
    for sol in solutions:
        for tid, c in sol.mu.items():
            if tid in total:
                total[tid] += c
    gaps = [tid for tid, c in total.items() if c == 0]
    if gaps or not total:
        raise CoverageGap(f"transitions {gaps} have total count 0")
    cycle = euler_circuit(v, total)
    if minimize:
        cycle = shrink_cycle(v, cycle)
    return CycleWitness(v.transition(cycle[0]).source, tuple(cycle), path_value(v, cycle))


def shrink_cycle(v: Vass, cycle: Sequence[int]) -> list[int]:
    """Greedily cut out inner sub-cycles while the value stays non-negative."""
    cycle = list(cycle)
    changed = True
    while changed:
        changed = False
        locs = [v.transition(t).source for t in cycle]
        for i in range(len(cycle)):
            for j in range(len(cycle), i, -1):
                if j - i == len(cycle):
                    continue
                at_j = locs[j] if j < len(cycle) else locs[0]
                if locs[i] != at_j:
                    continue
                cand = cycle[:i] + cycle[j:]
                if all(x >= 0 for x in path_value(v, cand)):
                    cycle = cand
                    changed = True
                    break
            if changed:
                break
    return cycle


# --- the procedure --------------------------------------------------------------


class _Found(Exception):
    def __init__(self, witness: CycleWitness):
        self.witness = witness


def _decreasing_loop(v: Vass):
    parts, cycles, dec = [], [], set()
    for t in v.transitions:
        b = solve_system_B(v, t.id)
        if b is not None:
            parts.append(b)
            dec.add(t.id)
        else:
            a = solve_system_A(v, t.id)
            if a is None:
                raise NeitherFeasible(f"neither system feasible for transition {t.id}")
            cycles.append(a)
    return frozenset(dec), (sum_combinator(parts) if parts else None), cycles


def _decreasing_primal_dual(v: Vass):
    res = solve_primal_dual(v)
    qrank = res.rank_solution if res.decreasing_set else None
    return res.decreasing_set, qrank, [res.cycle_solution]


def _ranking(v: Vass, depth: int, mode: str, diag: Diagnostics, minimize: bool) -> RankingCertificate:
    diag.recursion_depth = max(diag.recursion_depth, depth)
    if not v.transitions:
        return RankingCertificate(None, {})
    if mode == "loop":
        dec, qrank, cycles = _decreasing_loop(v)
    elif mode == "primal-dual":
        dec, qrank, cycles = _decreasing_primal_dual(v)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    diag.levels.append((depth, tuple(v.locations), dec))
    if not dec:
        raise _Found(extract_witness(v, cycles, minimize))
    rest = scc_decompose(v.without(dec))
    child_certs = [_ranking(c, depth + 1, mode, diag, minimize) for c in rest.components]
    cert = combine_combinator(v, qrank, child_certs)
    if set(tid for tid, lvl in cert.transition_levels.items() if lvl == 1) != set(dec):
        raise AssertionError("strict rows of the combined quasi-ranking differ from the decreasing set")
    return cert


def analyze_connected(
    v: Vass, mode: str = "primal-dual", minimize_witness: bool = False
) -> AnalysisResult:
    if len(scc_decompose(v).components) > 1 and v.transitions:
        raise NotConnected("analyze_connected needs a strongly connected VASS")
    diag = Diagnostics()
    try:
        cert = _ranking(v, 1, mode, diag, minimize_witness)
    except _Found as found:
        return NonTerminating(found.witness, diag)
    return Terminating(cert, diag)


def analyze(v: Vass, mode: str = "primal-dual", minimize_witness: bool = False) -> AnalysisResult:
    """Analyze an arbitrary VASS, SCC by SCC.

    With more than one SCC a constant top level orders the SCCs by their
    position in a reverse topological order, which makes every transition
    between SCCs strict.
    """
    if not v.transitions:
        return Terminating(RankingCertificate(None, {}), Diagnostics(recursion_depth=1))
    scc = scc_decompose(v)
    if len(scc.components) == 1:
        return analyze_connected(v, mode, minimize_witness)
    diag = Diagnostics()
    certs = []
    for comp in scc.components:
        res = analyze_connected(comp, mode, minimize_witness)
        diag.recursion_depth = max(diag.recursion_depth, res.diagnostics.recursion_depth)
        diag.levels.extend(res.diagnostics.levels)
        if not res.terminating:
            return NonTerminating(res.witness, diag)
        certs.append(res.certificate)
    height = AffineRankSolution(
        (0,) * v.dim, {loc: scc.component_of[loc] for loc in v.locations}
    )
    return Terminating(combine_combinator(v, height, certs), diag)
