"""Integer-only verification of ranking certificates and cycle witnesses.

Nothing in here calls the LP solver. SCC scopes are recomputed from the
VASS rather than taken from the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .graphs import scc_decompose
from .ranking import CycleWitness, RankingCertificate, RankNode
from .vass import Vass, VassState

NON_STRICT = "NonStrict"
SIGN_VIOLATION = "SignViolation"
SCOPE_VIOLATION = "ScopeViolation"
UNASSIGNED = "UnassignedTransition"
BROKEN_PATH = "BrokenPath"
NOT_A_CYCLE = "NotACycle"
NEGATIVE_COMPONENT = "NegativeComponent"


@dataclass(frozen=True)
class Verified:
    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Rejected:
    kind: str
    message: str
    transition: Optional[int] = None
    level: Optional[int] = None
    index: Optional[int] = None

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


class _Reject(Exception):
    def __init__(self, rejected: Rejected):
        self.rejected = rejected


def verify_ranking(v: Vass, cert: RankingCertificate):
    """Check that ``cert`` is a lexicographic ranking function for ``v``."""
    levels = cert.transition_levels
    for t in v.transitions:
        if t.id not in levels:
            return Rejected(UNASSIGNED, f"transition {t.id} has no level", transition=t.id)
    unknown = [tid for tid in levels if not v.has_transition(tid)]
    if unknown:
        return Rejected(SCOPE_VIOLATION, f"levels given for unknown transitions {unknown}")
    if cert.root is None:
        if v.transitions:
            return Rejected(UNASSIGNED, "empty ranking for a VASS with transitions")
        return Verified()
    if set(cert.root.scope) != set(v.locations):
        return Rejected(SCOPE_VIOLATION, "root scope is not the set of all locations", level=1)
    try:
        _check_node(v, cert.root, v, 1, levels)
    except _Reject as exc:
        return exc.rejected
    return Verified()


def _check_node(top: Vass, node: RankNode, sub: Vass, depth: int, levels) -> None:
    if len(node.r) != top.dim:
        raise _Reject(Rejected(SCOPE_VIOLATION, f"r has length {len(node.r)}", level=depth))
    if any(x < 0 for x in node.r) or any(x < 0 for x in node.z.values()):
        raise _Reject(Rejected(SIGN_VIOLATION, "negative coefficient", level=depth))
    scope = set(node.scope)
    if not set(node.z) <= scope:
        raise _Reject(Rejected(SCOPE_VIOLATION, "z mentions locations outside the scope", level=depth))

    remaining = []
    for t in sub.transitions:
        lvl = levels[t.id]
        row = (
            sum(a * d for a, d in zip(node.r, t.update))
            + node.z.get(t.target, 0)
            - node.z.get(t.source, 0)
        )
        if lvl < depth:
            raise _Reject(Rejected(
                SCOPE_VIOLATION, f"transition {t.id} reappears below its level",
                transition=t.id, level=depth,
            ))
        if lvl == depth:
            if row > -1:
                raise _Reject(Rejected(
                    NON_STRICT, f"row value for transition {t.id} is {row}, expected <= -1",
                    transition=t.id, level=depth,
                ))
        else:
            if row > 0:
                raise _Reject(Rejected(
                    NON_STRICT, f"row value for transition {t.id} is {row} > 0",
                    transition=t.id, level=depth,
                ))
            remaining.append(t.id)

    rest = scc_decompose(sub.sub_vass(sub.locations, remaining))
    crossing = rest.cross_transitions(sub.sub_vass(sub.locations, remaining))
    if crossing:
        raise _Reject(Rejected(
            SCOPE_VIOLATION, f"transition {crossing[0]} is not inside an SCC after level {depth}",
            transition=crossing[0], level=depth,
        ))
    by_scope = {frozenset(c.scope): c for c in node.children}
    if len(by_scope) != len(node.children):
        raise _Reject(Rejected(SCOPE_VIOLATION, "duplicate child scopes", level=depth + 1))
    matched = set()
    for comp in rest.components:
        if not comp.transitions:
            continue
        key = frozenset(comp.locations)
        child = by_scope.get(key)
        if child is None:
            tid = comp.transitions[0].id
            raise _Reject(Rejected(
                SCOPE_VIOLATION, f"no child level covers the SCC {sorted(key)}",
                transition=tid, level=depth + 1,
            ))
        matched.add(key)
        _check_node(top, child, comp, depth + 1, levels)
    extra = set(by_scope) - matched
    if extra:
        raise _Reject(Rejected(
            SCOPE_VIOLATION, f"child scope {sorted(next(iter(extra)))} is not an SCC",
            level=depth + 1,
        ))


def evaluate(cert: RankingCertificate, location: str, valuation: Sequence[int]) -> tuple[int, ...]:
    """The tuple the certificate assigns to the state ``(location, valuation)``."""
    out = []
    node = cert.root
    while node is not None and location in node.scope:
        out.append(sum(a * x for a, x in zip(node.r, valuation)) + node.z.get(location, 0))
        node = next((c for c in node.children if location in c.scope), None)
    return tuple(out)


def lex_greater(a: Sequence[int], b: Sequence[int]) -> bool:
    for x, y in zip(a, b):
        if x != y:
            return x > y
    return False


def verify_witness(v: Vass, w: CycleWitness):
    """Check that ``w`` is a non-negative cycle of ``v``."""
    if not w.cycle:
        return Rejected(NOT_A_CYCLE, "empty cycle")
    for tid in w.cycle:
        if not v.has_transition(tid):
            return Rejected(BROKEN_PATH, f"unknown transition {tid}", transition=tid)
    first = v.transition(w.cycle[0])
    if first.source != w.start:
        return Rejected(NOT_A_CYCLE, f"cycle does not start at {w.start}")
    for a, b in zip(w.cycle, w.cycle[1:]):
        if v.transition(a).target != v.transition(b).source:
            return Rejected(BROKEN_PATH, f"transition {a} does not lead into {b}", transition=b)
    if v.transition(w.cycle[-1]).target != w.start:
        return Rejected(NOT_A_CYCLE, f"cycle does not return to {w.start}")
    total = [0] * v.dim
    for tid in w.cycle:
        for i, x in enumerate(v.transition(tid).update):
            total[i] += x
    for i, x in enumerate(total):
        if x < 0:
            return Rejected(NEGATIVE_COMPONENT, f"component {i} of the value is {x}", index=i)
    return Verified()


def pump_witness(v: Vass, w: CycleWitness, repetitions: int) -> list[VassState]:
    """Run the witness cycle ``repetitions`` times from ``m * u * 1``.

    ``m`` is the largest update magnitude on the cycle and ``u`` its length,
    which is enough headroom for one traversal; a non-negative value then
    keeps it enough for every further traversal. Returns all visited states,
    starting with the initial one.
    """
    m = max((abs(x) for tid in w.cycle for x in v.transition(tid).update), default=0)
    start = m * len(w.cycle)
    val = [start] * v.dim
    loc = w.start
    trace = [VassState(loc, tuple(val))]
    for _ in range(repetitions):
        for tid in w.cycle:
            t = v.transition(tid)
            if t.source != loc:
                raise ValueError(f"transition {tid} does not leave {loc}")
            val = [a + d for a, d in zip(val, t.update)]
            if any(x < 0 for x in val):
                raise ValueError("pumping left the non-negative orthant")
            loc = t.target
            trace.append(VassState(loc, tuple(val)))
    return trace
