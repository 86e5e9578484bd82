import json
import random

from hypothesis import given, settings

from vassrank.certificates import (
    NEGATIVE_COMPONENT,
    NON_STRICT,
    NOT_A_CYCLE,
    SCOPE_VIOLATION,
    UNASSIGNED,
    evaluate,
    lex_greater,
    pump_witness,
    verify_ranking,
    verify_witness,
)
from vassrank.dynamics import step
from vassrank.ranking import CycleWitness, RankingCertificate, RankNode, analyze
from vassrank.vass import VassState

from conftest import FIXTURES, self_loop
from strategies import small_vass


def handwritten_cert(name):
    return RankingCertificate.from_dict(json.loads((FIXTURES / f"{name}.cert.json").read_text()))


def test_handwritten_certificates_verify(vprog, vcsys):
    assert verify_ranking(vprog, handwritten_cert("vprog"))
    assert verify_ranking(vcsys, handwritten_cert("vcsys"))


def test_non_strict_rejected(vprog):
    # r = (1, 0) claimed strict on t2, whose row value r.d is 0
    root = RankNode(("l1", "l2"), (1, 0), {"l1": 0, "l2": 0})
    out = verify_ranking(vprog, RankingCertificate(root, {0: 1, 1: 1, 2: 1}))
    assert not out and out.kind == NON_STRICT and out.transition == 1
    assert "row value for transition 1 is 0" in out.message


def test_tampered_sign_rejected(vprog):
    data = json.loads((FIXTURES / "vprog.cert.json").read_text())
    data["levels"]["r"][0] = -3
    out = verify_ranking(vprog, RankingCertificate.from_dict(data))
    assert not out


def test_missing_level_rejected(vprog):
    cert = handwritten_cert("vprog")
    levels = dict(cert.transition_levels)
    del levels[2]
    out = verify_ranking(vprog, RankingCertificate(cert.root, levels))
    assert out.kind == UNASSIGNED


def test_fake_child_scope_rejected(vcsys):
    cert = handwritten_cert("vcsys")
    child = cert.root.children[0]
    bad = RankNode(cert.root.scope, cert.root.r, cert.root.z, (child,))
    out = verify_ranking(vcsys, RankingCertificate(bad, cert.transition_levels))
    assert out.kind == SCOPE_VIOLATION


def test_witness_checks(vprog, swap):
    assert verify_witness(swap, CycleWitness("A", (0, 1), (0, 0)))
    out = verify_witness(vprog, CycleWitness("l1", (0, 1, 2), (-1, 0)))
    assert out.kind == NEGATIVE_COMPONENT and out.index == 0
    assert verify_witness(swap, CycleWitness("B", (0, 1), (0, 0))).kind == NOT_A_CYCLE
    assert verify_witness(swap, CycleWitness("A", (0,), (1, -1))).kind == NOT_A_CYCLE


def test_pump_swap(swap):
    trace = pump_witness(swap, CycleWitness("A", (0, 1), (0, 0)), 3)
    assert trace[0] == VassState("A", (2, 2))
    assert len(trace) == 7
    assert all(min(s.valuation) >= 0 for s in trace)


def test_pump_zero_loop():
    v = self_loop([0])
    trace = pump_witness(v, CycleWitness("q", (0,), (0,)), 5)
    assert len(trace) == 6 and {s.valuation for s in trace} == {(0,)}


def test_pump_positive_cycle_grows():
    v = self_loop([1, 0])
    trace = pump_witness(v, CycleWitness("q", (0,), (1, 0)), 4)
    assert all(a >= b for a, b in zip(trace[-1].valuation, trace[0].valuation))


def test_evaluate_vcsys(vcsys):
    cert = handwritten_cert("vcsys")
    assert evaluate(cert, "l_tt", (2, 3, 0)) == (11, 3)
    assert evaluate(cert, "l_ff", (2, 3, 0)) == (10, 2)
    assert lex_greater((11, 3), (10, 2)) and not lex_greater((1, 1), (1, 1))


@settings(max_examples=40, deadline=None)
@given(small_vass())
def test_rankings_decrease_along_random_steps(v):
    """Every enabled step lowers the certificate lexicographically."""
    res = analyze(v)
    if not res.terminating or not v.transitions:
        return
    cert = res.certificate
    rng = random.Random(hash(v.to_json()))
    for _ in range(25):
        loc = rng.choice(v.locations)
        val = tuple(rng.randint(0, 6) for _ in range(v.dim))
        for t in v.transitions:
            if t.source != loc:
                continue
            nxt = step(v, VassState(loc, val), t.id)
            if nxt is None:
                continue
            before = evaluate(cert, loc, val)
            after = evaluate(cert, nxt.location, nxt.valuation)
            assert min(before, default=0) >= 0 and min(after, default=0) >= 0
            assert lex_greater(before, after)
