"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]`` / ``[FAIL]`` line with the measured
numbers and the pinned tolerance. Run directly (``python3 tests/test_acceptance.py``)
to get just those lines.
"""

from __future__ import annotations

import contextlib
import io
import json
import sys
import time
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import pytest

from vassrank.certificates import pump_witness, verify_ranking, verify_witness
from vassrank.cli import main as cli_main
from vassrank.complexity import (
    AtLeastQuadratic,
    classify,
    cone_dimension,
    is_conservative,
    linear_complexity,
)
from vassrank.dynamics import (
    BudgetExceeded,
    NonTerminationDetected,
    estimate_exponent,
    longest_trace,
)
from vassrank.farkas import BothFeasible, NeitherFeasible, check_alternative, solve_primal_dual
from vassrank.generate import CorpusConfig, corpus
from vassrank.graphs import scc_decompose
from vassrank.ranking import RankingCertificate, analyze
from vassrank.vass import Vass

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# pinned limits
C1_SECONDS = 1.0
C2_SECONDS = 1.0
C3_SECONDS = 30.0
C5_SECONDS = 60.0
C9_MAX_N = 3
C9_STEP_BUDGET = 200_000
C9_VALUE_CEILING = 200
C9_MAX_EXCLUDED = 0.10
C10_INSTANCES = 20
C10_N_VALUES = (4, 8, 12, 16)
C10_STEP_BUDGET = 3_000_000
C10_TOLERANCE = 0.7

CORPUS = CorpusConfig(size=500, seed=2024, max_dim=3, max_locations=4, max_transitions=6, max_update=2)
CONSERVATIVE = CorpusConfig(size=400, seed=7, connected_share=1.0, conservative=True)


@pytest.fixture
def report(capsys):
    def emit(ok: bool, name: str, detail: str) -> None:
        # printed outside pytest's capture so the line lands in the test log
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")

    return emit


def load(name: str) -> Vass:
    return Vass.load(FIXTURES / f"{name}.json")


def cli(*argv) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = cli_main([str(a) for a in argv])
    return code, buf.getvalue()


@lru_cache(maxsize=None)
def corpus_items():
    return tuple(corpus(CORPUS))


@lru_cache(maxsize=None)
def corpus_results():
    return tuple((v, analyze(v, "primal-dual"), analyze(v, "loop")) for _, v in corpus_items())


def test_c1_vprog(report):
    t0 = time.perf_counter()
    code, out = cli("analyze", FIXTURES / "vprog.json", "--format", "json")
    order = json.loads(out)["order"]
    check_code, _ = cli("check", FIXTURES / "vprog.json", FIXTURES / "vprog.cert.json")
    _, rep = cli("complexity", FIXTURES / "vprog.json", "--linear", "--format", "json")
    c = Fraction(json.loads(rep)["linear"])
    elapsed = time.perf_counter() - t0
    ok = code == 0 and order == 1 and check_code == 0 and c == 4 and elapsed < C1_SECONDS
    report(ok, "C1 V_prog", f"exit {code}, order {order} (want 1), handwritten certificate check exit {check_code}, "
           f"c = {c} (want 4, exact), {elapsed:.3f}s (< {C1_SECONDS}s)")
    assert ok


def test_c2_vcsys(report):
    t0 = time.perf_counter()
    v = load("vcsys")
    res = analyze(v)
    rep = classify(v, res)
    reference = RankingCertificate.from_dict(json.loads((FIXTURES / "vcsys.cert.json").read_text()))
    reference_ok = bool(verify_ranking(v, reference))
    elapsed = time.perf_counter() - t0
    ok = (
        res.terminating and res.certificate.order == 2 and rep.conservative_syntactic
        and rep.theta == "N^2" and reference_ok and elapsed < C2_SECONDS
    )
    report(ok, "C2 V_csys", f"order {res.certificate.order} (want 2), conservative {rep.conservative_syntactic}, "
           f"Theta({rep.theta}), handwritten certificate verifies {reference_ok}, {elapsed:.3f}s (< {C2_SECONDS}s)")
    assert ok


def test_c3_vexp(report):
    t0 = time.perf_counter()
    v = load("vexp")
    res = analyze(v)
    lin = linear_complexity(v, res)
    comps = [longest_trace(v, n) for n in range(1, 5)]
    diffs = [b - a for a, b in zip(comps, comps[1:])]
    elapsed = time.perf_counter() - t0
    ok = (
        res.terminating and isinstance(lin, AtLeastQuadratic)
        and all(isinstance(c, int) for c in comps)
        and all(b > a for a, b in zip(diffs, diffs[1:]))
        and elapsed < C3_SECONDS
    )
    report(ok, "C3 V_exp", f"terminating {res.terminating}, linear verdict {lin.describe()}, comp_1..4 = {comps}, "
           f"differences {diffs} (strictly increasing), {elapsed:.2f}s (< {C3_SECONDS}s)")
    assert ok


def test_c4_vprog_oracle(report):
    v = load("vprog")
    got = [longest_trace(v, n, start_locations=["l1"]) for n in range(1, 6)]
    committed = json.loads((FIXTURES / "comp_regression.json").read_text())["vprog_from_l1"]
    ok = got == [4, 8, 12, 16, 20] == [committed[str(n)] for n in range(1, 6)]
    report(ok, "C4 V_prog oracle", f"comp_N from l1 for N=1..5 = {got} (want [4, 8, 12, 16, 20] exactly)")
    assert ok


def test_c5_farkas_alternative(report):
    t0 = time.perf_counter()
    violations = checked = 0
    for _, v in corpus_items():
        for t in v.transitions:
            checked += 1
            try:
                check_alternative(v, t.id)
            except (BothFeasible, NeitherFeasible):
                violations += 1
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < C5_SECONDS
    report(ok, "C5 Farkas alternative", f"{len(corpus_items())} instances, {checked} transitions, "
           f"{violations} violations (want 0), {elapsed:.2f}s (< {C5_SECONDS}s)")
    assert ok


def test_c6_self_certifying(report):
    failures = certs = witnesses = 0
    for v, pd, lo in corpus_results():
        for res in (pd, lo):
            if res.terminating:
                certs += 1
                failures += not verify_ranking(v, res.certificate)
            else:
                witnesses += 1
                if not verify_witness(v, res.witness):
                    failures += 1
                    continue
                try:
                    trace = pump_witness(v, res.witness, 5)
                except ValueError:
                    failures += 1
                    continue
                failures += any(min(s.valuation, default=0) < 0 for s in trace)
    ok = failures == 0
    report(ok, "C6 self-certifying verdicts", f"{certs} certificates, {witnesses} witnesses (both modes), "
           f"{failures} failures (want 0)")
    assert ok


def test_c7_mode_agreement(report):
    disagreements = gaps = lps = 0
    for v, pd, lo in corpus_results():
        if pd.terminating != lo.terminating or pd.diagnostics.canonical_levels() != lo.diagnostics.canonical_levels():
            disagreements += 1
        for comp in scc_decompose(v).components:
            if comp.transitions:
                lps += 1
                r = solve_primal_dual(comp)
                gaps += r.primal_value != r.dual_value
    ok = disagreements == 0 and gaps == 0
    report(ok, "C7 mode agreement", f"{disagreements} instances with differing decreasing sets (want 0), "
           f"{gaps} of {lps} top-level primal/dual pairs with nonzero gap (want 0)")
    assert ok


def test_c8_structural_bounds(report):
    bad = []
    for v, pd, _ in corpus_results():
        depth_ok = pd.diagnostics.recursion_depth <= v.dim + 1
        cd = cone_dimension(v)
        order_ok = True
        if pd.terminating:
            order_ok = pd.certificate.degree <= cd <= v.dim
        if not (depth_ok and order_ok):
            bad.append(v)
    ok = not bad
    report(ok, "C8 structural bounds", f"{len(bad)} of {len(corpus_results())} instances violate "
           f"depth <= dim+1 or order <= cone_dim <= dim (want 0)")
    assert ok


def _oracle_verdict(v: Vass):
    result = None
    for n in range(1, C9_MAX_N + 1):
        result = longest_trace(v, n, step_budget=C9_STEP_BUDGET, value_ceiling=C9_VALUE_CEILING)
        if isinstance(result, NonTerminationDetected):
            return False
    return True


def test_c9_oracle_agreement(report):
    excluded = contradictions = compared = 0
    for v, pd, _ in corpus_results():
        try:
            oracle_terminating = _oracle_verdict(v)
        except BudgetExceeded:
            excluded += 1
            continue
        compared += 1
        contradictions += oracle_terminating != pd.terminating
    share = excluded / len(corpus_results())
    ok = contradictions == 0 and share < C9_MAX_EXCLUDED
    report(ok, "C9 oracle/engine agreement", f"{compared} compared, {contradictions} contradictions (want 0), "
           f"{excluded} budget exclusions = {share:.1%} (< {C9_MAX_EXCLUDED:.0%}); N <= {C9_MAX_N}")
    assert ok


def test_c10_theta_consistency(report):
    rows, skipped = [], 0
    for _, v in corpus(CONSERVATIVE):
        if len(rows) == C10_INSTANCES:
            break
        res = analyze(v)
        if not res.terminating or not is_conservative(v):
            continue
        try:
            e = estimate_exponent(v, C10_N_VALUES, step_budget=C10_STEP_BUDGET)
        except (BudgetExceeded, ValueError):
            skipped += 1
            continue
        rows.append((res.certificate.degree, e))
    worst = max((abs(k - e) for k, e in rows), default=float("inf"))
    ok = len(rows) == C10_INSTANCES and worst <= C10_TOLERANCE
    ks = sorted({k for k, _ in rows})
    report(ok, "C10 conservative Theta consistency", f"{len(rows)} instances (orders {ks}), "
           f"max |exponent - k| = {worst:.3f} (<= {C10_TOLERANCE}), N in {list(C10_N_VALUES)}, "
           f"{skipped} skipped over budget")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
