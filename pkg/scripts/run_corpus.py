"""Run the engine over a seeded random corpus and summarize verdicts.

    python3 scripts/run_corpus.py --size 500 --seed 2024 [--csv out.csv]
"""

import argparse
import csv
import sys
import time
from collections import Counter

from vassrank.certificates import verify_ranking, verify_witness
from vassrank.complexity import cone_dimension
from vassrank.generate import CorpusConfig, corpus
from vassrank.ranking import analyze


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=500)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--mode", default="primal-dual")
    ap.add_argument("--conservative", action="store_true")
    ap.add_argument("--csv")
    args = ap.parse_args(argv)

    cfg = CorpusConfig(size=args.size, seed=args.seed, conservative=args.conservative)
    rows = []
    t0 = time.perf_counter()
    for seed, v in corpus(cfg):
        res = analyze(v, args.mode)
        if res.terminating:
            ok = bool(verify_ranking(v, res.certificate))
            order, degree = res.certificate.order, res.certificate.degree
        else:
            ok = bool(verify_witness(v, res.witness))
            order = degree = None
        rows.append({
            "seed": seed, "dim": v.dim, "locations": len(v.locations),
            "transitions": len(v.transitions), "terminating": res.terminating,
            "order": order, "degree": degree, "cone_dim": cone_dimension(v),
            "recursion_depth": res.diagnostics.recursion_depth, "verified": ok,
        })
    elapsed = time.perf_counter() - t0

    term = [r for r in rows if r["terminating"]]
    print(f"{len(rows)} instances in {elapsed:.2f}s: {len(term)} terminating, {len(rows) - len(term)} not")
    print("degree histogram:", dict(sorted(Counter(r["degree"] for r in term).items())))
    print("unverified:", sum(not r["verified"] for r in rows))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0 if all(r["verified"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
