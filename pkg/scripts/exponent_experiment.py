"""Compare certificate degree with the empirical growth exponent of comp_N.

Draws conservative, strongly connected instances, keeps the terminating ones
and fits log comp_N against log N with the brute-force oracle.

    python3 scripts/exponent_experiment.py --count 20 --n 4 8 12 16
"""

import argparse
import sys

from vassrank.dynamics import BudgetExceeded, estimate_exponent
from vassrank.generate import CorpusConfig, corpus
from vassrank.ranking import analyze


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--n", type=int, nargs="+", default=[4, 8, 12, 16])
    ap.add_argument("--budget", type=int, default=3_000_000)
    args = ap.parse_args(argv)

    cfg = CorpusConfig(size=50 * args.count, seed=args.seed, connected_share=1.0, conservative=True)
    print("seed,degree,exponent,abs_error")
    done = 0
    worst = 0.0
    for seed, v in corpus(cfg):
        if done == args.count:
            break
        res = analyze(v)
        if not res.terminating:
            continue
        try:
            e = estimate_exponent(v, args.n, step_budget=args.budget)
        except (BudgetExceeded, ValueError) as exc:
            print(f"# skipped {seed}: {exc}", file=sys.stderr)
            continue
        k = res.certificate.degree
        worst = max(worst, abs(e - k))
        print(f"{seed},{k},{e:.4f},{abs(e - k):.4f}")
        done += 1
    print(f"# {done} instances, worst |exponent - degree| = {worst:.3f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
