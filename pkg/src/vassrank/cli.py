"""Command-line interface.

Exit codes:
    analyze      0 terminating, 10 non-terminating, 2 unreadable input
    check        0 verified, 1 rejected, 2 unreadable input or certificate
    complexity   0 report written, 10 non-terminating (witness written), 2 unreadable input
    simulate     0 path ran to the end, 1 blocked, 2 unreadable input
    generate     0
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .certificates import verify_ranking, verify_witness
from .complexity import classify, linear_complexity
from .dynamics import BudgetExceeded, complexity_table, step, table_to_csv
from .generate import generate_random
from .ranking import MODES, CycleWitness, RankingCertificate, analyze
from .vass import InvalidVass, Vass, VassState

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_INPUT = 2
EXIT_NONTERMINATING = 10


class InputError(Exception):
    pass


def _load_vass(path: str) -> Vass:
    try:
        return Vass.load(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")
    except InvalidVass as exc:
        raise InputError(f"{path}: {exc}")


def _emit(args, payload, text: str) -> None:
    """Verdict line on stdout; the JSON payload goes to --out, or to stdout with --format json."""
    body = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body + "\n")
    if args.format == "json" and not args.out:
        print(body)
    else:
        print(text)


def cmd_analyze(args) -> int:
    v = _load_vass(args.input)
    res = analyze(v, args.mode, args.minimize_witness)
    if res.terminating:
        cert = res.certificate
        _emit(args, cert.to_dict(), f"terminating, order {cert.order}")
        return EXIT_OK
    w = res.witness
    _emit(args, w.to_dict(), f"non-terminating, witness cycle {list(w.cycle)} at {w.start}")
    return EXIT_NONTERMINATING


def cmd_check(args) -> int:
    v = _load_vass(args.input)
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            data = json.load(fh)
        verdict = data["verdict"]
        if verdict == "terminating":
            cert = RankingCertificate.from_dict(data)
            outcome = verify_ranking(v, cert)
        elif verdict == "non_terminating":
            outcome = verify_witness(v, CycleWitness.from_dict(data))
        else:
            raise InputError(f"{args.certificate}: unknown verdict {verdict!r}")
    except OSError as exc:
        raise InputError(f"{args.certificate}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.certificate}: invalid JSON at line {exc.lineno}, column {exc.colno}")
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"{args.certificate}: malformed certificate ({exc!r})")
    if outcome:
        print("verified")
        return EXIT_OK
    print(f"rejected: {outcome}", file=sys.stderr)
    return EXIT_REJECTED


def cmd_complexity(args) -> int:
    v = _load_vass(args.input)
    res = analyze(v, args.mode)
    if not res.terminating:
        w = res.witness
        _emit(args, w.to_dict(), f"non-terminating, witness cycle {list(w.cycle)} at {w.start}")
        return EXIT_NONTERMINATING
    report = classify(v, res, with_linear=args.linear)
    payload = report.to_dict()
    lines = [f"terminating, order {report.order_k}"]
    if report.theta:
        lines.append(f"complexity Theta({report.theta})")
    else:
        lines.append(f"complexity Omega({payload['lower']})")
    if args.linear:
        lines.append(f"linear: {linear_complexity(v, res).describe()}")
    csv_text = None
    if args.empirical:
        try:
            rows = complexity_table(v, args.empirical, step_budget=args.budget)
        except BudgetExceeded as exc:
            print(f"empirical run aborted: {exc}", file=sys.stderr)
            rows = []
        payload["empirical"] = rows
        csv_text = table_to_csv(rows)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(csv_text)
    text = "\n".join(lines)
    if csv_text and not args.csv and args.format == "text":
        text += "\n" + csv_text.rstrip("\n")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    v = _load_vass(args.input)
    if args.longest:
        try:
            rows = complexity_table(
                v, args.longest, step_budget=args.budget, start_locations=args.start_from
            )
        except BudgetExceeded as exc:
            print(f"aborted: {exc}", file=sys.stderr)
            return EXIT_REJECTED
        _emit(args, rows, table_to_csv(rows).rstrip("\n"))
        return EXIT_OK
    if args.start is None or args.valuation is None:
        raise InputError("simulate needs --start and --valuation, or --longest")
    if not v.has_location(args.start) or len(args.valuation) != v.dim:
        raise InputError("start state does not fit the VASS")
    state = VassState(args.start, tuple(args.valuation))
    trace = [state]
    for tid in args.path:
        if not v.has_transition(tid):
            raise InputError(f"unknown transition {tid}")
        nxt = step(v, state, tid)
        if nxt is None:
            payload = {"trace": [[s.location, list(s.valuation)] for s in trace], "blocked_at": tid}
            _emit(args, payload, f"blocked at transition {tid} in {state.location} {list(state.valuation)}")
            return EXIT_REJECTED
        state = nxt
        trace.append(state)
    payload = {"trace": [[s.location, list(s.valuation)] for s in trace], "blocked_at": None}
    _emit(args, payload, "\n".join(f"{s.location} {list(s.valuation)}" for s in trace))
    return EXIT_OK


def cmd_generate(args) -> int:
    v = generate_random(
        args.seed, args.dim, args.locations, args.transitions, args.max_update,
        connected=args.connected, conservative=args.conservative,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(v.to_json() + "\n")
    else:
        print(v.to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # global flags work before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--mode", choices=MODES, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="vassrank", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="termination certificate or witness")
    p.add_argument("input")
    p.add_argument("--minimize-witness", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("check", parents=[common], help="verify a certificate or witness")
    p.add_argument("input")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("complexity", parents=[common], help="complexity report")
    p.add_argument("input")
    p.add_argument("--linear", action="store_true", help="solve the linear-complexity LP")
    p.add_argument("--empirical", type=int, nargs="+", metavar="N")
    p.add_argument("--csv", metavar="PATH", help="write the empirical table here")
    p.add_argument("--budget", type=int, default=2_000_000)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("simulate", parents=[common], help="run a path, or compute comp_N")
    p.add_argument("input")
    p.add_argument("--start")
    p.add_argument("--valuation", type=int, nargs="+")
    p.add_argument("--path", type=int, nargs="*", default=[])
    p.add_argument("--longest", type=int, nargs="+", metavar="N")
    p.add_argument("--from", dest="start_from", nargs="+", metavar="LOC",
                   help="with --longest, only start in these locations")
    p.add_argument("--budget", type=int, default=2_000_000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("generate", parents=[common], help="random VASS")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--locations", type=int, default=2)
    p.add_argument("--transitions", type=int, default=4)
    p.add_argument("--max-update", type=int, default=2)
    p.add_argument("--connected", action="store_true")
    p.add_argument("--conservative", action="store_true")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    for name, default in (("out", None), ("format", "text"), ("mode", "primal-dual"), ("seed", 0)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        if args.command == "generate":
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        raise


if __name__ == "__main__":
    sys.exit(main())
