"""Command-line interface: monitor, tableau, deduce, oracle, bench."""

from __future__ import annotations

import argparse
import os
import sys

from .bench import BenchConfig, PATTERN_KINDS, bench, default_alphabet, random_trace
from .formula import Not, nnf
from .inference import (
    EvaluatedFormula,
    InconsistentEvaluationError,
    ObservationSet,
    deduce,
    match_rule,
)
from .knowledge import KnowledgeConflictError
from .ltl3 import ltl3_eval, satisfiable
from .monitor import VerdictConflictError, run
from .parser import FormulaSyntaxError, parse
from .semantics import BOT, TOP, UNKNOWN, TruthValue3
from .system import AlphabetError, parse_alphabet, parse_trace
from .tableau import build, refine, to_dot

EXIT_TOP = 0
EXIT_BOT = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_CONFLICT = 70

_VERDICT_EXIT = {TOP: EXIT_TOP, BOT: EXIT_BOT, UNKNOWN: EXIT_UNKNOWN}
_VALUE_BY_NAME = {"T": TOP, "F": BOT, "?": UNKNOWN}


def _seed_default(value):
    if value is not None:
        return value
    return os.environ.get("DECLMON_SEED", "0")


def _read_trace(args, alpha):
    if args.trace is not None:
        with open(args.trace, "r", encoding="utf-8") as fh:
            return parse_trace(fh.read())
    if args.random_trace is not None:
        return random_trace(
            alpha, args.random_trace, args.p_true, _seed_default(args.seed)
        )
    raise AlphabetError("either --trace or --random-trace is required")


def cmd_monitor(args) -> int:
    phi = parse(args.formula)
    alpha = parse_alphabet(args.alphabet)
    trace = _read_trace(args, alpha)
    if args.dump_tableau:
        with open(args.dump_tableau, "w", encoding="utf-8") as fh:
            fh.write(to_dot(refine(build(nnf(phi)))))
    records = []
    listener = records.append if (args.log or args.dump_tables) else None
    result = run(alpha, phi, trace, args.strategy.upper(), listener=listener)
    if args.log:
        table_size = None
        for rec in records:
            for pid, msg in rec.messages.items():
                succ = rec.monitors[pid].successor
                if table_size is None:
                    table_size = len(rec.monitors[pid].store.template)
                wire = msg.encode(table_size, result.ring).hex()
                pairs = " ".join(
                    f"({idx}@{state}={val})" for idx, state, val in msg.payload
                )
                print(
                    f"round {rec.round}: {pid} -> {succ} "
                    f"bits={msg.bit_size(table_size)} wire=0x{wire} {pairs}"
                )
    if args.dump_tables and records:
        final = records[-1].monitors
        for pid, ms in final.items():
            print(f"tables of {pid}:")
            for state in sorted(ms.store.tables):
                rows = ms.store.tables[state].rows()
                cells = ", ".join(f"{i}:{f}={v}" for f, v, i in rows)
                print(f"  state {state}: {cells}")
    print(f"formula:  {phi}")
    print(f"strategy: {result.strategy}   ring: {' -> '.join(result.ring) or '-'}")
    print(f"verdict:  {result.verdict}")
    if result.decider is not None:
        print(f"decided:  by {result.decider} at round {result.decision_round}")
    else:
        print("decided:  at setup" if result.steps_to_verdict == 0 else "decided:  never")
    m = result.metrics
    print(
        f"metrics:  |trace|={m.trace_len} #msg={m.num_msgs} "
        f"|msg|={m.msg_bits} bits |mem|={m.mem_bits} bits"
    )
    return _VERDICT_EXIT[result.verdict]


def cmd_tableau(args) -> int:
    phi = parse(args.formula)
    tab = build(nnf(phi))
    sat = satisfiable(phi)
    valid = not satisfiable(Not(phi))
    refined = refine(tab)
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            fh.write(to_dot(refined if args.refined else tab))
    status = "VALID" if valid else ("SAT" if sat else "UNSAT")
    print(f"{status}  branches={len(refined.branches())}")
    return 0


def cmd_deduce(args) -> int:
    phi = parse(args.formula)
    value = _VALUE_BY_NAME[args.value]
    names = [n.strip() for n in args.obs.split(",") if n.strip()]
    known = frozenset(
        (a, t) for a in names for t in range(args.time + 1)
    )
    obs = ObservationSet("p", known)
    rule = match_rule(phi, value, obs, args.time)
    print(f"rule: {rule or 'none'}")
    ev = EvaluatedFormula(phi, value, "p", args.time)
    for d in sorted(deduce(ev, obs), key=lambda d: (d.time, d.atom)):
        print(d)
    return 0


def cmd_oracle(args) -> int:
    phi = parse(args.formula)
    with open(args.trace, "r", encoding="utf-8") as fh:
        trace = parse_trace(fh.read())
    verdict = ltl3_eval(trace, phi)
    print(verdict)
    return _VERDICT_EXIT[verdict]


def _parse_sizes(text: str) -> tuple[int, ...]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(x) for x in text.split(",") if x.strip())


def cmd_bench(args) -> int:
    if args.patterns:
        patterns = (
            PATTERN_KINDS
            if args.patterns == "all"
            else tuple(p.strip() for p in args.patterns.split(",") if p.strip())
        )
        unknown = set(patterns) - set(PATTERN_KINDS)
        if unknown:
            raise AlphabetError(f"unknown patterns: {sorted(unknown)}")
        sizes: tuple[int, ...] = ()
    else:
        patterns = ()
        sizes = _parse_sizes(args.sizes)
    approaches = tuple(a.strip().upper() for a in args.approaches.split(",") if a.strip())
    if set(approaches) - {"BF", "DM1", "DM2"}:
        raise AlphabetError(f"unknown approaches in {args.approaches!r}")
    cfg = BenchConfig(
        sizes=sizes,
        patterns=patterns,
        formula_count=args.count,
        process_count=args.processes,
        atoms_per_process=args.atoms_per_process,
        trace_cap=args.trace_cap,
        p_true=args.p_true,
        seed=_seed_default(args.seed),
        approaches=approaches,
    )
    report = bench(cfg, jobs=args.jobs)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_csv())
    print(report.to_table(), end="")
    return 0


def make_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="declmon",
        description="Decentralized LTL monitoring over synchronous processes",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("monitor", help="run the decentralized monitor on a trace")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument(
        "-a", "--alphabet", required=True, help="process atoms, e.g. 'A:a1,a2;B:b'"
    )
    p.add_argument("--trace", help="trace file (one step per line)")
    p.add_argument("--random-trace", type=int, metavar="LEN")
    p.add_argument("--p-true", type=float, default=0.5)
    p.add_argument("--strategy", choices=["dm1", "dm2"], default="dm1")
    p.add_argument("--seed")
    p.add_argument("--dump-tableau", metavar="DOT")
    p.add_argument("--dump-tables", action="store_true")
    p.add_argument("--log", action="store_true", help="print the per-round run log")
    p.set_defaults(func=cmd_monitor)

    p = sub.add_parser("tableau", help="build a tableau and report satisfiability")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--dump", metavar="DOT")
    p.add_argument("--refined", action="store_true", help="dump the refined tableau")
    p.set_defaults(func=cmd_tableau)

    p = sub.add_parser("deduce", help="debug the inference engine")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--value", choices=["T", "F", "?"], required=True)
    p.add_argument("--obs", default="", help="atoms the sender observes, e.g. 'a,b'")
    p.add_argument("--time", type=int, default=0, help="evaluation step")
    p.set_defaults(func=cmd_deduce)

    p = sub.add_parser("oracle", help="centralized LTL3 evaluation of a trace")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--trace", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run the benchmark suite")
    p.add_argument("--sizes", default="1..4", help="e.g. '1..4' or '1,3'")
    p.add_argument("--patterns", help="'all' or comma-separated pattern names")
    p.add_argument("--count", type=int, default=100, help="formulas per size/pattern")
    p.add_argument("--approaches", default="bf,dm1,dm2")
    p.add_argument("--processes", type=int, default=3)
    p.add_argument("--atoms-per-process", type=int, default=2)
    p.add_argument("--trace-cap", type=int, default=1000)
    p.add_argument("--p-true", type=float, default=0.5)
    p.add_argument("--seed")
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return top


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (
        KnowledgeConflictError,
        InconsistentEvaluationError,
        VerdictConflictError,
    ) as exc:
        print(f"internal conflict: {exc}", file=sys.stderr)
        return EXIT_CONFLICT
    except (FormulaSyntaxError, AlphabetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
