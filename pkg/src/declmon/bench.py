"""Benchmark harness: random/pattern formula generation, trace generation,
the progression-and-forward baseline (BF-style), and Table-style reports.

All randomness flows from one seed; per-sample generators are seeded with
stable derived strings so runs are byte-reproducible and order-independent.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass

from .formula import (
    FALSE,
    Atom,
    Finally,
    Formula,
    Globally,
    Next,
    Not,
    TrueConst,
    Until,
    conj,
    disj,
    implies,
    symbol_count,
    temporal_size,
)
from .monitor import Metrics, RunResult, rank_dm1, run
from .progression import progress_partial, resolve_stamped, stamped_atoms
from .semantics import BOT, TOP, UNKNOWN, TruthValue3
from .system import Event, SystemAlphabet, Trace

PATTERN_KINDS = (
    "absence",
    "existence",
    "bounded-existence",
    "universal",
    "precedence",
    "response",
    "precedence-chain",
    "response-chain",
    "constrained-chain",
)


@dataclass(frozen=True)
class BenchConfig:
    sizes: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    patterns: tuple[str, ...] = ()
    formula_count: int = 1000
    process_count: int = 3
    atoms_per_process: int = 2
    trace_cap: int = 1000
    p_true: float = 0.5
    seed: int = 0
    approaches: tuple[str, ...] = ("BF", "DM1", "DM2")


@dataclass(frozen=True)
class SampleRow:
    approach: str
    group: str  # formula size or pattern name
    formula: str
    verdict: TruthValue3
    metrics: Metrics
    seed: str


def default_alphabet(process_count: int, atoms_per_process: int) -> SystemAlphabet:
    names = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    assignment = []
    for i in range(process_count):
        pid = names[i % 26] + ("" if i < 26 else str(i // 26))
        prefix = pid.lower()
        assignment.append(
            (pid, [f"{prefix}{k + 1}" for k in range(atoms_per_process)])
        )
    return SystemAlphabet(assignment)


def _gen_prop(rng: random.Random, atom_names: list[str], depth: int) -> Formula:
    roll = rng.random()
    if depth <= 0 or roll < 0.4:
        lit: Formula = Atom(rng.choice(atom_names))
        return Not(lit) if rng.random() < 0.5 else lit
    if roll < 0.7:
        return conj(
            [_gen_prop(rng, atom_names, depth - 1), _gen_prop(rng, atom_names, depth - 1)]
        )
    return disj(
        [_gen_prop(rng, atom_names, depth - 1), _gen_prop(rng, atom_names, depth - 1)]
    )


def _gen_sized(
    rng: random.Random, atom_names: list[str], budget: int, depth: int
) -> Formula:
    if budget == 0:
        return _gen_prop(rng, atom_names, 2)
    if depth > 8:
        # force a temporal production so equal-budget recursion terminates
        op = rng.choice("XFG") if budget == 1 else rng.choice("XFGU")
    else:
        op = rng.choice(["X", "F", "G", "U", "&", "|", "!"])
    if op == "X":
        return Next(_gen_sized(rng, atom_names, budget - 1, depth + 1))
    if op == "F":
        return Finally(_gen_sized(rng, atom_names, budget - 1, depth + 1))
    if op == "G":
        return Globally(_gen_sized(rng, atom_names, budget - 1, depth + 1))
    if op == "U":
        k = rng.randint(0, budget - 1)
        return Until(
            _gen_sized(rng, atom_names, k, depth + 1),
            _gen_sized(rng, atom_names, budget - 1 - k, depth + 1),
        )
    if op == "!":
        return Not(_gen_sized(rng, atom_names, budget, depth + 1))
    k = rng.randint(0, budget)
    left = _gen_sized(rng, atom_names, k, depth + 1)
    right = _gen_sized(rng, atom_names, budget - k, depth + 1)
    return conj([left, right]) if op == "&" else disj([left, right])


def random_formula(size: int, atom_names: list[str], seed) -> Formula:
    """A random formula with exactly `size` temporal operators."""
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(str(seed))
    f = _gen_sized(rng, list(atom_names), size, 0)
    assert temporal_size(f) == size
    return f


def _weak_until(a: Formula, b: Formula) -> Formula:
    return disj([Until(a, b), Globally(a)])


def pattern_formula(kind: str, atom_names: list[str], seed) -> Formula:
    """A global-scope specification-pattern instance with random parameters."""
    rng = seed if isinstance(seed, random.Random) else random.Random(str(seed))
    need = {"precedence-chain": 3, "response-chain": 3, "constrained-chain": 4}.get(
        kind, 2
    )
    if len(atom_names) < need:
        raise ValueError(f"pattern {kind} needs {need} atoms")
    picked = rng.sample(sorted(atom_names), min(4, len(atom_names)))
    p, s, t, z = (picked + [None] * 4)[:4]
    if kind == "absence":
        return Globally(Not(Atom(p)))
    if kind == "existence":
        return Finally(Atom(p))
    if kind == "bounded-existence":
        np_ = Not(Atom(p))
        ap = Atom(p)
        return _weak_until(
            np_, _weak_until(ap, _weak_until(np_, _weak_until(ap, Globally(np_))))
        )
    if kind == "universal":
        return Globally(Atom(p))
    if kind == "precedence":
        return _weak_until(Not(Atom(p)), Atom(s))
    if kind == "response":
        return Globally(implies(Atom(p), Finally(Atom(s))))
    if kind == "precedence-chain":
        chain = Until(
            Not(Atom(p)), conj([Atom(s), Not(Atom(p)), Next(Until(Not(Atom(p)), Atom(t)))])
        )
        return implies(Finally(Atom(p)), chain)
    if kind == "response-chain":
        return Globally(implies(Atom(p), Finally(conj([Atom(s), Next(Finally(Atom(t)))]))))
    if kind == "constrained-chain":
        return Globally(
            implies(
                Atom(p),
                Finally(conj([Atom(s), Not(Atom(z)), Next(Until(Not(Atom(z)), Atom(t)))])),
            )
        )
    raise ValueError(f"unknown pattern kind {kind!r}")


def random_trace(
    alpha: SystemAlphabet, length: int, p_true: float, seed
) -> Trace:
    """Each atom true independently with probability p_true per step."""
    if not 0.0 <= p_true <= 1.0:
        raise ValueError("p_true must be a probability")
    rng = seed if isinstance(seed, random.Random) else random.Random(str(seed))
    ordered = [a for pid in alpha.processes for a in sorted(alpha.atoms_of(pid))]
    steps = []
    for _ in range(length):
        steps.append(frozenset(a for a in ordered if rng.random() < p_true))
    return Trace(tuple(Event(s) for s in steps))


def run_bf(alpha: SystemAlphabet, phi: Formula, trace: Trace) -> RunResult:
    """Progression-and-forward baseline: each process rewrites an obligation
    with its local knowledge (remote atoms stay symbolic), ships the whole
    formula to its ring successor, and a verdict fires when any obligation
    folds to a constant. Message/memory cost is 8 bits per formula symbol."""
    ring = rank_dm1(alpha, phi)
    order = ring.ring
    obligations: dict[str, Formula] = {pid: phi for pid in order}
    history: dict[str, dict[tuple[str, int], bool]] = {pid: {} for pid in order}
    num_msgs = 0
    msg_bits = 0
    peak_mem = max(symbol_count(phi) * 8, 0)
    for t, event in enumerate(trace):
        outgoing: dict[str, Formula] = {}
        verdicts: dict[str, TruthValue3] = {}
        for pid in order:
            local = alpha.local_view(pid, event)
            for a in alpha.atoms_of(pid):
                history[pid][(a, t)] = a in local
            obl = obligations[pid]
            pending = {
                k: history[pid][k] for k in stamped_atoms(obl) if k in history[pid]
            }
            obl = resolve_stamped(obl, pending)
            known = {
                a: TruthValue3.from_bool(a in local) for a in alpha.atoms_of(pid)
            }
            obl = progress_partial(obl, known, t)
            outgoing[pid] = obl
            num_msgs += 1
            msg_bits += symbol_count(obl) * 8
            peak_mem = max(peak_mem, symbol_count(obl) * 8)
            if isinstance(obl, TrueConst):
                verdicts[pid] = TOP
            elif obl == FALSE:
                verdicts[pid] = BOT
        if verdicts:
            decider = next(p for p in order if p in verdicts)
            metrics = Metrics(num_msgs, msg_bits, t + 1, peak_mem)
            return RunResult(
                verdicts[decider], t + 1, metrics, "BF", order, decider, t
            )
        obligations = {ring.successor(pid): obl for pid, obl in outgoing.items()}
    metrics = Metrics(num_msgs, msg_bits, len(trace), peak_mem)
    return RunResult(UNKNOWN, len(trace), metrics, "BF", order)


def _sample_seed(cfg: BenchConfig, group: str, i: int) -> str:
    return f"{cfg.seed}:{group}:{i}"


def _one_sample(cfg: BenchConfig, group: str, i: int) -> list[SampleRow]:
    alpha = default_alphabet(cfg.process_count, cfg.atoms_per_process)
    seed = _sample_seed(cfg, group, i)
    atom_names = sorted(alpha.all_atoms)
    if isinstance(group, int) or str(group).isdigit():
        phi = random_formula(int(group), atom_names, f"{seed}:f")
    else:
        phi = pattern_formula(str(group), atom_names, f"{seed}:f")
    trace = random_trace(alpha, cfg.trace_cap, cfg.p_true, f"{seed}:t")
    rows = []
    for approach in cfg.approaches:
        if approach == "BF":
            result = run_bf(alpha, phi, trace)
        else:
            result = run(alpha, phi, trace, approach)
        rows.append(
            SampleRow(approach, str(group), str(phi), result.verdict, result.metrics, seed)
        )
    return rows


def bench(cfg: BenchConfig, jobs: int = 1) -> "BenchReport":
    """Run every configured approach on shared (formula, trace) samples."""
    groups: list[str] = [str(s) for s in (cfg.patterns if cfg.patterns else cfg.sizes)]
    tasks = [(g, i) for g in groups for i in range(cfg.formula_count)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_bench_task, [(cfg, g, i) for g, i in tasks]))
    else:
        chunks = [_one_sample(cfg, g, i) for g, i in tasks]
    rows = [row for chunk in chunks for row in chunk]
    return BenchReport(cfg, groups, rows)


def _bench_task(args) -> list[SampleRow]:
    cfg, group, i = args
    return _one_sample(cfg, group, i)


CSV_NOTE = "# mem_bits is the peak monitor-structure size over the run"
CSV_HEADER = [
    "approach",
    "formula_size_or_pattern",
    "formula",
    "verdict",
    "trace_len",
    "num_msgs",
    "msg_bits",
    "mem_bits",
    "seed",
]


@dataclass
class BenchReport:
    config: BenchConfig
    groups: list[str]
    rows: list[SampleRow]

    def averages(self) -> dict[tuple[str, str], dict[str, float]]:
        """Arithmetic means per (group, approach) of the four metrics."""
        buckets: dict[tuple[str, str], list[Metrics]] = {}
        for row in self.rows:
            buckets.setdefault((row.group, row.approach), []).append(row.metrics)
        out = {}
        for key, ms in buckets.items():
            n = len(ms)
            out[key] = {
                "trace_len": sum(m.trace_len for m in ms) / n,
                "num_msgs": sum(m.num_msgs for m in ms) / n,
                "msg_bits": sum(m.msg_bits for m in ms) / n,
                "mem_bits": sum(m.mem_bits for m in ms) / n,
            }
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_NOTE + "\r\n")
        writer = csv.writer(buf)
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            writer.writerow(
                [
                    row.approach,
                    row.group,
                    row.formula,
                    str(row.verdict),
                    row.metrics.trace_len,
                    row.metrics.num_msgs,
                    row.metrics.msg_bits,
                    row.metrics.mem_bits,
                    row.seed,
                ]
            )
        return buf.getvalue()

    def to_table(self) -> str:
        """Aligned text table mirroring the paper-style layout:
        one row per group, (|trace| #msg |msg| |mem|) per approach."""
        approaches = list(self.config.approaches)
        avgs = self.averages()
        metric_names = ("|trace|", "#msg", "|msg|", "|mem|")
        metric_keys = ("trace_len", "num_msgs", "msg_bits", "mem_bits")
        header1 = [""] + [m for m in metric_names for _ in approaches]
        header2 = ["size/pattern"] + [ap for _ in metric_names for ap in approaches]
        rows = []
        for g in self.groups:
            cells = [g]
            for key in metric_keys:
                for ap in approaches:
                    stats = avgs.get((g, ap))
                    cells.append(f"{stats[key]:.4g}" if stats else "-")
            rows.append(cells)
        table = [header1, header2] + rows
        widths = [max(len(r[c]) for r in table) for c in range(len(table[0]))]
        lines = [
            "  ".join(cell.rjust(widths[c]) for c, cell in enumerate(r)) for r in table
        ]
        return "\n".join(lines) + "\n"
