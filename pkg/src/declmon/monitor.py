"""The decentralized monitor: setup, round-robin policy synthesis, minimal
propagation payloads, and the per-round lockstep engine.

Rounds are two-phase: every monitor ingests its local event and the message
its predecessor sent last round, then every monitor emits one message to its
ring successor. Verdicts come from the residual of the monitored formula
progressed under partial knowledge: unknown atoms stay symbolic, and the
verdict is definite once the residual is tableau-valid or unsatisfiable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import Atom, Formula, Not, atoms, nnf
from .inference import (
    Deduction,
    EvaluatedFormula,
    ObservationSet,
    deduce,
    deduction_set,
)
from .knowledge import (
    CommScheme,
    KnowledgeStore,
    ObsPowerModel,
    build_table_template,
)
from .ltl3 import residual_verdict, satisfiable
from .progression import progress_partial, resolve_stamped
from .semantics import BOT, TOP, UNKNOWN, TruthValue3
from .system import AlphabetError, Event, SystemAlphabet, Trace
from .tableau import Tableau, branch_profiles, build, refine

MESSAGE_HEADER_BITS = 16
STATE_TAG_BITS = 8
VALUE_BITS = 2

_VALUE_CODE = {UNKNOWN: 0, TOP: 1, BOT: 2}
_CODE_VALUE = {c: v for v, c in _VALUE_CODE.items()}


def index_bits(table_size: int) -> int:
    """ceil(log2 K) bits to address a K-entry truth table."""
    return max(0, (table_size - 1).bit_length())


@dataclass(frozen=True)
class Message:
    """One round's transmission: (index, state, value) triples over the
    shared table index map."""

    sender: str
    round: int
    payload: tuple[tuple[int, int, TruthValue3], ...]

    def bit_size(self, table_size: int) -> int:
        pair = index_bits(table_size) + STATE_TAG_BITS + VALUE_BITS
        return MESSAGE_HEADER_BITS + pair * len(self.payload)

    def encode(self, table_size: int, ring: tuple[str, ...]) -> bytes:
        """Bit-exact wire format: 8-bit sender id, 8-bit round (low bits),
        then per pair the index, an 8-bit state tag, and a 2-bit value."""
        w = index_bits(table_size)
        acc = ring.index(self.sender) & 0xFF
        nbits = 8
        acc = (acc << 8) | (self.round & 0xFF)
        nbits += 8
        for idx, state, value in self.payload:
            acc = (acc << w) | idx
            acc = (acc << STATE_TAG_BITS) | (state & 0xFF)
            acc = (acc << VALUE_BITS) | _VALUE_CODE[value]
            nbits += w + STATE_TAG_BITS + VALUE_BITS
        pad = (-nbits) % 8
        return ((acc << pad)).to_bytes((nbits + pad) // 8, "big")


def decode_message(
    data: bytes, table_size: int, ring: tuple[str, ...]
) -> Message:
    w = index_bits(table_size)
    pair = w + STATE_TAG_BITS + VALUE_BITS
    total = len(data) * 8
    n_pairs = (total - MESSAGE_HEADER_BITS) // pair
    acc = int.from_bytes(data, "big")
    acc >>= (total - MESSAGE_HEADER_BITS - n_pairs * pair)
    fields: list[int] = []
    for _ in range(n_pairs):
        fields.append(acc & ((1 << VALUE_BITS) - 1))
        acc >>= VALUE_BITS
        fields.append(acc & ((1 << STATE_TAG_BITS) - 1))
        acc >>= STATE_TAG_BITS
        fields.append(acc & ((1 << w) - 1) if w else 0)
        acc >>= w
    rnd = acc & 0xFF
    acc >>= 8
    sender = ring[acc & 0xFF]
    payload = []
    for i in range(n_pairs - 1, -1, -1):
        code, state, idx = fields[3 * i], fields[3 * i + 1], fields[3 * i + 2]
        payload.append((idx, state, _CODE_VALUE[code]))
    return Message(sender, rnd, tuple(payload))


@dataclass(frozen=True)
class Metrics:
    num_msgs: int = 0
    msg_bits: int = 0
    trace_len: int = 0
    mem_bits: int = 0


@dataclass(frozen=True)
class RRPolicy:
    ring: CommScheme
    strategy_tag: str  # "DM1" | "DM2"


def _ranked_ring(alpha: SystemAlphabet, counts: dict[str, int]) -> CommScheme:
    order = sorted(alpha.processes, key=lambda p: (-counts[p], alpha.pid_index(p)))
    return CommScheme(tuple(order))


def rank_dm1(alpha: SystemAlphabet, phi: Formula) -> CommScheme:
    """Ring ordered by how many formula atoms each process owns."""
    phi_atoms = atoms(phi)
    counts = {p: len(phi_atoms & alpha.atoms_of(p)) for p in alpha.processes}
    return _ranked_ring(alpha, counts)


def rank_dm2(tab: Tableau, alpha: SystemAlphabet) -> CommScheme:
    """Ring ordered by how many tableau branches each process contributes to."""
    profiles = branch_profiles(tab, alpha)
    counts = {
        p: sum(1 for pr in profiles if pr.per_process_count.get(p, 0) > 0)
        for p in alpha.processes
    }
    return _ranked_ring(alpha, counts)


def min_list(
    M: frozenset[tuple[str, int]],
    store: KnowledgeStore,
    sender_obs: ObservationSet,
    t: int,
) -> list[tuple[int, int, TruthValue3]]:
    """Algorithm 1 over the whole diff M: pick table entries whose deduction
    sets cover M with no redundant member, then fill the remainder with
    atomic pairs. The result covers M exactly and is minimal (dropping any
    pair loses coverage)."""
    if not M:
        return []
    selected: list[tuple[int, int, TruthValue3, frozenset[tuple[str, int]]]] = []
    covered: set[tuple[str, int]] = set()
    lo = min(step for _, step in M)
    # exploration: compound entries in (state, index) order
    for state in range(lo, t + 1):
        table = store.table(state)
        for f, value, idx in table.rows():
            if isinstance(f, Atom):
                continue
            gain = deduction_set(f, value, sender_obs, state) & M
            if not gain or gain <= covered:
                continue
            selected.append((idx, state, value, gain))
            covered |= gain
    # refinement: drop entries whose contribution the others subsume
    changed = True
    while changed:
        changed = False
        for k in range(len(selected) - 1, -1, -1):
            others: set[tuple[str, int]] = set()
            for j, item in enumerate(selected):
                if j != k:
                    others |= item[3]
            if selected[k][3] <= others:
                del selected[k]
                changed = True
                break
    payload = [(idx, state, value) for idx, state, value, _ in selected]
    covered = set().union(*(item[3] for item in selected)) if selected else set()
    # atomic fallback for anything no compound entry covers
    for a, step in sorted(M - covered):
        idx = store.template.index(Atom(a))
        value = store.valuation.value_of(a, step)
        payload.append((idx, step, value))
    return payload


class VerdictConflictError(RuntimeError):
    """Two monitors reached contradictory definite verdicts."""


@dataclass
class MonitorState:
    pid: str
    store: KnowledgeStore
    policy: RRPolicy
    model: ObsPowerModel
    phi: Formula
    phi_atoms: frozenset[str]
    own_atoms: frozenset[str]
    residual: Formula
    verdict: TruthValue3 = UNKNOWN

    @property
    def successor(self) -> str:
        return self.policy.ring.successor(self.pid)


def monitor_step(
    ms: MonitorState, local_event: Event, inbox: list[Message], t: int
) -> tuple[Message, MonitorState]:
    """One round for one monitor: ingest, deduce from the inbox, emit the
    minimal payload for the ring successor, then re-evaluate the verdict."""
    if ms.verdict.is_definite:
        raise RuntimeError(f"monitor {ms.pid} already decided {ms.verdict}")
    ms.store.collect_garbage(t - ms.policy.ring.diameter)
    new_facts: list[Deduction] = []

    def record(facts) -> None:
        added = ms.store.update(facts)
        new_facts.extend(added)

    ms.store.table(t)
    record(
        Deduction(a, t, TruthValue3.from_bool(a in local_event))
        for a in sorted(ms.own_atoms)
    )
    for msg in inbox:
        sender_obs = ms.model.observation_set(
            msg.sender, msg.round, restrict=ms.phi_atoms
        )
        for idx, state, value in msg.payload:
            f = ms.store.template[idx]
            if isinstance(f, Atom):
                if value.is_definite:
                    record([Deduction(f.name, state, value)])
            else:
                ev = EvaluatedFormula(f, value, msg.sender, state)
                record(deduce(ev, sender_obs))
    # resolve past unknowns in the residual before progressing this step
    past = {
        (d.atom, d.time): d.value is TOP for d in new_facts if d.time < t
    }
    ms.residual = resolve_stamped(ms.residual, past)
    M = ms.model.obs_diff(ms.pid, ms.successor, t, restrict=ms.phi_atoms)
    my_obs = ms.model.observation_set(ms.pid, t, restrict=ms.phi_atoms)
    payload = min_list(M, ms.store, my_obs, t)
    outgoing = Message(ms.pid, t, tuple(payload))
    known_t = {a: ms.store.valuation.value_of(a, t) for a in ms.phi_atoms}
    ms.residual = progress_partial(ms.residual, known_t, t)
    verdict = residual_verdict(ms.residual)
    if verdict.is_definite:
        ms.verdict = verdict
    return outgoing, ms


@dataclass
class RoundRecord:
    """Listener view of one round, for instrumentation and run logs."""

    round: int
    messages: dict[str, Message]
    diffs: dict[str, frozenset[tuple[str, int]]]
    monitors: dict[str, MonitorState]


@dataclass(frozen=True)
class RunResult:
    verdict: TruthValue3
    steps_to_verdict: int
    metrics: Metrics
    strategy: str
    ring: tuple[str, ...]
    decider: str | None = None
    decision_round: int | None = None


def setup(
    alpha: SystemAlphabet, phi: Formula, strategy: str
) -> tuple[Tableau, tuple[Formula, ...], RRPolicy] | TruthValue3:
    """Setup phase: tableau, refinement, shared index map, ring policy.

    Returns a definite verdict instead when the formula is unsatisfiable or
    valid: those runs end before any message is sent.
    """
    if not satisfiable(phi):
        return BOT
    if not satisfiable(Not(phi)):
        return TOP
    tab = refine(build(nnf(phi)))
    template = build_table_template(phi, tab)
    if strategy == "DM1":
        ring = rank_dm1(alpha, phi)
    elif strategy == "DM2":
        ring = rank_dm2(tab, alpha)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return tab, template, RRPolicy(ring, strategy)


def run(
    alpha: SystemAlphabet,
    phi: Formula,
    trace: Trace,
    strategy: str = "DM1",
    listener=None,
) -> RunResult:
    """Monitor phi decentralized over the trace until some monitor decides."""
    stray = {a for e in trace for a in e.true_atoms} - alpha.all_atoms
    if stray:
        raise AlphabetError(f"trace atoms not in the alphabet: {sorted(stray)}")
    outcome = setup(alpha, phi, strategy)
    if isinstance(outcome, TruthValue3):
        return RunResult(outcome, 0, Metrics(0, 0, 0, 0), strategy, ())
    tab, template, policy = outcome
    model = ObsPowerModel(policy.ring, alpha)
    phi_atoms = atoms(phi)
    monitors = {
        pid: MonitorState(
            pid=pid,
            store=KnowledgeStore(pid, template),
            policy=policy,
            model=model,
            phi=phi,
            phi_atoms=phi_atoms,
            own_atoms=alpha.atoms_of(pid) & phi_atoms,
            residual=phi,
        )
        for pid in policy.ring.ring
    }
    table_size = len(template)
    num_msgs = 0
    msg_bits = 0
    peak_mem = 0
    inboxes: dict[str, list[Message]] = {pid: [] for pid in monitors}
    for t, event in enumerate(trace):
        outgoing: dict[str, Message] = {}
        diffs: dict[str, frozenset[tuple[str, int]]] = {}
        for pid, ms in monitors.items():
            local = alpha.local_view(pid, event)
            diffs[pid] = model.obs_diff(pid, ms.successor, t, restrict=phi_atoms)
            msg, _ = monitor_step(ms, local, inboxes[pid], t)
            outgoing[pid] = msg
            num_msgs += 1
            msg_bits += msg.bit_size(table_size)
            peak_mem = max(peak_mem, ms.store.live_value_bits())
        if listener is not None:
            listener(RoundRecord(t, outgoing, diffs, monitors))
        inboxes = {pid: [] for pid in monitors}
        for pid, msg in outgoing.items():
            inboxes[monitors[pid].successor].append(msg)
        decided = {
            pid: ms.verdict for pid, ms in monitors.items() if ms.verdict.is_definite
        }
        if decided:
            values = set(decided.values())
            if len(values) > 1:
                raise VerdictConflictError(f"monitors disagree: {decided}")
            decider = next(p for p in policy.ring.ring if p in decided)
            verdict = decided[decider]
            metrics = Metrics(num_msgs, msg_bits, t + 1, peak_mem)
            return RunResult(
                verdict, t + 1, metrics, strategy, policy.ring.ring, decider, t
            )
    metrics = Metrics(num_msgs, msg_bits, len(trace), peak_mem)
    return RunResult(UNKNOWN, len(trace), metrics, strategy, policy.ring.ring)
