"""Per-process knowledge: observation power under a static ring, indexed
truth tables, and the store each monitor keeps.

Under a fixed round-robin scheme every process can compute exactly which
(atom, step) facts any other process knows at a round: its own atoms up to
now, plus each other process's atoms up to now minus the ring distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import Atom, Finally, Formula, Globally, atoms_in_order, is_literal
from .inference import ObservationSet, matches_rule_shape
from .semantics import (
    UNKNOWN,
    PartialValuation,
    TruthValue3,
    eval_prop,
    t3_and,
    t3_or,
)
from .system import SystemAlphabet
from .tableau import Tableau


class KnowledgeConflictError(ValueError):
    """Two definite values disagree: an unsound deduction or corrupt message."""


@dataclass(frozen=True)
class CommScheme:
    """A ring: each process sends to its successor every round."""

    ring: tuple[str, ...]

    def successor(self, pid: str) -> str:
        i = self.ring.index(pid)
        return self.ring[(i + 1) % len(self.ring)]

    def distance(self, src: str, dst: str) -> int:
        """Rounds needed for src's observations to reach dst along the ring."""
        i, j = self.ring.index(src), self.ring.index(dst)
        return (j - i) % len(self.ring)

    @property
    def diameter(self) -> int:
        return len(self.ring) - 1


class ObsPowerModel:
    """Deterministic model of every process's observation power."""

    def __init__(self, scheme: CommScheme, alphabet: SystemAlphabet):
        if set(scheme.ring) != set(alphabet.processes):
            raise ValueError("ring must be a permutation of the processes")
        self.scheme = scheme
        self.alphabet = alphabet

    def horizons(self, pid: str, t: int) -> dict[str, int]:
        """Latest step of each process's atoms known to pid at round t
        (-1 when nothing is known yet)."""
        out = {}
        for q in self.alphabet.processes:
            lag = 0 if q == pid else self.scheme.distance(q, pid)
            out[q] = t - lag
        return out

    def obs_power(self, pid: str, t: int) -> frozenset[tuple[str, int]]:
        """All (atom, step) facts pid knows at round t (Example-4 sets)."""
        out = set()
        for q, horizon in self.horizons(pid, t).items():
            for a in self.alphabet.atoms_of(q):
                for step in range(horizon + 1):
                    out.add((a, step))
        return frozenset(out)

    def knows(self, pid: str, t: int, atom: str, step: int) -> bool:
        q = self.alphabet.owner_of(atom)
        lag = 0 if q == pid else self.scheme.distance(q, pid)
        return step <= t - lag

    def obs_diff(
        self, sender: str, receiver: str, t: int, restrict: frozenset[str] | None = None
    ) -> frozenset[tuple[str, int]]:
        """Facts the sender knows at round t that its successor does not."""
        if self.scheme.successor(sender) != receiver:
            raise ValueError(f"{receiver} is not the ring successor of {sender}")
        hs = self.horizons(sender, t)
        hr = self.horizons(receiver, t)
        out = set()
        for q in self.alphabet.processes:
            for a in self.alphabet.atoms_of(q):
                if restrict is not None and a not in restrict:
                    continue
                for step in range(hr[q] + 1, hs[q] + 1):
                    if step >= 0:
                        out.add((a, step))
        return frozenset(out)

    def observation_set(
        self, pid: str, t: int, restrict: frozenset[str] | None = None
    ) -> ObservationSet:
        facts = self.obs_power(pid, t)
        if restrict is not None:
            facts = frozenset((a, s) for a, s in facts if a in restrict)
        return ObservationSet(pid, facts)


def build_table_template(phi: Formula, tab: Tableau) -> tuple[Formula, ...]:
    """The shared indexed entry list: rule-shaped tableau label formulas in
    pre-order (first occurrence), then the atoms of phi in first-occurrence
    order. Every process derives the identical list."""
    entries: list[Formula] = []
    if tab.root is not None:
        stack = [tab.root]
        while stack:
            node = stack.pop()
            for g in node.label:
                if not is_literal(g) and matches_rule_shape(g) and g not in entries:
                    entries.append(g)
            stack.extend(reversed(node.children))
    for name in atoms_in_order(phi):
        a = Atom(name)
        if a not in entries:
            entries.append(a)
    return tuple(entries)


@dataclass
class TruthTable:
    """Per-state values for the shared entry list; index i is entries[i]."""

    state: int
    entries: tuple[Formula, ...]
    values: list[TruthValue3] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.values:
            self.values = [UNKNOWN] * len(self.entries)

    def index_of(self, f: Formula) -> int:
        return self.entries.index(f)

    def rows(self) -> list[tuple[Formula, TruthValue3, int]]:
        return [(f, v, i) for i, (f, v) in enumerate(zip(self.entries, self.values))]


def build_truth_table(phi: Formula, tab: Tableau, state: int) -> TruthTable:
    return TruthTable(state, build_table_template(phi, tab))


class KnowledgeStore:
    """One monitor's accumulated definite facts plus its per-state tables."""

    def __init__(self, owner: str, template: tuple[Formula, ...]):
        self.owner = owner
        self.template = template
        self.valuation = PartialValuation()
        self.tables: dict[int, TruthTable] = {}

    def table(self, state: int) -> TruthTable:
        tbl = self.tables.get(state)
        if tbl is None:
            tbl = TruthTable(state, self.template)
            self.tables[state] = tbl
            self._reevaluate(state)
        return tbl

    def update(self, facts) -> list:
        """Record definite (atom, step, value) facts; conflicting definite
        values raise. Touched tables are re-evaluated. Idempotent; returns
        the facts that were actually new."""
        added = []
        touched: set[int] = set()
        for fact in facts:
            atom, step, value = fact.atom, fact.time, fact.value
            if value is UNKNOWN:
                continue
            current = self.valuation.value_of(atom, step)
            if current is not UNKNOWN:
                if current is not value:
                    raise KnowledgeConflictError(
                        f"{self.owner}: {atom}@{step} already {current}, got {value}"
                    )
                continue
            self.valuation.set_atom(atom, step, value)
            added.append(fact)
            touched.add(step)
        if touched:
            # a fact at step s can flip any table at state >= s (F/G windows)
            lo = min(touched)
            for state in self.tables:
                if state >= lo:
                    self._reevaluate(state)
        return added

    def value_at(self, f: Formula, state: int) -> TruthValue3:
        """Kleene value of a table entry at a state under current knowledge.

        F/G entries are read over the bounded window [0, state]."""
        if isinstance(f, (Finally, Globally)):
            step_vals = (
                eval_prop(f.child, lambda a, s=s: self.valuation.value_of(a, s))
                for s in range(state + 1)
            )
            return t3_and(step_vals) if isinstance(f, Globally) else t3_or(step_vals)
        return eval_prop(f, lambda a: self.valuation.value_of(a, state))

    def _reevaluate(self, state: int) -> None:
        tbl = self.tables[state]
        tbl.values = [self.value_at(f, state) for f in tbl.entries]

    def collect_garbage(self, before: int) -> None:
        """Drop tables for states everyone already fully knows."""
        for state in [s for s in self.tables if s < before]:
            del self.tables[state]

    def live_value_bits(self) -> int:
        """2 bits per live table value: the monitor's mutable state size."""
        return 2 * sum(len(t.values) for t in self.tables.values())
