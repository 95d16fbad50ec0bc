"""System model: processes, local alphabets, events, and traces."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

_IDENT_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    """One step's observation: the set of atoms true at that step.

    Atoms absent from true_atoms are false at that step.
    """

    true_atoms: frozenset[str]

    @staticmethod
    def of(*names: str) -> "Event":
        return Event(frozenset(names))

    def restrict(self, atom_set: frozenset[str]) -> "Event":
        return Event(self.true_atoms & atom_set)

    def __contains__(self, atom: str) -> bool:
        return atom in self.true_atoms


@dataclass(frozen=True)
class Trace:
    """A finite sequence of global events; index t is global time step t."""

    events: tuple[Event, ...]

    @staticmethod
    def from_lists(steps: Iterable[Iterable[str]]) -> "Trace":
        return Trace(tuple(Event(frozenset(step)) for step in steps))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Trace(self.events[i])
        return self.events[i]

    def prefix(self, length: int) -> "Trace":
        return Trace(self.events[:length])

    def padded(self, extra: int) -> "Trace":
        """The trace extended by repeating its final event `extra` times."""
        if extra <= 0 or not self.events:
            return self
        return Trace(self.events + (self.events[-1],) * extra)


class SystemAlphabet:
    """Ordered processes with pairwise-disjoint local atom sets.

    Process order provides the externally-given PIDs used for tie-breaking.
    """

    def __init__(self, assignment: Iterable[tuple[str, Iterable[str]]]):
        self.processes: tuple[str, ...] = tuple(pid for pid, _ in assignment)
        self._atoms: dict[str, frozenset[str]] = {
            pid: frozenset(names) for pid, names in assignment
        }
        if len(self.processes) != len(set(self.processes)):
            raise AlphabetError("duplicate process ids")
        if not self.processes:
            raise AlphabetError("at least one process is required")
        owner: dict[str, str] = {}
        for pid in self.processes:
            for name in self._atoms[pid]:
                if not _IDENT_RE.match(name):
                    raise AlphabetError(f"bad atom name {name!r}")
                if name in owner:
                    raise AlphabetError(
                        f"atom {name!r} assigned to both {owner[name]} and {pid}"
                    )
                owner[name] = pid
        self._owner = owner

    @property
    def all_atoms(self) -> frozenset[str]:
        return frozenset(self._owner)

    def atoms_of(self, pid: str) -> frozenset[str]:
        return self._atoms[pid]

    def owner_of(self, atom: str) -> str:
        return self._owner[atom]

    def pid_index(self, pid: str) -> int:
        return self.processes.index(pid)

    def local_view(self, pid: str, event: Event) -> Event:
        return event.restrict(self._atoms[pid])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SystemAlphabet)
            and self.processes == other.processes
            and self._atoms == other._atoms
        )

    def __repr__(self) -> str:
        parts = ";".join(
            f"{pid}:{','.join(sorted(self._atoms[pid]))}" for pid in self.processes
        )
        return f"SystemAlphabet({parts})"


def parse_alphabet(text: str) -> SystemAlphabet:
    """Parse 'A:a1,a2;B:b;C:c' into a SystemAlphabet."""
    assignment = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise AlphabetError(f"expected 'pid:atom,...' in {chunk!r}")
        pid, names = chunk.split(":", 1)
        atom_names = [n.strip() for n in names.split(",") if n.strip()]
        assignment.append((pid.strip(), atom_names))
    return SystemAlphabet(assignment)


def parse_trace(text: str) -> Trace:
    """Parse a trace file: one line per step, comma-separated true atoms.

    '#' starts a comment, blank lines are skipped, '-' is the empty event.
    """
    steps: list[frozenset[str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "-":
            steps.append(frozenset())
            continue
        names = [n.strip() for n in line.split(",") if n.strip()]
        for name in names:
            if not _IDENT_RE.match(name):
                raise AlphabetError(f"bad atom name {name!r} on line {lineno}")
        steps.append(frozenset(names))
    return Trace(tuple(Event(s) for s in steps))


def format_trace(trace: Trace) -> str:
    lines = []
    for event in trace:
        lines.append(",".join(sorted(event.true_atoms)) if event.true_atoms else "-")
    return "\n".join(lines) + ("\n" if lines else "")
