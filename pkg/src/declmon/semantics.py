"""Three-valued truth domain and strong-Kleene evaluation."""

from __future__ import annotations

from enum import Enum
from typing import Callable, Iterable

from .formula import (
    And,
    Atom,
    Finally,
    Formula,
    Globally,
    Next,
    Not,
    Or,
    TrueConst,
    Until,
)


class TruthValue3(Enum):
    TOP = "T"
    BOT = "F"
    UNKNOWN = "?"

    @property
    def is_definite(self) -> bool:
        return self is not TruthValue3.UNKNOWN

    def __str__(self) -> str:
        return self.value

    @staticmethod
    def from_bool(b: bool) -> "TruthValue3":
        return TruthValue3.TOP if b else TruthValue3.BOT


TOP = TruthValue3.TOP
BOT = TruthValue3.BOT
UNKNOWN = TruthValue3.UNKNOWN


def t3_not(v: TruthValue3) -> TruthValue3:
    if v is TOP:
        return BOT
    if v is BOT:
        return TOP
    return UNKNOWN


def t3_and(values: Iterable[TruthValue3]) -> TruthValue3:
    out = TOP
    for v in values:
        if v is BOT:
            return BOT
        if v is UNKNOWN:
            out = UNKNOWN
    return out


def t3_or(values: Iterable[TruthValue3]) -> TruthValue3:
    out = BOT
    for v in values:
        if v is TOP:
            return TOP
        if v is UNKNOWN:
            out = UNKNOWN
    return out


class UnvaluedTemporalError(ValueError):
    """eval3 reached a temporal subformula with no entry in the valuation."""


class PartialValuation:
    """Map (atom name, time step) -> definite truth value.

    Absent entries read as Unknown; Unknown is never stored. Temporal
    subformulas may be supplied pre-valued (structural-equality lookup) so
    eval3 can treat them as opaque entries.
    """

    def __init__(self) -> None:
        self._atoms: dict[tuple[str, int], TruthValue3] = {}
        self._formulas: dict[tuple[Formula, int], TruthValue3] = {}

    def value_of(self, atom: str, t: int) -> TruthValue3:
        return self._atoms.get((atom, t), UNKNOWN)

    def formula_value(self, f: Formula, t: int) -> TruthValue3 | None:
        return self._formulas.get((f, t))

    def set_atom(self, atom: str, t: int, value: TruthValue3) -> None:
        if value is UNKNOWN:
            return
        self._atoms[(atom, t)] = value

    def set_formula(self, f: Formula, t: int, value: TruthValue3) -> None:
        if value is UNKNOWN:
            return
        self._formulas[(f, t)] = value

    def known_atoms(self, t: int) -> dict[str, TruthValue3]:
        return {a: v for (a, s), v in self._atoms.items() if s == t}

    def items(self):
        return self._atoms.items()

    def __contains__(self, key: tuple[str, int]) -> bool:
        return key in self._atoms

    def __len__(self) -> int:
        return len(self._atoms)


def eval3(f: Formula, v: PartialValuation, t: int) -> TruthValue3:
    """Strong-Kleene evaluation of f at step t under a partial valuation.

    Temporal subformulas must be pre-valued in v, otherwise this raises:
    nothing here unfolds time.
    """
    if isinstance(f, TrueConst):
        return TOP
    if isinstance(f, Atom):
        return v.value_of(f.name, t)
    if isinstance(f, (Next, Finally, Globally, Until)):
        val = v.formula_value(f, t)
        if val is None:
            raise UnvaluedTemporalError(
                f"no entry for temporal subformula {f} at step {t}"
            )
        return val
    pre = v.formula_value(f, t)
    if pre is not None:
        return pre
    if isinstance(f, Not):
        return t3_not(eval3(f.child, v, t))
    if isinstance(f, And):
        return t3_and(eval3(c, v, t) for c in f.children)
    if isinstance(f, Or):
        return t3_or(eval3(c, v, t) for c in f.children)
    raise TypeError(f"unknown formula node: {f!r}")


def eval_prop(f: Formula, lookup: Callable[[str], TruthValue3]) -> TruthValue3:
    """Kleene evaluation of a temporal-free formula against an atom lookup."""
    if isinstance(f, TrueConst):
        return TOP
    if isinstance(f, Atom):
        return lookup(f.name)
    if isinstance(f, Not):
        return t3_not(eval_prop(f.child, lookup))
    if isinstance(f, And):
        return t3_and(eval_prop(c, lookup) for c in f.children)
    if isinstance(f, Or):
        return t3_or(eval_prop(c, lookup) for c in f.children)
    raise ValueError(f"formula is not temporal-free: {f}")
