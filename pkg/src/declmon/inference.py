"""Decentralized LTL inference engine.

A receiver that knows the sender's observation power can extract definite
atom values from a reported (formula, value) pair. The engine enumerates
the assignments of the sender's observed atoms that are consistent with the
reported value and deduces every atom that takes the same value in all of
them; the named rules R1-R12 are syntactic instances of this check and are
kept as match targets for tests, tables, and the debug CLI.

Propositional premises use exact-value consistency (the sender's Kleene
evaluation equals the reported value). The temporal premises of R11/R12
unfold G/F over steps 0..n and constrain each step's body semantically
(its Kleene view may be the target value or still unknown), so e.g.
(G(a|b))=T pins no single atom.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .formula import (
    And,
    Atom,
    Finally,
    Formula,
    Globally,
    Or,
    atoms,
    is_literal,
    is_temporal_free,
)
from .semantics import BOT, TOP, UNKNOWN, TruthValue3, eval_prop


class InconsistentEvaluationError(ValueError):
    """The reported value is impossible under the sender's observation power:
    the message (or the obs-power model) is corrupt."""


@dataclass(frozen=True)
class Deduction:
    atom: str
    time: int
    value: TruthValue3

    def __str__(self) -> str:
        return f"{self.atom}@{self.time}={self.value}"


@dataclass(frozen=True)
class ObservationSet:
    """The (atom, step) facts whose definite values a process knows."""

    owner: str
    known: frozenset[tuple[str, int]]

    def atoms_at(self, step: int) -> frozenset[str]:
        return frozenset(a for a, s in self.known if s == step)


@dataclass(frozen=True)
class EvaluatedFormula:
    formula: Formula
    value: TruthValue3
    evaluator: str
    time: int


_forced_cache: dict[tuple, dict[str, TruthValue3]] = {}


def _forced(
    f: Formula, allowed: frozenset[TruthValue3], obs: frozenset[str]
) -> dict[str, TruthValue3]:
    """Atoms among obs forced to one value by 'Kleene value of f is in allowed'."""
    relevant = tuple(sorted(atoms(f) & obs))
    key = (f, allowed, relevant)
    hit = _forced_cache.get(key)
    if hit is not None:
        return hit
    consistent: list[tuple[TruthValue3, ...]] = []
    for bits in product((TOP, BOT), repeat=len(relevant)):
        view = dict(zip(relevant, bits))
        if eval_prop(f, lambda a: view.get(a, UNKNOWN)) in allowed:
            consistent.append(bits)
    if not consistent:
        raise InconsistentEvaluationError(
            f"{f} cannot evaluate to {'/'.join(str(v) for v in allowed)} "
            f"under observations {set(relevant)}"
        )
    forced: dict[str, TruthValue3] = {}
    for i, name in enumerate(relevant):
        vals = {bits[i] for bits in consistent}
        if len(vals) == 1:
            forced[name] = next(iter(vals))
    _forced_cache[key] = forced
    return forced


def deduce(ev: EvaluatedFormula, sender_obs: ObservationSet) -> set[Deduction]:
    """Definite atom values a receiver can infer from one evaluated formula."""
    f = ev.formula
    if isinstance(f, (Finally, Globally)):
        return deduce_temporal(ev, sender_obs, ev.time)
    if not is_temporal_free(f):
        raise ValueError(f"no inference rule for temporal shape: {f}")
    obs = sender_obs.atoms_at(ev.time)
    forced = _forced(f, frozenset((ev.value,)), obs)
    return {Deduction(a, ev.time, v) for a, v in forced.items()}


# Per-step constraint on the body of a G/F formula, by reported value.
_TEMPORAL_STEP_VALUES: dict[tuple[type, TruthValue3], frozenset[TruthValue3]] = {
    (Globally, TOP): frozenset((TOP, UNKNOWN)),
    (Globally, UNKNOWN): frozenset((TOP, UNKNOWN)),
    (Finally, BOT): frozenset((BOT, UNKNOWN)),
    (Finally, UNKNOWN): frozenset((BOT, UNKNOWN)),
}


def deduce_temporal(
    ev: EvaluatedFormula, sender_obs: ObservationSet, n: int
) -> set[Deduction]:
    """Unfold (G phi)=T / (F phi)=F over steps 0..n and deduce per step.

    (G phi)=F and (F phi)=T name no step, so nothing is deducible.
    """
    f = ev.formula
    if not isinstance(f, (Finally, Globally)):
        raise ValueError(f"not a temporal premise: {f}")
    body = f.child
    if not is_temporal_free(body):
        raise ValueError(f"nested temporal operators are not supported: {f}")
    allowed = _TEMPORAL_STEP_VALUES.get((type(f), ev.value))
    if allowed is None:
        return set()
    out: set[Deduction] = set()
    for t in range(n + 1):
        obs = sender_obs.atoms_at(t)
        if not obs:
            continue
        for a, v in _forced(body, allowed, obs).items():
            out.add(Deduction(a, t, v))
    return out


def deduction_set(
    f: Formula, v: TruthValue3, sender_obs: ObservationSet, time: int
) -> frozenset[tuple[str, int]]:
    """The (atom, step) keys deducible from (f, v) — Algorithm 1's DeductionSet."""
    ev = EvaluatedFormula(f, v, sender_obs.owner, time)
    if isinstance(f, Atom):
        return (
            frozenset(((f.name, time),))
            if v.is_definite and (f.name, time) in sender_obs.known
            else frozenset()
        )
    try:
        ds = deduce(ev, sender_obs)
    except InconsistentEvaluationError:
        raise
    return frozenset((d.atom, d.time) for d in ds)


def matches_rule_shape(f: Formula) -> bool:
    """Shapes the inference rules can consume (what truth tables retain):
    temporal-free compounds and F/G over a temporal-free body."""
    if isinstance(f, (And, Or)) and is_temporal_free(f):
        return True
    if isinstance(f, (Finally, Globally)) and is_temporal_free(f.child):
        return True
    return False


def _all_literals(children: tuple[Formula, ...]) -> bool:
    return all(is_literal(c) for c in children)


def _conj_of_literals(f: Formula) -> bool:
    return isinstance(f, And) and _all_literals(f.children)


def _disj_of_literals(f: Formula) -> bool:
    return isinstance(f, Or) and _all_literals(f.children)


def _lit_plus_pair(f: Formula, inner: type) -> tuple[Formula, Formula] | None:
    """Match a ∘ (b ∘' c): two children, one literal, one 2-literal inner."""
    if not isinstance(f, (And, Or)) or len(f.children) != 2:
        return None
    for lit, rest in (f.children, f.children[::-1]):
        if (
            is_literal(lit)
            and isinstance(rest, inner)
            and len(rest.children) == 2
            and _all_literals(rest.children)
        ):
            return lit, rest
    return None


def match_rule(
    f: Formula, v: TruthValue3, sender_obs: ObservationSet, time: int = 0
) -> str | None:
    """Lowest-numbered rule R1-R12 whose premise matches (f, v, obs), if any."""
    obs = sender_obs.atoms_at(time)

    def observed(g: Formula) -> frozenset[str]:
        return atoms(g) & obs

    if _conj_of_literals(f) and v is TOP:
        return "R1"
    if _disj_of_literals(f) and v is BOT:
        return "R2"
    if _conj_of_literals(f) and v is UNKNOWN and observed(f):
        return "R3"
    if _disj_of_literals(f) and v is UNKNOWN and observed(f):
        return "R4"
    or_pair = _lit_plus_pair(f, And) if isinstance(f, Or) else None
    if or_pair is not None:
        lit, rest = or_pair
        if observed(lit) and observed(rest):
            if v is BOT:
                return "R5"
            if v is UNKNOWN:
                return "R6"
    and_pair = _lit_plus_pair(f, Or) if isinstance(f, And) else None
    if and_pair is not None:
        lit, rest = and_pair
        if observed(lit) and observed(rest):
            if v is UNKNOWN:
                return "R7"
            if v is TOP:
                return "R8"
    if (
        isinstance(f, Or)
        and v is BOT
        and all(
            _conj_of_literals(c) and len(atoms(c)) > 1 and len(observed(c)) == 1
            for c in f.children
        )
    ):
        return "R9"
    if (
        isinstance(f, And)
        and v is TOP
        and all(
            _disj_of_literals(c) and len(atoms(c)) > 1 and len(observed(c)) == 1
            for c in f.children
        )
    ):
        return "R10"
    if isinstance(f, Globally) and is_temporal_free(f.child) and v is TOP:
        return "R11"
    if isinstance(f, Finally) and is_temporal_free(f.child) and v is BOT:
        return "R12"
    return None


def clear_cache() -> None:
    _forced_cache.clear()
