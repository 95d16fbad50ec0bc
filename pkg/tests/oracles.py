"""Independent reference semantics used as test oracles.

Everything here is deliberately written from the definitions, without
reusing the package's evaluators, progression, or tableau:

- bounded_eval: LTL on a finite trace with weak-next-false past the end.
- periodic_eval: LTL on an ultimately periodic word u v^w by direct
  fixpoint-free evaluation over the finitely many distinct positions.
- lasso_satisfiable: bounded model search over all u v^w words.
- kleene_ref / forced_by_enumeration: brute-force three-valued checks for
  the inference rules.
"""

from __future__ import annotations

from itertools import product

from declmon.formula import (
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
    atoms,
)
from declmon.semantics import BOT, TOP, UNKNOWN, TruthValue3


def bounded_eval(f: Formula, events: list[frozenset[str]], i: int = 0) -> bool:
    """Finite-trace LTL: X is false at the last position, F/G/U quantify
    inside the trace only."""
    n = len(events)
    if isinstance(f, TrueConst):
        return True
    if isinstance(f, Atom):
        return f.name in events[i]
    if isinstance(f, Not):
        return not bounded_eval(f.child, events, i)
    if isinstance(f, And):
        return all(bounded_eval(c, events, i) for c in f.children)
    if isinstance(f, Or):
        return any(bounded_eval(c, events, i) for c in f.children)
    if isinstance(f, Next):
        return i + 1 < n and bounded_eval(f.child, events, i + 1)
    if isinstance(f, Finally):
        return any(bounded_eval(f.child, events, j) for j in range(i, n))
    if isinstance(f, Globally):
        return all(bounded_eval(f.child, events, j) for j in range(i, n))
    if isinstance(f, Until):
        for k in range(i, n):
            if bounded_eval(f.right, events, k):
                return all(bounded_eval(f.left, events, l) for l in range(i, k))
        return False
    raise TypeError(f)


class PeriodicWord:
    """u v^w with positions 0..len(u)+len(v)-1; the successor of the last
    position wraps to len(u)."""

    def __init__(self, prefix: list[frozenset[str]], loop: list[frozenset[str]]):
        assert loop, "the loop part must be nonempty"
        self.events = list(prefix) + list(loop)
        self.loop_start = len(prefix)
        self.n = len(self.events)

    def succ(self, i: int) -> int:
        return i + 1 if i + 1 < self.n else self.loop_start

    def future(self, i: int) -> range | list[int]:
        if i >= self.loop_start:
            return range(self.loop_start, self.n)
        return range(i, self.n)


def periodic_eval(f: Formula, word: PeriodicWord, i: int = 0, memo=None) -> bool:
    if memo is None:
        memo = {}
    key = (f, i)
    if key in memo:
        return memo[key]
    if isinstance(f, TrueConst):
        out = True
    elif isinstance(f, Atom):
        out = f.name in word.events[i]
    elif isinstance(f, Not):
        out = not periodic_eval(f.child, word, i, memo)
    elif isinstance(f, And):
        out = all(periodic_eval(c, word, i, memo) for c in f.children)
    elif isinstance(f, Or):
        out = any(periodic_eval(c, word, i, memo) for c in f.children)
    elif isinstance(f, Next):
        out = periodic_eval(f.child, word, word.succ(i), memo)
    elif isinstance(f, Finally):
        out = any(periodic_eval(f.child, word, j, memo) for j in word.future(i))
    elif isinstance(f, Globally):
        out = all(periodic_eval(f.child, word, j, memo) for j in word.future(i))
    elif isinstance(f, Until):
        # walk forward at most one full wrap; positions repeat after that
        out = False
        pos, seen = i, set()
        while pos not in seen:
            seen.add(pos)
            if periodic_eval(f.right, word, pos, memo):
                out = True
                break
            if not periodic_eval(f.left, word, pos, memo):
                out = False
                break
            pos = word.succ(pos)
    else:
        raise TypeError(f)
    memo[key] = out
    return out


def all_events(names: list[str]) -> list[frozenset[str]]:
    out = []
    for bits in product((False, True), repeat=len(names)):
        out.append(frozenset(n for n, b in zip(names, bits) if b))
    return out


def lasso_satisfiable(f: Formula, max_prefix: int = 3, max_loop: int = 3) -> bool:
    """Model search over every ultimately periodic word within the bounds."""
    names = sorted(atoms(f))
    events = all_events(names)
    for u_len in range(max_prefix + 1):
        for v_len in range(1, max_loop + 1):
            for combo in product(events, repeat=u_len + v_len):
                word = PeriodicWord(list(combo[:u_len]), list(combo[u_len:]))
                if periodic_eval(f, word, 0):
                    return True
    return False


def lasso_ltl3(f: Formula, events: list[frozenset[str]],
               max_prefix: int = 3, max_loop: int = 3) -> TruthValue3:
    """LTL3 by brute force: does some/every lasso extension satisfy f?"""
    sat_ext = lasso_satisfiable_after(f, events, True, max_prefix, max_loop)
    unsat_ext = lasso_satisfiable_after(f, events, False, max_prefix, max_loop)
    if not unsat_ext:
        return TOP
    if not sat_ext:
        return BOT
    return UNKNOWN


def lasso_satisfiable_after(
    f: Formula,
    prefix_events: list[frozenset[str]],
    target: bool,
    max_prefix: int,
    max_loop: int,
) -> bool:
    """Is there a lasso extension of the given prefix on which f evaluates
    to `target` at position 0?"""
    names = sorted(atoms(f))
    events = all_events(names)
    base = [frozenset(e & frozenset(names)) for e in prefix_events]
    for u_len in range(max_prefix + 1):
        for v_len in range(1, max_loop + 1):
            for combo in product(events, repeat=u_len + v_len):
                word = PeriodicWord(base + list(combo[:u_len]), list(combo[u_len:]))
                if periodic_eval(f, word, 0) == target:
                    return True
    return False


def kleene_ref(
    f: Formula, assignment: dict[str, bool], obs: frozenset[str]
) -> TruthValue3:
    """Three-valued value of f when only the observed atoms are visible."""
    if isinstance(f, TrueConst):
        return TOP
    if isinstance(f, Atom):
        if f.name not in obs:
            return UNKNOWN
        return TOP if assignment[f.name] else BOT
    if isinstance(f, Not):
        v = kleene_ref(f.child, assignment, obs)
        return {TOP: BOT, BOT: TOP, UNKNOWN: UNKNOWN}[v]
    if isinstance(f, (And, Or)):
        vals = [kleene_ref(c, assignment, obs) for c in f.children]
        if isinstance(f, And):
            if BOT in vals:
                return BOT
            return UNKNOWN if UNKNOWN in vals else TOP
        if TOP in vals:
            return TOP
        return UNKNOWN if UNKNOWN in vals else BOT
    raise TypeError(f)


def assignments_over(names: list[str]):
    for bits in product((False, True), repeat=len(names)):
        yield dict(zip(names, bits))
