"""Formula progression: rewriting a formula against one observed event.

`progress` consumes a fully-known event. `progress_partial` consumes a
partially-known step: atoms with no known value are replaced by time-stamped
rigid propositions (``name@step``) so the residual stays exact and can be
refined later as facts arrive. Stamped names use '@', which the concrete
grammar cannot produce, so they never collide with real atoms.
"""

from __future__ import annotations

from .formula import (
    FALSE,
    TRUE,
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
    conj,
    disj,
    fold,
)
from .semantics import TruthValue3
from .system import Event


def progress(f: Formula, event: Event) -> Formula:
    """Residual obligation after consuming `event`, constant-folded."""
    return fold(_step(f, lambda name: name in event))


def progress_partial(
    f: Formula, known: dict[str, TruthValue3], step: int
) -> Formula:
    """Residual after a step where only `known` atom values are definite."""

    def lookup(name: str):
        if "@" in name:
            # an unresolved unknown from an earlier step: rigid, pass through
            return Atom(name)
        v = known.get(name)
        if v is None or v is TruthValue3.UNKNOWN:
            return Atom(stamp(name, step))
        return v is TruthValue3.TOP

    return fold(_step(f, lookup))


def _step(f: Formula, lookup) -> Formula:
    """One unfolded rewrite step; lookup gives bool or a replacement Formula."""
    if isinstance(f, TrueConst):
        return TRUE
    if isinstance(f, Atom):
        got = lookup(f.name)
        if isinstance(got, Formula):
            return got
        return TRUE if got else FALSE
    if isinstance(f, Not):
        return Not(_step(f.child, lookup))
    if isinstance(f, And):
        return conj(_step(c, lookup) for c in f.children)
    if isinstance(f, Or):
        return disj(_step(c, lookup) for c in f.children)
    if isinstance(f, Next):
        return f.child
    if isinstance(f, Globally):
        return conj([_step(f.child, lookup), f])
    if isinstance(f, Finally):
        return disj([_step(f.child, lookup), f])
    if isinstance(f, Until):
        return disj(
            [_step(f.right, lookup), conj([_step(f.left, lookup), f])]
        )
    raise TypeError(f"unknown formula node: {f!r}")


def stamp(name: str, step: int) -> str:
    return f"{name}@{step}"


def unstamp(name: str) -> tuple[str, int] | None:
    """(atom, step) for a stamped name, None for ordinary atoms."""
    if "@" not in name:
        return None
    base, _, s = name.rpartition("@")
    return base, int(s)


def stamped_atoms(f: Formula) -> set[tuple[str, int]]:
    from .formula import atoms

    out = set()
    for name in atoms(f):
        key = unstamp(name)
        if key is not None:
            out.add(key)
    return out


def resolve_stamped(f: Formula, facts: dict[tuple[str, int], bool]) -> Formula:
    """Substitute known values into stamped propositions and fold."""
    if not facts:
        return f
    mapping = {
        stamp(name, step): (TRUE if val else FALSE)
        for (name, step), val in facts.items()
    }
    from .formula import substitute_atoms

    return fold(substitute_atoms(f, mapping))


def canonical_key(f: Formula) -> Formula:
    """Rename stamped propositions to _v0, _v1, ... in first-occurrence order.

    The renaming is injective, so satisfiability is preserved; residuals that
    recur across rounds up to time shifts then share one cache entry.
    """
    from .formula import atoms_in_order, substitute_atoms

    mapping: dict[str, Formula] = {}
    for name in atoms_in_order(f):
        if "@" in name:
            mapping[name] = Atom(f"_v{len(mapping)}")
    if not mapping:
        return f
    return substitute_atoms(f, mapping)
