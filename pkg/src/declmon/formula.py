"""LTL formula ASTs and structural utilities.

Formulas are immutable, hashable values compared structurally. And/Or are
n-ary and always kept flattened (a child of an And is never itself an And).
There is no false constant in the grammar; ``FALSE`` is ``Not(TRUE)`` and the
constant folder treats it as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    children: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    children: tuple[Formula, ...]


@dataclass(frozen=True)
class Next(Formula):
    child: Formula


@dataclass(frozen=True)
class Finally(Formula):
    child: Formula


@dataclass(frozen=True)
class Globally(Formula):
    child: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


TRUE = TrueConst()
FALSE = Not(TRUE)


def conj(children: Iterable[Formula]) -> Formula:
    """N-ary conjunction, flattened; empty -> TRUE, singleton -> the child."""
    flat: list[Formula] = []
    for c in children:
        if isinstance(c, And):
            flat.extend(c.children)
        else:
            flat.append(c)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(children: Iterable[Formula]) -> Formula:
    """N-ary disjunction, flattened; empty -> FALSE, singleton -> the child."""
    flat: list[Formula] = []
    for c in children:
        if isinstance(c, Or):
            flat.extend(c.children)
        else:
            flat.append(c)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def implies(left: Formula, right: Formula) -> Formula:
    """``left -> right`` desugared to ``!left | right``."""
    return disj([Not(left), right])


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over the AST, including f itself."""
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.child)
    elif isinstance(f, (And, Or)):
        for c in f.children:
            yield from subformulas(c)
    elif isinstance(f, (Next, Finally, Globally)):
        yield from subformulas(f.child)
    elif isinstance(f, Until):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def atoms(f: Formula) -> frozenset[str]:
    """Atom names occurring in f, positive or negated."""
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def atoms_in_order(f: Formula) -> list[str]:
    """Atom names in first-occurrence (pre-order) order."""
    seen: list[str] = []
    for g in subformulas(f):
        if isinstance(g, Atom) and g.name not in seen:
            seen.append(g.name)
    return seen


def logical_ops(f: Formula) -> frozenset[str]:
    """The subset of {'&', '|', '!'} used by f (the spec's lop)."""
    ops = set()
    for g in subformulas(f):
        if isinstance(g, And):
            ops.add("&")
        elif isinstance(g, Or):
            ops.add("|")
        elif isinstance(g, Not) and g != FALSE:
            ops.add("!")
    return frozenset(ops)


def temporal_ops(f: Formula) -> frozenset[str]:
    """The subset of {'X', 'F', 'G', 'U'} used by f (the spec's top)."""
    ops = set()
    for g in subformulas(f):
        if isinstance(g, Next):
            ops.add("X")
        elif isinstance(g, Finally):
            ops.add("F")
        elif isinstance(g, Globally):
            ops.add("G")
        elif isinstance(g, Until):
            ops.add("U")
    return frozenset(ops)


def temporal_size(f: Formula) -> int:
    """Formula size as temporal-operator count (operator entailment)."""
    return sum(
        1 for g in subformulas(f) if isinstance(g, (Next, Finally, Globally, Until))
    )


def is_temporal_free(f: Formula) -> bool:
    return not any(
        isinstance(g, (Next, Finally, Globally, Until)) for g in subformulas(f)
    )


def is_literal(f: Formula) -> bool:
    """An atom or a negated atom (constants are not literals)."""
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.child, Atom))


def symbol_count(f: Formula) -> int:
    """Operator and atom/constant occurrences in the serialized form.

    N-ary connectives contribute arity-1 (their printed operator count).
    """
    if isinstance(f, (TrueConst, Atom)):
        return 1
    if isinstance(f, Not):
        return 1 + symbol_count(f.child)
    if isinstance(f, (And, Or)):
        return len(f.children) - 1 + sum(symbol_count(c) for c in f.children)
    if isinstance(f, (Next, Finally, Globally)):
        return 1 + symbol_count(f.child)
    if isinstance(f, Until):
        return 1 + symbol_count(f.left) + symbol_count(f.right)
    raise TypeError(f"unknown formula node: {f!r}")


def nnf(f: Formula) -> Formula:
    """Negation normal form: negations pushed down to atoms.

    ~(a U b) is encoded with the grammar's own connectives as
    (~b U (~a & ~b)) | G ~b.
    """
    if isinstance(f, (TrueConst, Atom)):
        return f
    if isinstance(f, And):
        return conj(nnf(c) for c in f.children)
    if isinstance(f, Or):
        return disj(nnf(c) for c in f.children)
    if isinstance(f, Next):
        return Next(nnf(f.child))
    if isinstance(f, Finally):
        return Finally(nnf(f.child))
    if isinstance(f, Globally):
        return Globally(nnf(f.child))
    if isinstance(f, Until):
        return Until(nnf(f.left), nnf(f.right))
    if isinstance(f, Not):
        g = f.child
        if isinstance(g, TrueConst):
            return FALSE
        if isinstance(g, Atom):
            return f
        if isinstance(g, Not):
            return nnf(g.child)
        if isinstance(g, And):
            return disj(nnf(Not(c)) for c in g.children)
        if isinstance(g, Or):
            return conj(nnf(Not(c)) for c in g.children)
        if isinstance(g, Next):
            return Next(nnf(Not(g.child)))
        if isinstance(g, Finally):
            return Globally(nnf(Not(g.child)))
        if isinstance(g, Globally):
            return Finally(nnf(Not(g.child)))
        if isinstance(g, Until):
            na = nnf(Not(g.left))
            nb = nnf(Not(g.right))
            return disj([Until(nb, conj([na, nb])), Globally(nb)])
    raise TypeError(f"unknown formula node: {f!r}")


def fold(f: Formula) -> Formula:
    """Canonical constant folding, applied bottom-up to a fixpoint.

    Rules: drop true in And / false in Or, short-circuit false in And /
    true in Or, deduplicate identical siblings (order-preserving), unwrap
    singletons, !! elimination, !true/!false, and constant absorption
    under X/F/G.
    """
    if isinstance(f, (TrueConst, Atom)):
        return f
    if isinstance(f, Not):
        c = fold(f.child)
        if isinstance(c, TrueConst):
            return FALSE
        if c == FALSE:
            return TRUE
        if isinstance(c, Not):
            return c.child
        return Not(c)
    if isinstance(f, (And, Or)):
        is_and = isinstance(f, And)
        absorber = FALSE if is_and else TRUE
        neutral = TRUE if is_and else FALSE
        out: list[Formula] = []
        for raw in f.children:
            c = fold(raw)
            kids = c.children if isinstance(c, And if is_and else Or) else (c,)
            for k in kids:
                if k == absorber:
                    return absorber
                if k == neutral or k in out:
                    continue
                out.append(k)
        if not out:
            return neutral
        if len(out) == 1:
            return out[0]
        return And(tuple(out)) if is_and else Or(tuple(out))
    if isinstance(f, (Next, Finally, Globally)):
        c = fold(f.child)
        if isinstance(c, TrueConst) or c == FALSE:
            return c
        return type(f)(c)
    if isinstance(f, Until):
        return Until(fold(f.left), fold(f.right))
    raise TypeError(f"unknown formula node: {f!r}")


def substitute_atoms(f: Formula, mapping: dict[str, Formula]) -> Formula:
    """Replace atoms by name; the result is not folded."""
    if isinstance(f, Atom):
        return mapping.get(f.name, f)
    if isinstance(f, TrueConst):
        return f
    if isinstance(f, Not):
        return Not(substitute_atoms(f.child, mapping))
    if isinstance(f, And):
        return conj(substitute_atoms(c, mapping) for c in f.children)
    if isinstance(f, Or):
        return disj(substitute_atoms(c, mapping) for c in f.children)
    if isinstance(f, (Next, Finally, Globally)):
        return type(f)(substitute_atoms(f.child, mapping))
    if isinstance(f, Until):
        return Until(
            substitute_atoms(f.left, mapping), substitute_atoms(f.right, mapping)
        )
    raise TypeError(f"unknown formula node: {f!r}")


# Precedence levels for printing: higher binds tighter.
_PREC_IMPL = 0  # reserved by the grammar; never produced by the AST
_PREC_OR = 1
_PREC_AND = 2
_PREC_UNTIL = 3
_PREC_UNARY = 4


def _fmt(f: Formula, parent_prec: int) -> str:
    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "!" + _fmt(f.child, _PREC_UNARY)
    if isinstance(f, Next):
        return "X " + _fmt(f.child, _PREC_UNARY)
    if isinstance(f, Finally):
        return "F " + _fmt(f.child, _PREC_UNARY)
    if isinstance(f, Globally):
        return "G " + _fmt(f.child, _PREC_UNARY)
    if isinstance(f, Until):
        # right-associative: the left operand needs parens when it is a U
        s = _fmt(f.left, _PREC_UNTIL + 1) + " U " + _fmt(f.right, _PREC_UNTIL)
        return f"({s})" if parent_prec > _PREC_UNTIL else s
    if isinstance(f, And):
        s = " & ".join(_fmt(c, _PREC_AND + 1) for c in f.children)
        return f"({s})" if parent_prec > _PREC_AND else s
    if isinstance(f, Or):
        s = " | ".join(_fmt(c, _PREC_OR + 1) for c in f.children)
        return f"({s})" if parent_prec > _PREC_OR else s
    raise TypeError(f"unknown formula node: {f!r}")


def format_formula(f: Formula) -> str:
    """Render f in the concrete grammar; parse(format_formula(f)) == f."""
    return _fmt(f, _PREC_IMPL)
