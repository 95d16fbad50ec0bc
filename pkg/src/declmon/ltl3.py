"""Centralized LTL3 evaluation: progression residuals judged by the tableau.

A finite prefix evaluates to TOP when the residual obligation is valid
(its negation has no successful tableau branch), to BOT when the residual
itself is unsatisfiable, and to ? otherwise.
"""

from __future__ import annotations

from .formula import Formula, Not, nnf
from .progression import canonical_key, progress
from .semantics import BOT, TOP, UNKNOWN, TruthValue3
from .system import Trace
from .tableau import build, is_satisfiable

_sat_cache: dict[Formula, bool] = {}


def satisfiable(f: Formula) -> bool:
    """Tableau satisfiability, memoized on the canonicalized formula."""
    key = canonical_key(f)
    hit = _sat_cache.get(key)
    if hit is None:
        hit = is_satisfiable(build(nnf(key)))
        _sat_cache[key] = hit
    return hit


def residual_verdict(residual: Formula) -> TruthValue3:
    """Three-valued verdict for a residual obligation (valid/unsat/open)."""
    if not satisfiable(Not(residual)):
        return TOP
    if not satisfiable(residual):
        return BOT
    return UNKNOWN


def ltl3_eval(trace: Trace, f: Formula) -> TruthValue3:
    """LTL3 value of f on a finite trace: TOP iff every infinite extension
    satisfies f, BOT iff none does, ? otherwise."""
    residual = f
    for event in trace:
        residual = progress(residual, event)
    return residual_verdict(residual)


def clear_cache() -> None:
    _sat_cache.clear()
