import random

from declmon.formula import FALSE, TRUE, atoms
from declmon.parser import parse
from declmon.progression import (
    canonical_key,
    progress,
    progress_partial,
    resolve_stamped,
    stamped_atoms,
)
from declmon.semantics import BOT, TOP, UNKNOWN
from declmon.system import Event
from declmon.bench import random_formula

from oracles import PeriodicWord, all_events, bounded_eval, periodic_eval


class TestProgress:
    def test_globally_holds(self):
        assert progress(parse("G p"), Event.of("p")) == parse("G p")

    def test_finally_met_now(self):
        assert progress(parse("F p"), Event.of("p")) == TRUE

    def test_next_shift(self):
        assert progress(parse("p & X q"), Event.of("p")) == parse("q")

    def test_globally_violated(self):
        assert progress(parse("G p"), Event.of()) == FALSE

    def test_until_rewrites(self):
        f = parse("p U q")
        assert progress(f, Event.of("p")) == f
        assert progress(f, Event.of("q")) == TRUE
        assert progress(f, Event.of()) == FALSE

    def test_propositional_folds_to_constant(self):
        """On temporal-free formulas, progression is propositional truth."""
        rng = random.Random("prop-progress")
        names = ["a", "b", "c"]
        events = all_events(names)
        for _ in range(200):
            f = _prop(rng, names)
            for e in events:
                got = progress(f, Event(e))
                assert got in (TRUE, FALSE)
                assert (got == TRUE) == bounded_eval(f, [e] * 8)

    def test_exactness_on_periodic_words(self):
        """w |= f  iff  w[1:] |= progress(f, w[0]) — the defining property."""
        rng = random.Random("exact")
        names = ["a", "b"]
        events = all_events(names)
        for i in range(120):
            f = random_formula(1 + i % 3, names, seed=f"exact:{i}")
            for _ in range(20):
                u = [rng.choice(events) for _ in range(rng.randint(1, 3))]
                v = [rng.choice(events) for _ in range(rng.randint(1, 3))]
                before = periodic_eval(f, PeriodicWord(u, v))
                g = progress(f, Event(u[0]))
                after = periodic_eval(g, PeriodicWord(u[1:], v))
                assert before == after, f"{f} on {u}+{v}^w -> {g}"


class TestPartialProgress:
    def test_unknowns_become_stamped(self):
        f = parse("G(p | q)")
        r = progress_partial(f, {"p": BOT}, 0)
        assert stamped_atoms(r) == {("q", 0)}

    def test_known_values_substitute(self):
        f = parse("G(p | q)")
        assert progress_partial(f, {"p": TOP, "q": BOT}, 0) == parse("G(p | q)")

    def test_stamped_survive_later_steps(self):
        f = parse("G p")
        r = progress_partial(f, {}, 0)
        r = progress_partial(r, {"p": TOP}, 1)
        assert stamped_atoms(r) == {("p", 0)}

    def test_resolution_folds(self):
        f = parse("G p")
        r = progress_partial(f, {}, 0)
        assert resolve_stamped(r, {("p", 0): True}) == parse("G p")
        assert resolve_stamped(r, {("p", 0): False}) == FALSE

    def test_agrees_with_full_progress_when_all_known(self):
        rng = random.Random("partial-full")
        names = ["a", "b"]
        events = all_events(names)
        for i in range(100):
            f = random_formula(1 + i % 3, names, seed=f"pf:{i}")
            e = rng.choice(events)
            known = {n: (TOP if n in e else BOT) for n in names}
            assert progress_partial(f, known, 0) == progress(f, Event(e))

    def test_later_resolution_matches_upfront_knowledge(self):
        """Progressing blind and substituting afterwards equals progressing
        with the values known upfront."""
        rng = random.Random("resolve")
        names = ["a", "b"]
        events = all_events(names)
        for i in range(100):
            f = random_formula(1 + i % 3, names, seed=f"res:{i}")
            e = rng.choice(events)
            blind = progress_partial(f, {}, 0)
            resolved = resolve_stamped(blind, {(n, 0): (n in e) for n in names})
            assert resolved == progress(f, Event(e))


class TestCanonicalKey:
    def test_renames_in_first_occurrence_order(self):
        f = parse("G p")
        r1 = progress_partial(f, {}, 3)
        r2 = progress_partial(f, {}, 7)
        assert r1 != r2
        assert canonical_key(r1) == canonical_key(r2)

    def test_plain_atoms_untouched(self):
        f = parse("a & b")
        assert canonical_key(f) == f

    def test_distinct_vars_stay_distinct(self):
        f = parse("G(p & q)")
        r = progress_partial(f, {}, 0)
        key = canonical_key(r)
        assert len(atoms(key) - {"p", "q"}) == 2


def _prop(rng, names, depth=2):
    from declmon.formula import Atom, Not, conj, disj

    if depth == 0 or rng.random() < 0.4:
        a = Atom(rng.choice(names))
        return Not(a) if rng.random() < 0.4 else a
    parts = [_prop(rng, names, depth - 1) for _ in range(2)]
    return conj(parts) if rng.random() < 0.5 else disj(parts)
