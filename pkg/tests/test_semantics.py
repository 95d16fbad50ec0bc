import random

import pytest

from declmon.formula import Atom, Finally
from declmon.parser import parse
from declmon.semantics import (
    BOT,
    TOP,
    UNKNOWN,
    PartialValuation,
    TruthValue3,
    UnvaluedTemporalError,
    eval3,
    eval_prop,
    t3_and,
    t3_not,
    t3_or,
)
from oracles import kleene_ref


def val(**entries) -> PartialValuation:
    v = PartialValuation()
    for name, value in entries.items():
        v.set_atom(name, 0, value)
    return v


class TestKleeneTables:
    def test_and_with_unknown(self):
        assert t3_and([TOP, UNKNOWN]) is UNKNOWN
        assert t3_and([BOT, UNKNOWN]) is BOT
        assert t3_and([UNKNOWN, UNKNOWN]) is UNKNOWN

    def test_or_with_unknown(self):
        assert t3_or([TOP, UNKNOWN]) is TOP
        assert t3_or([BOT, UNKNOWN]) is UNKNOWN
        assert t3_or([UNKNOWN, UNKNOWN]) is UNKNOWN

    def test_not_unknown(self):
        assert t3_not(UNKNOWN) is UNKNOWN


class TestEval3:
    def test_or_resolves_with_top(self):
        assert eval3(parse("a | b"), val(a=TOP), 0) is TOP

    def test_and_resolves_with_bot(self):
        assert eval3(parse("a & b"), val(a=BOT), 0) is BOT

    def test_and_stays_unknown(self):
        assert eval3(parse("a & b"), val(a=TOP), 0) is UNKNOWN

    def test_absent_entries_are_unknown(self):
        v = PartialValuation()
        assert v.value_of("a", 3) is UNKNOWN
        assert len(v) == 0
        v.set_atom("a", 3, UNKNOWN)  # storing Unknown is a no-op
        assert len(v) == 0

    def test_prevalued_temporal_subformula(self):
        f = parse("a & F b")
        v = val(a=TOP)
        v.set_formula(Finally(Atom("b")), 0, TOP)
        assert eval3(f, v, 0) is TOP

    def test_unvalued_temporal_raises(self):
        with pytest.raises(UnvaluedTemporalError):
            eval3(parse("a & F b"), val(a=TOP), 0)

    def test_time_indexed(self):
        v = PartialValuation()
        v.set_atom("a", 1, TOP)
        assert eval3(parse("a"), v, 0) is UNKNOWN
        assert eval3(parse("a"), v, 1) is TOP


class TestKleeneMonotonicity:
    def test_refining_unknowns_never_flips(self):
        """Filling in any Unknown entry may resolve ? but never flips T/F."""
        rng = random.Random("monotone")
        names = ["a", "b", "c"]
        for _ in range(300):
            f = _random_prop(rng, names)
            full = {n: rng.random() < 0.5 for n in names}
            obs = frozenset(n for n in names if rng.random() < 0.5)
            wider = obs | frozenset(
                n for n in names if rng.random() < 0.5
            )
            coarse = kleene_ref(f, full, obs)
            refined = kleene_ref(f, full, wider)
            if coarse is not UNKNOWN:
                assert refined is coarse

    def test_eval_prop_matches_reference(self):
        rng = random.Random("evalref")
        names = ["a", "b", "c"]
        for _ in range(400):
            f = _random_prop(rng, names)
            full = {n: rng.random() < 0.5 for n in names}
            obs = frozenset(n for n in names if rng.random() < 0.5)

            def lookup(name):
                if name in obs:
                    return TruthValue3.from_bool(full[name])
                return UNKNOWN

            assert eval_prop(f, lookup) is kleene_ref(f, full, obs)


def _random_prop(rng, names, depth=3):
    from declmon.formula import Not, conj, disj

    if depth == 0 or rng.random() < 0.4:
        a = Atom(rng.choice(names))
        return Not(a) if rng.random() < 0.4 else a
    if rng.random() < 0.5:
        return conj([_random_prop(rng, names, depth - 1) for _ in range(2)])
    return disj([_random_prop(rng, names, depth - 1) for _ in range(2)])
