import random

import pytest

from declmon.formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Finally,
    Globally,
    Next,
    Not,
    Or,
    Until,
    atoms,
    fold,
    format_formula,
    logical_ops,
    nnf,
    subformulas,
    symbol_count,
    temporal_ops,
    temporal_size,
)
from declmon.parser import FormulaSyntaxError, parse
from declmon.bench import random_formula

from oracles import PeriodicWord, all_events, bounded_eval, periodic_eval


class TestParse:
    def test_single_operator(self):
        assert parse("G(p)") == Globally(Atom("p"))

    def test_fig1_shape(self):
        f = parse("p & (q | r)")
        assert f == And((Atom("p"), Or((Atom("q"), Atom("r")))))

    def test_worked_example_formula(self):
        f = parse("F(a1 & !a2 & b & !c)")
        assert f == Finally(
            And((Atom("a1"), Not(Atom("a2")), Atom("b"), Not(Atom("c"))))
        )

    def test_flattening(self):
        assert parse("a & b & c") == And((Atom("a"), Atom("b"), Atom("c")))
        assert parse("a & (b & c)") == And((Atom("a"), Atom("b"), Atom("c")))
        assert parse("(a | b) | c") == Or((Atom("a"), Atom("b"), Atom("c")))

    def test_implication_sugar(self):
        assert parse("a -> b") == Or((Not(Atom("a")), Atom("b")))
        # right-associative
        assert parse("a -> b -> c") == parse("a -> (b -> c)")

    def test_precedence(self):
        # unary > U > & > |
        assert parse("a U b & c") == And((Until(Atom("a"), Atom("b")), Atom("c")))
        assert parse("a & b | c") == Or((And((Atom("a"), Atom("b"))), Atom("c")))
        assert parse("!a U b") == Until(Not(Atom("a")), Atom("b"))
        assert parse("X a U b") == Until(Next(Atom("a")), Atom("b"))

    def test_until_right_assoc(self):
        assert parse("a U b U c") == Until(Atom("a"), Until(Atom("b"), Atom("c")))

    def test_true_keyword(self):
        assert parse("true") == TRUE
        assert parse("!true") == FALSE

    @pytest.mark.parametrize("bad", ["", "p &", "(p", "p q", "&p", "G", "p @ q"])
    def test_syntax_errors_carry_position(self, bad):
        with pytest.raises(FormulaSyntaxError) as err:
            parse(bad)
        assert err.value.position >= 0

    def test_keywords_are_not_atoms(self):
        with pytest.raises(FormulaSyntaxError):
            parse("U")


class TestPrintRoundTrip:
    @pytest.mark.parametrize(
        "text",
        [
            "p",
            "true",
            "!p",
            "p & q & r",
            "p | q & r",
            "(p | q) & r",
            "G (p U q)",
            "(a U b) U c",
            "X X p",
            "F (a1 & !a2 & b & !c)",
            "G (!p | F q)",
        ],
    )
    def test_examples(self, text):
        f = parse(text)
        assert parse(format_formula(f)) == f

    def test_random_formulas(self):
        names = ["a", "b", "c", "d"]
        for i in range(300):
            f = random_formula(1 + i % 4, names, seed=f"roundtrip:{i}")
            assert parse(format_formula(f)) == f

    def test_flattened_invariant_everywhere(self):
        for i in range(200):
            f = random_formula(1 + i % 4, ["a", "b", "c"], seed=f"flat:{i}")
            for g in subformulas(f):
                if isinstance(g, And):
                    assert not any(isinstance(c, And) for c in g.children)
                    assert len(g.children) >= 2
                if isinstance(g, Or):
                    assert not any(isinstance(c, Or) for c in g.children)
                    assert len(g.children) >= 2


class TestQueries:
    def test_atoms(self):
        assert atoms(parse("a & !c")) == {"a", "c"}

    def test_ops_of_conjunction(self):
        f = parse("a & b")
        assert temporal_ops(f) == frozenset()
        assert logical_ops(f) == {"&"}

    def test_ops_of_temporal(self):
        f = parse("F(a | b | c)")
        assert atoms(f) == {"a", "b", "c"}
        assert temporal_ops(f) == {"F"}

    def test_size_paper_example(self):
        assert temporal_size(parse("G(a & b) | G(c & d) | F(e)")) == 3

    def test_size_propositional(self):
        assert temporal_size(parse("a & b")) == 0

    def test_size_counts_nested(self):
        assert temporal_size(parse("G(!p | F q)")) == 2

    def test_symbol_count(self):
        assert symbol_count(parse("a & b & c")) == 5  # three atoms, two '&'
        assert symbol_count(parse("G p")) == 2
        assert symbol_count(parse("!a | b")) == 4


class TestNnf:
    def test_demorgan(self):
        assert nnf(parse("!(a & b)")) == parse("!a | !b")

    def test_identity_on_literals(self):
        assert nnf(parse("a")) == parse("a")
        assert nnf(parse("!a")) == parse("!a")

    def test_globally_dual(self):
        assert nnf(parse("!G p")) == parse("F !p")

    def test_next_dual(self):
        assert nnf(parse("!X p")) == parse("X !p")

    def test_negations_at_atoms_only(self):
        for i in range(200):
            f = random_formula(1 + i % 3, ["a", "b", "c"], seed=f"nnf:{i}")
            for g in subformulas(nnf(f)):
                if isinstance(g, Not):
                    assert isinstance(g.child, (Atom,)) or g == FALSE

    def test_bounded_trace_equivalence_x_free(self):
        """nnf preserves finite-trace semantics; X-free only, because the
        finite cutoff breaks !X duality at the last position."""
        names = ["a", "b"]
        events = all_events(names)
        rng = random.Random("nnf-equiv")
        checked = 0
        for i in range(120):
            f = random_formula(1 + i % 2, names, seed=f"nnfeq:{i}")
            if "X" in temporal_ops(f):
                continue
            checked += 1
            g = nnf(f)
            for _ in range(40):
                n = rng.randint(1, 4)
                trace = [rng.choice(events) for _ in range(n)]
                assert bounded_eval(f, trace) == bounded_eval(g, trace), (
                    f"{f}  vs  {g}  on {trace}"
                )
        assert checked >= 30

    def test_periodic_word_equivalence(self):
        """nnf is an equivalence of the real (infinite-word) semantics,
        checked on ultimately periodic words."""
        names = ["a", "b"]
        events = all_events(names)
        rng = random.Random("nnf-lasso")
        for i in range(80):
            f = random_formula(1 + i % 2, names, seed=f"nnflasso:{i}")
            g = nnf(f)
            for _ in range(30):
                u = [rng.choice(events) for _ in range(rng.randint(0, 3))]
                v = [rng.choice(events) for _ in range(rng.randint(1, 3))]
                word = PeriodicWord(u, v)
                assert periodic_eval(f, word) == periodic_eval(g, word), (
                    f"{f}  vs  {g}  on {u}+{v}^w"
                )


class TestFold:
    @pytest.mark.parametrize(
        "text,expect",
        [
            ("true & p", "p"),
            ("!true & p", "!true"),
            ("true | p", "true"),
            ("!true | p", "p"),
            ("p & p", "p"),
            ("G true", "true"),
            ("F !true", "!true"),
            ("!!p", "p"),
        ],
    )
    def test_rules(self, text, expect):
        assert fold(parse(text)) == parse(expect)

    def test_idempotent(self):
        for i in range(100):
            f = random_formula(1 + i % 3, ["a", "b"], seed=f"fold:{i}")
            assert fold(fold(f)) == fold(f)
