"""Formula parsing, reference semantics, automaton translations, and the
explicit-state checker."""

import itertools
import random

import pytest

import vcnet
from vcnet import ltl
from vcnet.automata import (
    buchi_accepts_lasso, determinize, format_automaton, ltl_to_buchi,
    ltl_to_nfa, nfa_accepts, parse_automaton,
)
from vcnet.errors import FormulaParseError
from vcnet.ltl import (
    Always, And, Atom, Const, End, Eventually, Implies, Next, Not, Or,
    Release, Until, eval_ltl, parse_ltl,
)
from vcnet.randgen import random_formula, random_net
from vcnet.samples import chain_net, manufacturing_net
from conftest import all_letters, with_padding


class TestParser:
    def test_always_implication(self):
        f = parse_ltl("G (p3 -> !end)")
        assert f == Always(Implies(Atom("p3"), Not(End())))

    def test_until(self):
        assert parse_ltl("p U q") == Until(Atom("p"), Atom("q"))

    def test_negated_until_shape(self):
        f = parse_ltl("!(true U (q1 & !q2))")
        assert f == Not(Until(Const(True), And(Atom("q1"), Not(Atom("q2")))))

    def test_precedence(self):
        assert parse_ltl("a & b | c") == Or(And(Atom("a"), Atom("b")), Atom("c"))
        assert parse_ltl("!a U b") == Until(Not(Atom("a")), Atom("b"))
        assert parse_ltl("X a U b") == Until(Next(Atom("a")), Atom("b"))
        assert parse_ltl("a -> b -> c") == Implies(
            Atom("a"), Implies(Atom("b"), Atom("c")))
        assert parse_ltl("a U b U c") == Until(
            Atom("a"), Until(Atom("b"), Atom("c")))

    def test_unary_stacking(self):
        assert parse_ltl("!X F p") == Not(Next(Eventually(Atom("p"))))

    def test_release_and_constants(self):
        assert parse_ltl("false R p") == Release(Const(False), Atom("p"))

    def test_error_position(self):
        with pytest.raises(FormulaParseError) as err:
            parse_ltl("p U ")
        assert err.value.position == 4

    def test_error_dangling(self):
        with pytest.raises(FormulaParseError):
            parse_ltl("(p")


class TestEval:
    def test_atom(self):
        assert eval_ltl(parse_ltl("p"), [{"p"}])
        assert not eval_ltl(parse_ltl("p"), [set()])

    def test_next_false_at_last(self):
        assert not eval_ltl(parse_ltl("X p"), [{"p"}])
        assert eval_ltl(parse_ltl("X p"), [set(), {"p"}])

    def test_until(self):
        assert eval_ltl(parse_ltl("p U q"), [{"p"}, {"p"}, {"q"}])
        assert not eval_ltl(parse_ltl("p U q"), [{"p"}, {"p"}])

    def test_end_marks_last_position(self):
        f = parse_ltl("F (end & p)")
        assert eval_ltl(f, [set(), {"p"}])
        assert not eval_ltl(f, [{"p"}, set()])

    def test_end_is_false_on_lassos(self):
        assert not eval_ltl(parse_ltl("F end"), [], loop=[{"p"}])

    def test_lasso_globally_eventually(self):
        f = parse_ltl("G F p")
        assert eval_ltl(f, [set()], loop=[set(), {"p"}])
        assert not eval_ltl(f, [{"p"}], loop=[set()])

    def test_empty_run_rejected(self):
        with pytest.raises(ValueError):
            eval_ltl(parse_ltl("p"), [])


class TestTranslations:
    def test_true_accepts_all_nonempty(self):
        nfa = ltl_to_nfa(Const(True))
        assert not nfa_accepts(nfa, [])
        assert nfa_accepts(nfa, [frozenset()])
        assert nfa_accepts(nfa, [frozenset(), frozenset()])
        buchi = ltl_to_buchi(Const(True))
        assert buchi_accepts_lasso(buchi, [], [frozenset()])

    def test_atom_needs_first_letter(self):
        nfa = ltl_to_nfa(Atom("p"))
        assert nfa_accepts(nfa, [{"p"}])
        assert nfa_accepts(nfa, [{"p"}, set()])
        assert not nfa_accepts(nfa, [set(), {"p"}])

    def test_last_letter_condition(self):
        # finite words satisfy G(end -> !p) iff the last letter lacks p
        nfa = ltl_to_nfa(parse_ltl("G (end -> !p)"))
        letters = all_letters({"p"})
        for n in range(1, 5):
            for word in itertools.product(letters, repeat=n):
                want = "p" not in word[-1]
                assert nfa_accepts(nfa, list(word)) == want

    def test_translation_matches_reference_semantics(self):
        rng = random.Random(21)
        letters = all_letters({"p", "q"})
        for _ in range(150):
            f = random_formula(rng, ["p", "q"], depth=2)
            nfa = ltl_to_nfa(f)
            buchi = ltl_to_buchi(f)
            for n in range(1, 4):
                for word in itertools.product(letters, repeat=n):
                    assert nfa_accepts(nfa, list(word)) == eval_ltl(f, list(word))
            for pre_len in range(0, 2):
                for loop_len in range(1, 3):
                    for word in itertools.product(letters, repeat=pre_len + loop_len):
                        prefix = list(word[:pre_len])
                        loop = list(word[pre_len:])
                        assert buchi_accepts_lasso(buchi, prefix, loop) == \
                            eval_ltl(f, prefix, loop=loop)

    def test_deeper_formulas_on_words(self):
        rng = random.Random(22)
        letters = all_letters({"p", "q"})
        for _ in range(40):
            f = random_formula(rng, ["p", "q"], depth=3)
            nfa = ltl_to_nfa(f)
            for n in range(1, 6):
                for _ in range(20):
                    word = [rng.choice(letters) for _ in range(n)]
                    assert nfa_accepts(nfa, word) == eval_ltl(f, word)

    def test_determinize_preserves_language(self):
        rng = random.Random(23)
        letters = all_letters({"p", "q"})
        for _ in range(40):
            f = random_formula(rng, ["p", "q"], depth=2)
            nfa = ltl_to_nfa(f)
            dfa = determinize(nfa)
            for n in range(1, 4):
                for word in itertools.product(letters, repeat=n):
                    assert nfa_accepts(dfa, list(word)) == nfa_accepts(nfa, list(word))
            for letter in letters:
                for state in dfa.states:
                    assert len(dfa.step(state, letter)) == 1


def test_automaton_format_round_trip():
    aut = ltl_to_nfa(parse_ltl("p U q"))
    # rename opaque states for the text format
    names = {s: f"s{i}" for i, s in enumerate(aut.states)}
    lines = ["atoms p q"]
    for s in aut.states:
        flags = (" init" if s in aut.initial else "") + (
            " acc" if s in aut.accepting else "")
        lines.append(f"state {names[s]}{flags}")
    for (s, letter), dsts in aut.transitions.items():
        for d in dsts:
            lines.append(f"edge {names[s]} {{{' '.join(sorted(letter))}}} {names[d]}")
    parsed = parse_automaton("\n".join(lines), "nfa")
    again = parse_automaton(format_automaton(parsed), "nfa")
    letters = all_letters({"p", "q"})
    for n in range(1, 4):
        for word in itertools.product(letters, repeat=n):
            word = list(word)
            assert nfa_accepts(parsed, word) == nfa_accepts(aut, word)
            assert nfa_accepts(again, word) == nfa_accepts(aut, word)


class TestExplicitCheck:
    def test_chain_eventually(self):
        net, m0 = chain_net()
        assert vcnet.explicit_model_check(net, m0, parse_ltl("F q")).holds

    def test_chain_globally_fails_with_run(self):
        net, m0 = chain_net()
        verdict = vcnet.explicit_model_check(net, m0, parse_ltl("G p"))
        assert not verdict.holds
        cex = verdict.counterexample
        assert cex.kind == "finite"
        assert cex.markings == [frozenset({"p"}), frozenset({"q"})]

    def test_manufacturing_property_tracks_stock(self):
        f = parse_ltl("G (end -> !p3)")
        for a, b, c in itertools.product((1, 2, 3), repeat=3):
            net, m0 = manufacturing_net(a, b, c)
            verdict = vcnet.explicit_model_check(net, m0, f)
            assert verdict.holds == (c >= min(a, b))

    def test_deadlocked_start_has_the_zero_step_run_only(self):
        from vcnet.net import PetriNet
        net = PetriNet(["p", "q"], ["t"], {"t": {"q"}}, {"t": {"p"}})
        m0 = frozenset({"p"})
        assert vcnet.explicit_model_check(net, m0, parse_ltl("p & end")).holds
        assert not vcnet.explicit_model_check(net, m0, parse_ltl("X true")).holds

    def test_lasso_counterexample_is_a_real_violation(self):
        net, m0 = manufacturing_net(1, 1, 1)
        # the cycle never stops, so eventually-deadlock is violated by the
        # infinite run that keeps processing
        f = parse_ltl("F (p3)")
        verdict = vcnet.explicit_model_check(net, m0, f)
        if not verdict.holds and verdict.counterexample.kind == "lasso":
            cex = verdict.counterexample
            proj = lambda ms: [frozenset(m) & ltl.atoms(f) for m in ms]
            assert not eval_ltl(f, proj(cex.markings), loop=proj(cex.loop))

    def test_negation_duality(self):
        rng = random.Random(24)
        for _ in range(60):
            net, m0 = random_net(rng, max_places=5, max_transitions=5)
            f = random_formula(rng, list(net.places[:2]), depth=2)
            a = vcnet.explicit_model_check(net, m0, f).holds
            b = vcnet.explicit_model_check(net, m0, Not(f)).holds
            assert not (a and b)

    def test_padding_places_do_not_change_verdicts(self):
        rng = random.Random(25)
        for _ in range(40):
            net, m0 = random_net(rng, max_places=5, max_transitions=5)
            f = random_formula(rng, list(net.places[:2]), depth=2)
            padded, pm0 = with_padding(net, m0)
            assert vcnet.explicit_model_check(net, m0, f).holds == \
                vcnet.explicit_model_check(padded, pm0, f).holds

    def test_finite_counterexamples_violate_the_formula(self):
        rng = random.Random(26)
        for _ in range(80):
            net, m0 = random_net(rng, max_places=5, max_transitions=5)
            f = random_formula(rng, list(net.places[:2]), depth=2)
            verdict = vcnet.explicit_model_check(net, m0, f)
            if verdict.holds or verdict.counterexample.kind != "finite":
                continue
            markings = verdict.counterexample.markings
            assert vcnet.enabled(net, markings[-1]) == []
            word = [m & ltl.atoms(f) for m in markings]
            if ltl.atoms(f):
                assert not eval_ltl(f, word)
