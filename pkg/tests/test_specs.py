from __future__ import annotations

import itertools
import random
import re

import pytest

from dynpaths.errors import NondeterministicSpec, PaddingViolation, ParseError
from dynpaths.specs import (PAD, SyncAutomaton, compile_dfa, equal_length, parse_dfa, parse_ecrpq,
                            parse_grammar, parse_neps, parse_sync, prefix_relation, regex_to_dfa,
                            satisfies, to_cnf, validate_sync)
from dynpaths.specs.sync import dump_sync


def words(alphabet, upto):
    for k in range(upto + 1):
        yield from itertools.product(alphabet, repeat=k)


class TestDfa:
    def test_star(self):
        d = regex_to_dfa("a*", ("a", "b"))
        live = [q for q in range(d.n_states) if q in d.finals]
        assert len(live) == 1
        assert d.step(d.start, "a") == d.start
        sink = d.step(d.start, "b")
        assert sink not in d.finals and all(d.step(sink, s) == sink for s in "ab")

    def test_fixed_word(self):
        d = regex_to_dfa("aaa")
        assert d.n_states == 5  # four chain states plus the sink
        assert [w for w in words("a", 5) if d.accepts(w)] == [("a", "a", "a")]

    @pytest.mark.parametrize("expr", ["a*", "aaa", "(a|b)*b", "a(ba)*", "(ab|b)?a+", "a.b", "()", "(a|())b*"])
    def test_regex_semantics(self, expr):
        d = regex_to_dfa(expr, ("a", "b"))
        pattern = re.compile(expr.replace("()", "(?:)").replace(".", "[ab]"))
        for w in words("ab", 6):
            assert d.accepts(w) == bool(pattern.fullmatch("".join(w)))

    def test_completion_preserves_language(self):
        text = "states 3\nstart 0\nfinal 2\ntrans 0 a 1\ntrans 1 b 2\ntrans 2 a 1\n"
        d = parse_dfa(text, ("a", "b"))
        assert d.n_states == 4
        partial = {(0, "a"): 1, (1, "b"): 2, (2, "a"): 1}
        rng = random.Random(5)
        for _ in range(100):
            w = [rng.choice("ab") for _ in range(rng.randrange(7))]
            q = 0
            for sym in w:
                q = partial.get((q, sym))
                if q is None:
                    break
            assert d.accepts(w) == (q == 2)

    def test_duplicate_transition(self):
        with pytest.raises(NondeterministicSpec):
            parse_dfa("states 2\nstart 0\nfinal 1\ntrans 0 a 1\ntrans 0 a 0\n")

    def test_compile_bare_regex_and_file(self):
        assert compile_dfa("a*b").accepts("aab")
        assert compile_dfa("regex a*b\n").accepts("b")

    @pytest.mark.parametrize("text", ["states 2\n", "regex (a\n", "regex a|*\n", "states 1\nstart 3\n",
                                      "statez 1\nstart 0\n"])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            compile_dfa(text)

    def test_with_alphabet_adds_sink(self):
        d = regex_to_dfa("a*").with_alphabet(("a", "b"))
        assert d.accepts("aa") and not d.accepts("ab")


def anbn(w) -> bool:
    k = len(w) // 2
    return len(w) % 2 == 0 and tuple(w) == ("a",) * k + ("b",) * k


def dyck(w) -> bool:
    depth = 0
    for c in w:
        depth += 1 if c == "(" else -1
        if depth < 0:
            return False
    return depth == 0


class TestCnf:
    def test_anbn(self):
        g = to_cnf("rule S -> a S b | eps\n")
        assert g.start_eps
        assert all(g.start not in (y, z) for _, y, z in g.binary)
        for w in words("ab", 8):
            assert g.accepts(w) == anbn(w)

    def test_dyck(self):
        g = to_cnf("rule S -> S S | ( S ) | eps\n")
        assert g.accepts("(())") and not g.accepts("(()")
        for w in words("()", 8):
            assert g.accepts(w) == dyck(w)

    def test_cnf_input_is_fixpoint(self):
        g = to_cnf("rule S -> A B\nrule A -> a\nrule B -> b\n")
        assert len(g.binary) == 1 and len(g.unary) == 2 and not g.start_eps
        assert [w for w in words("ab", 4) if g.accepts(w)] == [("a", "b")]

    def test_unit_and_useless_rules(self):
        g = to_cnf("start S\nrule S -> A | c\nrule A -> B\nrule B -> a b\nrule U -> U a\n")
        assert {w for w in words("abc", 4) if g.accepts(w)} == {("c",), ("a", "b")}

    def test_empty_language(self):
        g = to_cnf("rule S -> S a\n")
        assert not any(g.accepts(w) for w in words("a", 5))

    @pytest.mark.parametrize("text", ["", "rule S a\n", "rule S -> a eps\n", "rule S -> a |\n", "oops\n"])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            parse_grammar(text)


class TestSync:
    def test_equal_length_ok(self):
        validate_sync(equal_length(("a", "b")))

    def test_prefix_ok(self):
        rel = prefix_relation(("a", "b"))
        validate_sync(rel)
        assert rel.accepts([("a",), ("a", "b")])
        assert not rel.accepts([("b",), ("a", "b")])

    def test_padding_violation(self):
        bad = SyncAutomaton(2, 2, 0, frozenset({1}),
                            frozenset({(0, (PAD, "a"), 1), (1, ("b", "a"), 1)}))
        with pytest.raises(PaddingViolation) as info:
            validate_sync(bad)
        assert info.value.tape == 0

    def test_padding_violation_second_tape(self):
        bad = SyncAutomaton(2, 2, 0, frozenset({1}),
                            frozenset({(0, ("a", PAD), 1), (1, ("a", "b"), 1)}))
        with pytest.raises(PaddingViolation) as info:
            validate_sync(bad)
        assert info.value.tape == 1

    def test_parse_dump_round_trip(self):
        rel = prefix_relation(("a", "b"))
        assert parse_sync(dump_sync(rel)) == rel

    def test_parse_arity_mismatch(self):
        with pytest.raises(ParseError):
            parse_sync("arity 2\nstates 1\nstart 0\ntrans 0 a 0\n")

    def test_validation_matches_run_enumeration(self):
        rng = random.Random(11)
        syms = ["a", PAD]
        for _ in range(150):
            trans = frozenset((rng.randrange(3), (rng.choice(syms), rng.choice(syms)), rng.randrange(3))
                              for _ in range(rng.randrange(1, 6)))
            trans = frozenset(t for t in trans if t[1] != (PAD, PAD))
            a = SyncAutomaton(2, 3, 0, frozenset(range(3)), trans)
            try:
                validate_sync(a)
                ok = True
            except PaddingViolation:
                ok = False
            assert ok == _runs_respect_padding(a, 6)


def _runs_respect_padding(a: SyncAutomaton, depth: int) -> bool:
    # runs from every state: the check is structural, not restricted to the start state
    frontier = [(p, (False,) * a.arity) for p in range(a.n_states)]
    for _ in range(depth):
        nxt = []
        for p, padded in frontier:
            for col, q in a.out(p):
                if any(done and s is not PAD for done, s in zip(padded, col)):
                    return False
                nxt.append((q, tuple(done or s is PAD for done, s in zip(padded, col))))
        frontier = list(set(nxt))
    return True


class TestQueries:
    def test_parse_ecrpq(self, data_dir):
        q = parse_ecrpq((data_dir / "eqlen.ecrpq").read_text(), ("a", "b"), base_dir=data_dir)
        assert q.atoms == (("x", "p", "y"), ("z", "q", "w"))
        assert len(q.relations) == 1 and q.relations[0][1] == ("p", "q")
        assert q.A == ((1, 0, 0, 0),) and q.b == (1,)
        assert not q.is_crpq

    def test_ecrpq_rejects_bad_width(self):
        with pytest.raises(ParseError):
            parse_ecrpq("atom x p y\nconstraint 1 >= 0\n", ("a", "b"))

    def test_ecrpq_rejects_path_in_head(self):
        with pytest.raises(ParseError):
            parse_ecrpq("atom x p y\nhead p\n", ("a",))

    def test_satisfies(self):
        assert satisfies([], [], [5])
        assert satisfies([[1, -1]], [0], [2, 2])
        assert not satisfies([[1, -1]], [1], [2, 2])

    def test_neps(self):
        spec = parse_neps("factors 3\nrule 110\nrule 0 0 1\n")
        assert spec.rules == ((1, 1, 0), (0, 0, 1))
        assert spec.matrix == [[1, 0], [1, 0], [0, 1]]
        assert spec.flip(0, 2).rules[0] == (1, 1, 1)
        with pytest.raises(IndexError):
            spec.flip(2, 0)

    @pytest.mark.parametrize("text", ["rule 11\n", "factors 2\nrule 1\n", "factors 2\nrule 12\n"])
    def test_neps_errors(self, text):
        with pytest.raises(ParseError):
            parse_neps(text)
