from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given

from dynpaths.errors import UnsupportedModification
from dynpaths.fuzz import random_dfa, trial_rpq_locality
from dynpaths.dynrpq import phi_reach, rpq_init, rpq_insert, rpq_query, rpq_update
from dynpaths.graphstore import LabeledGraph, Modification, apply_mod
from dynpaths.oracle import oracle_rpq, oracle_rpq_enum
from dynpaths.specs import parse_dfa, regex_to_dfa

from strategies import insertions


def insert_all(dfa, n, edges):
    s = rpq_init(dfa, n)
    for sym, u, v in edges:
        s = rpq_insert(s, sym, u, v)
    return s


def diag(n):
    return {(i, i) for i in range(n)}


class TestInit:
    def test_diagonal_per_state(self):
        s = rpq_init(regex_to_dfa("ab"), 3)
        for p in range(s.dfa.n_states):
            assert s.relation(p, p) == diag(3)
            for q in range(s.dfa.n_states):
                if p != q:
                    assert s.relation(p, q) == set()

    def test_empty_word_accepted(self):
        assert rpq_query(rpq_init(regex_to_dfa("a*"), 3)) == diag(3)

    def test_empty_word_rejected(self):
        assert rpq_query(rpq_init(regex_to_dfa("a"), 3)) == set()


class TestInsert:
    def test_star_closure(self):
        s = insert_all(regex_to_dfa("a*"), 3, [("a", 0, 1), ("a", 1, 2)])
        assert rpq_query(s) == diag(3) | {(0, 1), (1, 2), (0, 2)}

    @pytest.mark.parametrize("order", [[0, 1, 2], [2, 0, 1], [1, 2, 0], [2, 1, 0]])
    def test_triangle_any_order(self, order):
        edges = [("a", 0, 1), ("a", 1, 2), ("a", 2, 0)]
        s = insert_all(regex_to_dfa("aaa"), 3, [edges[i] for i in order])
        assert rpq_query(s) == diag(3)

    def test_alternation_needs_leading_a(self):
        s = insert_all(regex_to_dfa("(ab)*"), 2, [("a", 0, 1), ("b", 1, 0)])
        answer = rpq_query(s)
        assert (0, 0) in answer and (0, 1) not in answer
        assert (1, 1) in answer  # the empty path
        g = LabeledGraph(2, ("a", "b"), True, frozenset({(0, "a", 1), (1, "b", 0)}))
        assert answer == oracle_rpq(g, regex_to_dfa("(ab)*", ("a", "b")))

    def test_single_edge(self):
        assert rpq_query(insert_all(regex_to_dfa("a"), 2, [("a", 0, 1)])) == {(0, 1)}

    def test_symbol_outside_dfa_alphabet(self):
        s = insert_all(regex_to_dfa("a*"), 2, [("b", 0, 1)])
        assert rpq_query(s) == diag(2)

    def test_delete_rejected(self):
        with pytest.raises(UnsupportedModification):
            rpq_update(rpq_init(regex_to_dfa("a"), 2), Modification.delete("a", 0, 1))

    def test_snapshot_semantics(self):
        s = rpq_init(regex_to_dfa("a*"), 3)
        before = s.R.copy()
        rpq_insert(s, "a", 0, 1)
        assert np.array_equal(s.R, before)


# a toggles the state, b keeps it
PARITY = parse_dfa("states 2\nstart 0\nfinal 0\ntrans 0 a 1\ntrans 1 a 0\ntrans 0 b 0\ntrans 1 b 1\n")


class TestPhi:
    def test_base_case_is_the_edge(self):
        s = rpq_init(PARITY, 2)
        assert phi_reach(s, 1, 0, 1, 0, 1, "a")

    def test_base_case_false(self):
        s = rpq_init(PARITY, 2)
        assert not phi_reach(s, 1, 0, 0, 0, 1, "a")

    def test_second_visit_needed(self):
        # with b: 1 -> 0 present, u=0 -a-> v=1 -b-> 0 -a-> 1 reads aba and returns to state 0
        s = insert_all(PARITY, 2, [("b", 1, 0)])
        assert not phi_reach(s, 1, 0, 0, 0, 1, "a")
        assert phi_reach(s, 2, 0, 0, 0, 1, "a")

    def test_range(self):
        with pytest.raises(ValueError):
            phi_reach(rpq_init(PARITY, 2), 3, 0, 0, 0, 1, "a")


class TestProperties:
    @given(insertions(max_nodes=6, max_steps=12))
    def test_matches_oracle(self, case):
        n, steps = case
        dfa = random_dfa(random.Random(n * 31 + len(steps)), ("a", "b"), 3)
        s, g = rpq_init(dfa, n), LabeledGraph.empty(n, ("a", "b"))
        for m in steps:
            s = rpq_update(s, m)
            g = apply_mod(g, m)
            assert rpq_query(s) == oracle_rpq(g, dfa)

    @given(insertions(max_nodes=5, max_steps=10))
    def test_idempotent_and_monotone(self, case):
        n, steps = case
        s = rpq_init(PARITY, n)
        for m in steps:
            once = rpq_update(s, m)
            assert np.array_equal(rpq_update(once, m).R, once.R)
            assert not (s.R & ~once.R).any()
            s = once

    def test_locality(self):
        for i in range(50):
            trial_rpq_locality(random.Random(i))

    def test_enumeration_oracle_agrees_on_dags(self):
        rng = random.Random(3)
        for _ in range(30):
            dfa = random_dfa(rng, ("a", "b"), 3)
            edges = {(u, rng.choice("ab"), v) for u in range(5) for v in range(u + 1, 5) if rng.random() < 0.4}
            g = LabeledGraph(5, ("a", "b"), True, frozenset(edges))
            s = insert_all(dfa, 5, [(sym, u, v) for u, sym, v in edges])
            assert rpq_query(s) == oracle_rpq(g, dfa) == oracle_rpq_enum(g, dfa)
