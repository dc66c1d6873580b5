from __future__ import annotations

import ast
import itertools
import random
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

import dynpaths.oracle as oracle_module
from dynpaths.errors import BudgetExceeded
from dynpaths.fuzz import ANBN, DYCK, random_dfa, random_ecrpq
from dynpaths.graphstore import LabeledGraph
from dynpaths.oracle import (OracleBudget, dag_paths, explicit_product, oracle_cfl, oracle_cfl_enum,
                             oracle_ecrpq, oracle_ecrpq_naive, oracle_explicit_product, oracle_length_sets,
                             oracle_parikh, oracle_reach, oracle_rpq, oracle_rpq_enum, product_bfs,
                             product_deepening)
from dynpaths.specs import EcrpqQuery, from_dfa, regex_to_dfa


def graph(n, edges, alphabet=("e",)):
    return LabeledGraph(n, tuple(alphabet), True, frozenset(edges))


@st.composite
def graphs(draw, max_nodes=5, alphabet=("a", "b"), acyclic=False):
    n = draw(st.integers(1, max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(n) if not acyclic or u < v]
    chosen = draw(st.lists(st.tuples(st.sampled_from(pairs), st.sampled_from(alphabet)), max_size=10)) if pairs else []
    return graph(n, {(u, s, v) for (u, v), s in chosen}, alphabet)


def matrix_power_lengths(g: LabeledGraph, lmax: int) -> set[tuple[int, int, int]]:
    adj = g.adjacency().astype(int)
    power = np.eye(g.n, dtype=int)
    out = set()
    for l in range(lmax + 1):
        out |= {(int(x), int(y), l) for x, y in zip(*np.nonzero(power))}
        power = np.minimum(power @ adj, 1)
    return out


class TestLengths:
    def test_empty_graph(self):
        assert oracle_length_sets(graph(3, ()), 4) == {(i, i, 0) for i in range(3)}

    def test_chain_intervals(self):
        g = graph(4, {(i, "e", i + 1) for i in range(3)})
        assert oracle_length_sets(g, 5) == {(x, y, y - x) for x in range(4) for y in range(x, 4)}

    def test_two_cycle(self):
        g = graph(2, {(0, "e", 1), (1, "e", 0)})
        assert {l for x, y, l in oracle_length_sets(g, 7) if (x, y) == (0, 1)} == {1, 3, 5, 7}

    @given(graphs(alphabet=("e",)), st.integers(0, 8))
    def test_matrix_powers(self, g, lmax):
        assert oracle_length_sets(g, lmax) == matrix_power_lengths(g, lmax)

    @given(graphs())
    def test_reach_is_union_of_lengths(self, g):
        assert oracle_reach(g) == {(x, y) for x, y, _ in oracle_length_sets(g, g.n)}


class TestRpq:
    def test_empty_word(self):
        g = graph(2, (), ("a",))
        assert oracle_rpq(g, regex_to_dfa("a*")) == {(0, 0), (1, 1)}
        assert oracle_rpq(g, regex_to_dfa("a")) == set()

    def test_single_edge(self):
        assert oracle_rpq(graph(2, {(0, "a", 1)}, ("a",)), regex_to_dfa("a")) == {(0, 1)}

    @given(graphs(acyclic=True), st.integers(0, 10_000))
    def test_enumeration_on_dags(self, g, seed):
        dfa = random_dfa(random.Random(seed), ("a", "b"), 3)
        assert oracle_rpq(g, dfa) == oracle_rpq_enum(g, dfa)


class TestCfl:
    def test_empty_word(self):
        assert oracle_cfl(graph(2, (), ("a", "b")), ANBN) == {(0, 0), (1, 1)}

    def test_anbn_chain(self):
        word = "aabb"
        g = graph(5, {(i, s, i + 1) for i, s in enumerate(word)}, ("a", "b"))
        got = oracle_cfl(g, ANBN)
        assert got == {(x, y) for x in range(5) for y in range(x, 5) if ANBN.accepts(word[x:y])}

    @given(graphs(alphabet=("(", ")"), acyclic=True))
    def test_dyck_enumeration(self, g):
        assert oracle_cfl(g, DYCK) == oracle_cfl_enum(g, DYCK)


class TestParikh:
    def test_one_edge(self):
        g = graph(2, {(0, "b", 1)}, ("a", "b"))
        assert (0, 1, (0, 1)) in oracle_parikh(g, 3)

    def test_labeled_two_cycle(self):
        g = graph(2, {(0, "a", 1), (1, "b", 0)}, ("a", "b"))
        got = {c for x, y, c in oracle_parikh(g, 7) if (x, y) == (0, 1)}
        assert got == {(1, 0), (2, 1), (3, 2), (4, 3)}

    @given(graphs(alphabet=("e",)), st.integers(0, 7))
    def test_single_symbol_is_lengths(self, g, lmax):
        assert {(x, y, c[0]) for x, y, c in oracle_parikh(g, lmax)} == oracle_length_sets(g, lmax)


class TestProducts:
    def test_synchronized_diagonal(self):
        c = graph(3, {(0, "e", 1), (1, "e", 2)})
        reached = product_bfs(explicit_product([c, c]), (0, 0))
        assert reached == {(0, 0), (1, 1), (2, 2)}

    def test_cartesian_grid(self):
        c = graph(3, {(0, "e", 1), (1, "e", 2)})
        reached = product_bfs(explicit_product([c, c], [(1, 0), (0, 1)]), (0, 0))
        assert reached == set(itertools.product(range(3), repeat=2))

    def test_labeled(self):
        g1 = graph(2, {(0, "a", 1)}, ("a", "b"))
        g2 = graph(2, {(0, "b", 1)}, ("a", "b"))
        assert not oracle_explicit_product([g1, g2], (0, 0), (1, 1), labeled=True)
        assert oracle_explicit_product([g1, g1], (0, 0), (1, 1), labeled=True)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            explicit_product([graph(50, ())] * 3, budget=OracleBudget(max_count=1000))

    def test_bad_budget(self):
        with pytest.raises(ValueError):
            OracleBudget(max_path_length=0)

    @given(st.lists(graphs(max_nodes=3, alphabet=("e",)), min_size=1, max_size=3), st.data())
    def test_bfs_and_deepening_agree(self, factors, data):
        m = len(factors)
        rules = data.draw(st.lists(st.tuples(*[st.integers(0, 1)] * m), min_size=1, max_size=3))
        prod_graph = explicit_product(factors, rules)
        for source in prod_graph:
            assert product_bfs(prod_graph, source) == product_deepening(prod_graph, source)


class TestEcrpq:
    def test_single_atom_is_rpq(self):
        dfa = regex_to_dfa("ab*", ("a", "b"))
        q = EcrpqQuery(("x", "y"), ("x", "y"), (("x", "p", "y"),), ((from_dfa(dfa), ("p",)),), ("a", "b"))
        g = graph(4, {(0, "a", 1), (1, "b", 2), (2, "b", 3), (0, "b", 3)}, ("a", "b"))
        assert oracle_ecrpq(from_dfa(dfa), q, [g]) == oracle_rpq(g, dfa)

    def test_two_routes_agree(self):
        rng = random.Random(12)
        for _ in range(30):
            q, plan = random_ecrpq(rng, ("a", "b"))
            copies = []
            for _ in range(plan.m):
                edges = {(u, rng.choice("ab"), v) for u in range(4) for v in range(u + 1, 4) if rng.random() < 0.4}
                copies.append(graph(4, edges, ("a", "b")))
            assert oracle_ecrpq(plan.automaton, q, copies) == oracle_ecrpq_naive(q, copies)


def test_dag_paths_rejects_cycles():
    with pytest.raises(ValueError):
        dag_paths(graph(2, {(0, "e", 1), (1, "e", 0)}))


def test_oracles_share_no_code_with_engines():
    tree = ast.parse(Path(oracle_module.__file__).read_text())
    imported = {node.module for node in ast.walk(tree) if isinstance(node, ast.ImportFrom)}
    engines = {"dynrpq", "dyncfl", "dyndist", "dynecrpq", "prodreach", "blockquery", "boolops", "gf2"}
    assert not {m for m in imported if m and m.split(".")[-1] in engines}
