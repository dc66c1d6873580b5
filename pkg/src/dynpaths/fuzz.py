"""Randomized differential checks of every engine against the from-scratch oracles.

Each suite runs one trial from a seeded ``random.Random`` and raises
:class:`Mismatch` on the first disagreement.  Default sizes follow the
acceptance workloads; ``max_nodes`` caps the node count of each graph.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .blockquery import block_query_answer, block_query_init, block_query_update
from .dyncfl import cfl_init, cfl_query, cfl_update
from .dynecrpq import crpq_eval, crpq_init, crpq_insert, ecrpq_compile, ecrpq_eval, ecrpq_init, ecrpq_update
from .dyndist import (acydist_init, acydist_update, insdist_init, insdist_insert, parikh_init, parikh_insert,
                      undir_has_length, undir_init, undir_update)
from .dynrpq import RpqState, rpq_init, rpq_insert, rpq_query
from .errors import CycleWouldForm
from .gf2 import Gf2Matrix, gf2_rank, gf2_solvable
from .graphstore import LabeledGraph, Modification, TcState, apply_mod, tc_update
from .oracle import (dag_paths, explicit_product, oracle_cfl, oracle_cfl_relation, oracle_crpq, oracle_ecrpq,
                     oracle_gf2_rank, oracle_gf2_solvable, oracle_length_sets, oracle_palindrome, oracle_parikh,
                     oracle_reach, oracle_rpq, product_bfs)
from .prodreach import (FactorMod, RuleFlip, labeled_product_init, labeled_product_reach, labeled_product_update,
                        neps_init, neps_reach, neps_system, neps_update, palindrome_init, palindrome_reach,
                        palindrome_update, product_reach)
from .specs.dfa import Dfa
from .specs.grammar import CnfGrammar, cnf_from_rules, to_cnf
from .specs.queries import EcrpqQuery, NepsSpec
from .specs.sync import equal_length, equality, from_dfa, prefix_relation


class Mismatch(AssertionError):
    """An engine disagreed with its oracle."""


def expect(cond: bool, message: str) -> None:
    if not cond:
        raise Mismatch(message)


def _cap(n: int, max_nodes: int | None) -> int:
    return n if max_nodes is None else max(1, min(n, max_nodes))


# -- generators ---------------------------------------------------------------------

def random_dfa(rng: random.Random, alphabet: Sequence[str], n_states: int) -> Dfa:
    delta = tuple(tuple(rng.randrange(n_states) for _ in alphabet) for _ in range(n_states))
    finals = frozenset(q for q in range(n_states) if rng.random() < 0.5)
    return Dfa(n_states, tuple(alphabet), delta, 0, finals)


def random_cnf(rng: random.Random, alphabet: Sequence[str], n_vars: int) -> CnfGrammar:
    names = [f"V{i}" for i in range(n_vars)]
    start_eps = rng.random() < 0.3
    rhs_vars = names[1:] if start_eps and n_vars > 1 else names
    binary = {(rng.choice(names), rng.choice(rhs_vars), rng.choice(rhs_vars))
              for _ in range(rng.randint(1, 2 * n_vars))}
    unary = {(rng.choice(names), rng.choice(alphabet)) for _ in range(rng.randint(1, n_vars + 1))}
    if start_eps and n_vars == 1:
        binary = set()
    return cnf_from_rules(names[0], binary, unary, start_eps, tuple(alphabet))


DYCK = to_cnf("rule S -> S S | ( S ) | eps").with_terminals(("(", ")"))
ANBN = to_cnf("rule S -> a S b | eps").with_terminals(("a", "b"))


def random_modification(rng: random.Random, g: LabeledGraph, p_delete: float = 0.35,
                        forward_bias: float = 0.0) -> Modification:
    """Delete an existing edge with probability ``p_delete``, else insert a random one.

    With ``forward_bias`` the insertion goes from the smaller to the larger
    node id that often, which keeps random graphs mostly acyclic.
    """
    edges = g.sorted_edges()
    if edges and rng.random() < p_delete:
        u, sym, v = rng.choice(edges)
        return Modification.delete(sym, u, v)
    u, v = rng.randrange(g.n), rng.randrange(g.n)
    if rng.random() < forward_bias and u > v:
        u, v = v, u
    return Modification.ins(rng.choice(g.alphabet), u, v)


def closes_cycle(g: LabeledGraph, m: Modification) -> bool:
    return m.is_insert and (m.u == m.v or (m.v, m.u) in oracle_reach(g))


# -- suites -------------------------------------------------------------------------

def trial_tc(rng: random.Random, max_nodes: int | None = None, nodes: int = 12, steps: int = 40) -> int:
    n = rng.randint(1, _cap(nodes, max_nodes))
    g = LabeledGraph.empty(n, ("e",))
    tc = TcState.initial(n)
    checked = 0
    for _ in range(rng.randint(1, steps)):
        m = random_modification(rng, g, 0.3, forward_bias=0.8)
        try:
            tc2 = tc_update(tc, g, m)
        except CycleWouldForm:
            expect(closes_cycle(g, m), f"tc rejected {m} without a cycle")
            continue
        expect(not closes_cycle(g, m), f"tc accepted cycle-closing {m}")
        g = apply_mod(g, m)
        tc = tc2
        expect(tc.pairs() == oracle_reach(g), f"tc differs after {m}")
        checked += 1
    return checked


def trial_rpq(rng: random.Random, max_nodes: int | None = None, nodes: int = 10, states: int = 5,
              symbols: int = 3, steps: int = 30) -> int:
    n = rng.randint(1, _cap(nodes, max_nodes))
    alphabet = tuple("abc"[:rng.randint(1, symbols)])
    dfa = random_dfa(rng, alphabet, rng.randint(1, states))
    s = rpq_init(dfa, n)
    g = LabeledGraph.empty(n, alphabet)
    expect(rpq_query(s) == oracle_rpq(g, dfa), "rpq differs on the empty graph")
    for _ in range(rng.randint(1, steps)):
        sym, u, v = rng.choice(alphabet), rng.randrange(n), rng.randrange(n)
        s = rpq_insert(s, sym, u, v)
        g = apply_mod(g, Modification.ins(sym, u, v))
        expect(rpq_query(s) == oracle_rpq(g, dfa), f"rpq differs after inserting {sym} {u}->{v}")
    return 1


def trial_rpq_locality(rng: random.Random, max_nodes: int | None = None, nodes: int = 10,
                       states: int = 5, symbols: int = 3) -> int:
    """Two states that agree on the tuples over {x, y, u, v} agree there after the same insertion."""
    n = rng.randint(2, max(2, _cap(nodes, max_nodes)))
    alphabet = tuple("abc"[:rng.randint(1, symbols)])
    dfa = random_dfa(rng, alphabet, rng.randint(1, states))
    q = dfa.n_states
    R1 = np.random.default_rng(rng.getrandbits(32)).random((q, q, n, n)) < 0.3
    x, y, u, v = (rng.randrange(n) for _ in range(4))
    keep = np.zeros((n, n), dtype=bool)
    local = sorted({x, y, u, v})
    keep[np.ix_(local, local)] = True
    noise = np.random.default_rng(rng.getrandbits(32)).random((q, q, n, n)) < 0.5
    R2 = np.where(keep[None, None], R1, noise)
    sym = rng.choice(alphabet)
    a = rpq_insert(RpqState(dfa, R1), sym, u, v).R
    b = rpq_insert(RpqState(dfa, R2), sym, u, v).R
    expect(bool(np.array_equal(a[:, :, x, y], b[:, :, x, y])), f"insert {u}->{v} read outside {{x,y,u,v}}")
    return 1


def trial_cfl(rng: random.Random, max_nodes: int | None = None, nodes: int = 8, steps: int = 25,
              relation_check: bool = False) -> int:
    kind = rng.randrange(3)
    if kind == 0:
        grammar, alphabet = DYCK, ("(", ")")
    elif kind == 1:
        grammar, alphabet = ANBN, ("a", "b")
    else:
        alphabet = ("a", "b")
        grammar = random_cnf(rng, alphabet, rng.randint(1, 6))
    n = rng.randint(1, _cap(nodes, max_nodes))
    s = cfl_init(grammar, n, alphabet)
    for _ in range(rng.randint(1, steps)):
        m = random_modification(rng, s.graph, 0.3, forward_bias=0.7)
        try:
            s2 = cfl_update(s, m)
        except CycleWouldForm:
            expect(closes_cycle(s.graph, m), f"cfl rejected {m} without a cycle")
            continue
        s = s2
        expect(cfl_query(s) == oracle_cfl(s.graph, grammar), f"cfl differs after {m}")
    if relation_check:
        for X, Y in product(grammar.variables[:3], grammar.variables[:3]):
            expect(s.relation(X, Y) == oracle_cfl_relation(s.graph, grammar, X, [Y]),
                   f"stored relation for {X} =>* .. {Y} .. differs")
    return 1


def trial_cfl_relation(rng: random.Random, max_nodes: int | None = None) -> int:
    return trial_cfl(rng, max_nodes, nodes=6, steps=12, relation_check=True)


def trial_dist_ins(rng: random.Random, max_nodes: int | None = None, nodes: int = 8, lmax: int = 20,
                   steps: int = 15) -> int:
    n = rng.randint(1, _cap(nodes, max_nodes))
    L = rng.randint(0, lmax)
    s = insdist_init(n, L)
    for _ in range(rng.randint(1, steps)):
        u, v = rng.randrange(n), rng.randrange(n)
        s = insdist_insert(s, u, v)
        expect(s.lengths() == oracle_length_sets(s.graph, L), f"lengths differ after inserting {u}->{v}")
    return 1


def trial_dist_acyclic(rng: random.Random, max_nodes: int | None = None, nodes: int = 8, steps: int = 30) -> int:
    n = rng.randint(1, _cap(nodes, max_nodes))
    s = acydist_init(n, ("a", "b"))
    for _ in range(rng.randint(1, steps)):
        m = random_modification(rng, s.graph, 0.35, forward_bias=0.7)
        try:
            s2 = acydist_update(s, m)
        except CycleWouldForm:
            expect(closes_cycle(s.graph, m), f"rejected {m} without a cycle")
            continue
        s = s2
        expect(s.lengths() == oracle_length_sets(s.graph, n), f"acyclic lengths differ after {m}")
    return 1


def trial_dist_undirected(rng: random.Random, max_nodes: int | None = None, nodes: int = 8,
                          steps: int = 20) -> int:
    n = rng.randint(1, _cap(nodes, max_nodes))
    s = undir_init(n)
    top = 2 * n + 2
    for _ in range(rng.randint(1, steps)):
        m = random_modification(rng, s.graph, 0.35)
        s = undir_update(s, m)
        got = {(x, y, l) for x in range(n) for y in range(n) for l in range(top + 1)
               if undir_has_length(s, x, y, l)}
        expect(got == oracle_length_sets(s.graph, top), f"parity lengths differ after {m}")
    return 1


def _chain(word: Sequence[str], alphabet: Sequence[str]) -> LabeledGraph:
    return LabeledGraph(len(word) + 1, tuple(alphabet), True,
                        frozenset((i, sym, i + 1) for i, sym in enumerate(word)))


def in_abc_blocks(word: Sequence[str]) -> bool:
    k, r = divmod(len(word), 3)
    return r == 0 and tuple(word) == ("a",) * k + ("b",) * k + ("c",) * k


def trial_blocks(rng: random.Random, max_nodes: int | None = None, max_block: int = 5) -> int:
    """``a^k b^k c^k`` on a labeled chain built edge by edge, then on random DAG edits."""
    k = rng.randint(0, max_block)
    lens = [k + rng.choice((0, 0, 1, -1)) if k else k for _ in range(3)]
    word = ["a"] * max(lens[0], 0) + ["b"] * max(lens[1], 0) + ["c"] * max(lens[2], 0)
    if rng.random() < 0.3 and word:
        i = rng.randrange(len(word))
        word[i] = rng.choice("abc")
    g = _chain(word, "abc")
    s = block_query_init(g.n, "abc")
    order = g.sorted_edges()
    rng.shuffle(order)
    for u, sym, v in order:
        s = block_query_update(s, Modification.ins(sym, u, v))
    want = {(x, y) for x in range(g.n) for y in range(x, g.n) if in_abc_blocks(word[x:y])}
    expect(block_query_answer(s) == want, f"a^k b^k c^k differs on chain {''.join(word)}")
    for _ in range(6):
        m = random_modification(rng, s.graph, 0.4, forward_bias=0.9)
        if closes_cycle(s.graph, m):
            continue
        s = block_query_update(s, m)
        want = {pair for pair, words in dag_paths(s.graph).items() if any(in_abc_blocks(w) for w in words)}
        expect(block_query_answer(s) == want, f"a^k b^k c^k differs after {m}")
    return 1


def trial_parikh(rng: random.Random, max_nodes: int | None = None, nodes: int = 6, symbols: int = 3,
                 lmax: int = 12, steps: int = 8) -> int:
    n = rng.randint(1, _cap(nodes, max_nodes))
    k = rng.randint(1, symbols)
    alphabet = tuple("abc"[:k])
    # keep the vector box modest for three symbols
    L = rng.randint(0, lmax if k < 3 else min(lmax, 8))
    s = parikh_init(n, alphabet, L)
    single = insdist_init(n, L) if k == 1 else None
    for _ in range(rng.randint(1, steps)):
        sym, u, v = rng.choice(alphabet), rng.randrange(n), rng.randrange(n)
        s = parikh_insert(s, sym, u, v)
        expect(s.vectors() == oracle_parikh(s.graph, L), f"Parikh vectors differ after {sym} {u}->{v}")
        if single is not None:
            single = insdist_insert(single, u, v)
            flat = {(x, y, vec[0]) for x, y, vec in s.vectors()}
            expect(flat == single.lengths(), "one-symbol Parikh vectors differ from plain lengths")
    return 1


def random_crpq(rng: random.Random, alphabet: tuple[str, ...], atoms_max: int = 2, states: int = 3,
                rows: int = 2) -> EcrpqQuery:
    m = rng.randint(1, atoms_max)
    atoms = tuple((f"x{i}", f"p{i}", f"y{i}") for i in range(m))
    if m == 2 and rng.random() < 0.5:
        atoms = (("x0", "p0", "y0"), ("y0", "p1", "y1"))
    rels = tuple((from_dfa(random_dfa(rng, alphabet, rng.randint(1, states))), (f"p{i}",))
                 for i in range(m) if rng.random() < 0.85)
    width = len(alphabet) * m
    A = tuple(tuple(rng.randint(-1, 1) for _ in range(width)) for _ in range(rng.randint(0, rows)))
    b = tuple(rng.randint(-1, 1) for _ in A)
    names = sorted({a[0] for a in atoms} | {a[2] for a in atoms})
    head = tuple(rng.sample(names, rng.randint(1, len(names))))
    return EcrpqQuery(tuple(names), head, atoms, rels, alphabet, A, b)


def trial_crpq(rng: random.Random, max_nodes: int | None = None, nodes: int = 6, lmax: int = 6,
               steps: int = 8) -> int:
    alphabet = tuple("ab"[:rng.randint(1, 2)])
    q = random_crpq(rng, alphabet)
    n = rng.randint(1, _cap(nodes, max_nodes))
    L = rng.randint(1, lmax)
    s = crpq_init(q, n, L, alphabet)
    before: set = crpq_eval(s)
    expect(before == oracle_crpq(q, s.graph, L), "crpq differs on the empty graph")
    for _ in range(rng.randint(1, steps)):
        sym, u, v = rng.choice(alphabet), rng.randrange(n), rng.randrange(n)
        s = crpq_insert(s, sym, u, v)
        got = crpq_eval(s)
        expect(got == oracle_crpq(q, s.graph, L), f"crpq differs after inserting {sym} {u}->{v}")
        expect(before <= got, "crpq answers shrank under an insertion")
        before = got
    return 1


def trial_crpq_stability(rng: random.Random, max_nodes: int | None = None, nodes: int = 3) -> int:
    """Answers at the default witness bound do not change when the bound doubles."""
    alphabet = ("a",) if rng.random() < 0.5 else ("a", "b")
    q = random_crpq(rng, alphabet, atoms_max=1 if len(alphabet) == 2 else 2, states=2)
    n = rng.randint(1, _cap(nodes, max_nodes))
    base = crpq_init(q, n, None, alphabet)
    doubled = crpq_init(q, n, 2 * base.lmax, alphabet)
    for _ in range(rng.randint(1, 2 * n)):
        sym, u, v = rng.choice(alphabet), rng.randrange(n), rng.randrange(n)
        base = crpq_insert(base, sym, u, v)
        doubled = crpq_insert(doubled, sym, u, v)
    expect(crpq_eval(base) == crpq_eval(doubled), f"answers moved when the bound doubled from {base.lmax}")
    return 1


def random_ecrpq(rng: random.Random, alphabet: tuple[str, ...], plan_states: int = 4):
    while True:
        m = rng.randint(1, 2)
        atoms = tuple((f"x{i}", f"p{i}", f"y{i}") for i in range(m))
        if m == 2 and rng.random() < 0.5:
            atoms = (("x0", "p0", "y0"), ("y0", "p1", "y1"))
        rels = []
        if m == 2 and rng.random() < 0.7:
            rel = rng.choice([equal_length(alphabet), equality(alphabet), prefix_relation(alphabet)])
            rels.append((rel, ("p0", "p1")))
        for i in range(m):
            if rng.random() < 0.5:
                rels.append((from_dfa(random_dfa(rng, alphabet, rng.randint(1, 2))), (f"p{i}",)))
        width = len(alphabet) * m
        A = tuple(tuple(rng.randint(-1, 1) for _ in range(width)) for _ in range(rng.randint(0, 2)))
        b = tuple(rng.randint(-1, 1) for _ in A)
        names = sorted({a[0] for a in atoms} | {a[2] for a in atoms})
        head = tuple(rng.sample(names, rng.randint(0, len(names))))
        q = EcrpqQuery(tuple(names), head, atoms, tuple(rels), alphabet, A, b)
        plan = ecrpq_compile(q)
        if plan.automaton.n_states <= plan_states:
            return q, plan


def trial_ecrpq(rng: random.Random, max_nodes: int | None = None, nodes: int = 5, steps: int = 12) -> int:
    alphabet = tuple("ab"[:rng.randint(1, 2)])
    q, plan = random_ecrpq(rng, alphabet)
    n = rng.randint(2, max(2, _cap(nodes, max_nodes)))
    s = ecrpq_init(plan, n, alphabet)
    expect(ecrpq_eval(s) == oracle_ecrpq(plan.automaton, q, s.copies), "ecrpq differs on empty copies")
    for _ in range(rng.randint(1, steps)):
        copy = rng.randrange(plan.m)
        m = random_modification(rng, s.copies[copy], 0.35, forward_bias=0.7)
        try:
            s2 = ecrpq_update(s, copy, m)
        except CycleWouldForm:
            expect(closes_cycle(s.copies[copy], m), f"ecrpq rejected {m} without a cycle")
            continue
        s = s2
        expect(ecrpq_eval(s) == oracle_ecrpq(plan.automaton, q, s.copies), f"ecrpq differs after {m} on copy {copy}")
    return 1


# -- products -------------------------------------------------------------------------

def _reachable_from(graphs: Sequence[LabeledGraph], rules=None, labeled: bool = False):
    graph = explicit_product(graphs, rules, labeled)
    return lambda xs: product_bfs(graph, tuple(xs))


def _sample_pairs(rng: random.Random, sizes: Sequence[int], reach, count: int):
    nodes = list(product(*[range(n) for n in sizes]))
    for _ in range(count):
        xs = rng.choice(nodes)
        reached = sorted(reach(xs))
        ys = rng.choice(reached) if reached and rng.random() < 0.5 else rng.choice(nodes)
        yield xs, ys, ys in reached


def _factor_graphs(regime: str, sizes: Sequence[int]) -> list[LabeledGraph]:
    return [LabeledGraph.empty(n, ("e",), directed=regime != "undirected") for n in sizes]


def trial_product(rng: random.Random, max_nodes: int | None = None, nodes: int = 4, factors: int = 3,
                  steps: int = 10, samples: int = 24, regime: str | None = None) -> int:
    regime = regime or rng.choice(("insert-only", "acyclic", "undirected"))
    m = rng.randint(2, factors)
    sizes = [rng.randint(1, _cap(nodes, max_nodes)) for _ in range(m)]
    s = neps_init(NepsSpec(m, ((1,) * m,)), regime, sizes)
    for _ in range(rng.randint(1, steps)):
        i = rng.randrange(m)
        p_del = 0.0 if regime == "insert-only" else 0.3
        mod = random_modification(rng, s.factors[i].graph, p_del, forward_bias=0.6 if regime == "acyclic" else 0)
        try:
            s = neps_update(s, FactorMod(i, mod))
        except CycleWouldForm:
            continue
        reach = _reachable_from(s.graphs)
        for xs, ys, want in _sample_pairs(rng, sizes, reach, samples):
            expect(product_reach(s.factors, xs, ys) == want, f"product ({regime}) differs for {xs} -> {ys}")
    return 1


def trial_neps(rng: random.Random, regime: str, max_nodes: int | None = None, nodes: int = 4,
               factors: int = 3, rules: int = 3, steps: int = 12, samples: int = 24) -> int:
    m = rng.randint(1, factors)
    sizes = [rng.randint(1, _cap(nodes, max_nodes)) for _ in range(m)]
    k = rng.randint(1, rules)
    spec = NepsSpec(m, tuple(tuple(rng.randint(0, 1) for _ in range(m)) for _ in range(k)))
    s = neps_init(spec, regime, sizes)
    for _ in range(rng.randint(1, steps)):
        if rng.random() < 0.2:
            s = neps_update(s, RuleFlip(rng.randrange(k), rng.randrange(m)))
        else:
            i = rng.randrange(m)
            p_del = 0.0 if regime == "insert-only" else 0.3
            bias = 0.6 if regime == "acyclic" else 0.0
            mod = random_modification(rng, s.factors[i].graph, p_del, forward_bias=bias)
            try:
                s = neps_update(s, FactorMod(i, mod))
            except CycleWouldForm:
                continue
        reach = _reachable_from(s.graphs, s.spec.rules)
        for xs, ys, want in _sample_pairs(rng, sizes, reach, samples):
            expect(neps_reach(s, xs, ys) == want, f"neps ({regime}, rules {s.spec.rules}) differs for {xs} -> {ys}")
            if regime == "undirected":
                B, d, _ = neps_system(s, xs, ys)
                if B.cols and B.n_rows:
                    expect(gf2_solvable(B, d) == oracle_gf2_solvable(B.to_lists(), d),
                           "parity system solvability differs from enumeration")
    return 1


def trial_labeled_product(rng: random.Random, max_nodes: int | None = None, nodes: int = 4,
                          factors: int = 3, steps: int = 10, samples: int = 24) -> int:
    m = rng.randint(1, factors)
    sizes = [rng.randint(1, _cap(nodes, max_nodes)) for _ in range(m)]
    alphabet = ("a", "b")
    s = labeled_product_init(sizes, alphabet)
    for _ in range(rng.randint(1, steps)):
        i = rng.randrange(m)
        g = LabeledGraph(sizes[i], alphabet, True, s.inner.copies[i].edges)
        mod = random_modification(rng, g, 0.3, forward_bias=0.6)
        try:
            s = labeled_product_update(s, i, mod)
        except CycleWouldForm:
            continue
        graphs = [LabeledGraph(n, alphabet, True, s.inner.copies[i].edges) for i, n in enumerate(sizes)]
        reach = _reachable_from(graphs, labeled=True)
        for xs, ys, want in _sample_pairs(rng, sizes, reach, samples):
            expect(labeled_product_reach(s, xs, ys) == want, f"labeled product differs for {xs} -> {ys}")
    return 1


def trial_gf2(rng: random.Random, max_nodes: int | None = None, size: int = 6) -> int:
    r, c = rng.randint(1, size), rng.randint(1, size)
    rows = [[rng.randint(0, 1) for _ in range(c)] for _ in range(r)]
    M = Gf2Matrix.from_lists(rows)
    rank = gf2_rank(M)
    expect(rank == oracle_gf2_rank(rows), f"rank of {rows} differs")
    # replacing a row by a combination that keeps it with coefficient 1 preserves the rank
    i = rng.randrange(r)
    combo = M.rows[i]
    for j in range(r):
        if j != i and rng.random() < 0.5:
            combo ^= M.rows[j]
    expect(gf2_rank(M.with_row(i, combo)) == rank, "row replacement changed the rank")
    d = [rng.randint(0, 1) for _ in range(r)]
    expect(gf2_solvable(M, d) == oracle_gf2_solvable(rows, d), "solvability differs from enumeration")
    return 1


def trial_palindrome(rng: random.Random, max_nodes: int | None = None, nodes: int = 6, steps: int = 12) -> int:
    n = rng.randint(1, _cap(nodes, max_nodes))
    s = palindrome_init(n, ("a", "b"))
    for _ in range(rng.randint(1, steps)):
        m = random_modification(rng, s.graph, 0.3, forward_bias=0.7)
        try:
            s = palindrome_update(s, m)
        except CycleWouldForm:
            continue
    for x in range(n):
        for y in range(n):
            expect(palindrome_reach(s, x, y) == oracle_palindrome(s.graph, x, y), f"palindrome differs for {x} -> {y}")
    return 1


@dataclass(frozen=True)
class Suite:
    name: str
    run: Callable[..., int]


SUITES: dict[str, Suite] = {s.name: s for s in [
    Suite("tc", trial_tc),
    Suite("rpq", trial_rpq),
    Suite("rpq-locality", trial_rpq_locality),
    Suite("cfl", trial_cfl),
    Suite("cfl-relation", trial_cfl_relation),
    Suite("dist-ins", trial_dist_ins),
    Suite("dist-acyclic", trial_dist_acyclic),
    Suite("dist-undirected", trial_dist_undirected),
    Suite("blocks", trial_blocks),
    Suite("parikh", trial_parikh),
    Suite("crpq", trial_crpq),
    Suite("crpq-stability", trial_crpq_stability),
    Suite("ecrpq", trial_ecrpq),
    Suite("product", trial_product),
    Suite("neps-insert-only", lambda rng, max_nodes=None: trial_neps(rng, "insert-only", max_nodes)),
    Suite("neps-acyclic", lambda rng, max_nodes=None: trial_neps(rng, "acyclic", max_nodes)),
    Suite("neps-undirected", lambda rng, max_nodes=None: trial_neps(rng, "undirected", max_nodes)),
    Suite("labeled-product", trial_labeled_product),
    Suite("gf2", trial_gf2),
    Suite("palindrome", trial_palindrome),
]}


def trial_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index
