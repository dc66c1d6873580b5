"""From-scratch reference evaluators.

Everything here recomputes answers directly from a graph with plain Python
sets and breadth-first search. None of it imports the incremental engines,
so a bug there cannot hide behind a matching bug here.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .errors import BudgetExceeded
from .graphstore import LabeledGraph
from .specs.dfa import Dfa
from .specs.grammar import CnfGrammar
from .specs.queries import EcrpqQuery, satisfies
from .specs.sync import PAD, SyncAutomaton


@dataclass(frozen=True)
class OracleBudget:
    max_path_length: int = 64
    max_count: int = 200_000

    def __post_init__(self) -> None:
        if self.max_path_length <= 0 or self.max_count <= 0:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = OracleBudget()


def _succ(g: LabeledGraph) -> dict[int, list[tuple[str, int]]]:
    out: dict[int, list[tuple[str, int]]] = {x: [] for x in range(g.n)}
    for u, s, v in sorted(g.edges):
        out[u].append((s, v))
    return out


def oracle_reach(g: LabeledGraph) -> set[tuple[int, int]]:
    """Reflexive reachability by BFS from every node."""
    succ = _succ(g)
    pairs = set()
    for x in range(g.n):
        seen = {x}
        queue = deque([x])
        while queue:
            a = queue.popleft()
            for _, b in succ[a]:
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        pairs |= {(x, y) for y in seen}
    return pairs


def oracle_is_acyclic(g: LabeledGraph) -> bool:
    reach = oracle_reach(g)
    return not any((v, u) in reach for u, _, v in g.edges)


def oracle_length_sets(g: LabeledGraph, lmax: int) -> set[tuple[int, int, int]]:
    """All ``(x, y, l)`` with an x-to-y path of length exactly ``l <= lmax``."""
    succ = {x: {b for _, b in out} for x, out in _succ(g).items()}
    result = set()
    for x in range(g.n):
        layer = {x}
        for length in range(lmax + 1):
            result |= {(x, y, length) for y in layer}
            layer = {b for a in layer for b in succ[a]}
            if not layer:
                break
    return result


def oracle_rpq(g: LabeledGraph, dfa: Dfa) -> set[tuple[int, int]]:
    """Pairs joined by a path whose label the DFA accepts (BFS on graph x automaton)."""
    succ = _succ(g)
    pairs = set()
    for x in range(g.n):
        start = (x, dfa.start)
        seen = {start}
        queue = deque([start])
        while queue:
            a, q = queue.popleft()
            if q in dfa.finals:
                pairs.add((x, a))
            for s, b in succ[a]:
                nxt = (b, dfa.step(q, s))
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return pairs


def dag_paths(g: LabeledGraph, budget: OracleBudget = DEFAULT_BUDGET
              ) -> dict[tuple[int, int], set[tuple[str, ...]]]:
    """Every path label between every pair of an acyclic graph (including empty labels)."""
    succ = _succ(g)
    labels: dict[tuple[int, int], set[tuple[str, ...]]] = {}
    count = 0
    for x in range(g.n):
        stack = [(x, ())]
        while stack:
            a, word = stack.pop()
            count += 1
            if count > budget.max_count:
                raise BudgetExceeded("too many paths to enumerate")
            if len(word) > g.n:
                raise ValueError("graph is not acyclic")
            labels.setdefault((x, a), set()).add(word)
            for s, b in succ[a]:
                stack.append((b, word + (s,)))
    return labels


def oracle_rpq_enum(g: LabeledGraph, dfa: Dfa) -> set[tuple[int, int]]:
    """Path-enumeration evaluator, valid on acyclic graphs only."""
    return {pair for pair, words in dag_paths(g).items() if any(dfa.accepts(w) for w in words)}


def oracle_cfl(g: LabeledGraph, cnf: CnfGrammar) -> set[tuple[int, int]]:
    """Worklist fixpoint of facts ``(X, u, v)``: some X-derivable word labels a u-v path."""
    facts: set[tuple[str, int, int]] = set()
    work: deque[tuple[str, int, int]] = deque()

    starting: dict[tuple[str, int], set[int]] = {}
    ending: dict[tuple[str, int], set[int]] = {}

    def add(fact: tuple[str, int, int]) -> None:
        if fact not in facts:
            facts.add(fact)
            work.append(fact)
            x, a, b = fact
            starting.setdefault((x, a), set()).add(b)
            ending.setdefault((x, b), set()).add(a)

    for u, s, v in g.edges:
        for x, a in cnf.unary:
            if a == s:
                add((x, u, v))
    by_left: dict[str, list[tuple[str, str]]] = {}
    by_right: dict[str, list[tuple[str, str]]] = {}
    for x, y, z in cnf.binary:
        by_left.setdefault(y, []).append((x, z))
        by_right.setdefault(z, []).append((x, y))
    while work:
        y, a, b = work.popleft()
        for x, z in by_left.get(y, []):
            for c in list(starting.get((z, b), ())):
                add((x, a, c))
        for x, w in by_right.get(y, []):
            for c in list(ending.get((w, a), ())):
                add((x, c, b))
    pairs = {(a, b) for x, a, b in facts if x == cnf.start}
    if cnf.start_eps:
        pairs |= {(x, x) for x in range(g.n)}
    return pairs


def oracle_cfl_enum(g: LabeledGraph, cnf: CnfGrammar) -> set[tuple[int, int]]:
    """Path enumeration plus CYK, acyclic graphs only."""
    return {pair for pair, words in dag_paths(g).items() if any(cnf.accepts(w) for w in words)}


def derives_form(cnf: CnfGrammar, x: str, form: Sequence[str | tuple[str]]) -> bool:
    """Does ``x`` derive the sentential form? Variables in ``form`` are given as 1-tuples."""
    n = len(form)
    if n == 0:
        return x == cnf.start and cnf.start_eps
    table: dict[tuple[int, int], set[str]] = {}
    for i, sym in enumerate(form):
        if isinstance(sym, tuple):
            table[(i, i + 1)] = {sym[0]}
        else:
            table[(i, i + 1)] = {v for v, a in cnf.unary if a == sym}
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span
            cell = set()
            for k in range(i + 1, j):
                left, right = table[(i, k)], table[(k, j)]
                if left and right:
                    cell |= {v for v, y, z in cnf.binary if y in left and z in right}
            table[(i, j)] = cell
    return x in table[(0, n)]


def oracle_cfl_relation(g: LabeledGraph, cnf: CnfGrammar, x: str, ys: Sequence[str]
                        ) -> set[tuple[int, ...]]:
    """Tuples ``(x1, y1, ..., xk+1, yk+1)`` with ``x =>* s1 Y1 s2 ... Yk sk+1`` and each
    ``si`` labelling an ``xi``-``yi`` path. Acyclic graphs only."""
    labels = dag_paths(g)
    pairs = sorted(labels)
    out = set()
    for choice in product(pairs, repeat=len(ys) + 1):
        word_sets = [labels[p] for p in choice]
        for words in product(*word_sets):
            form: list = list(words[0])
            for y, w in zip(ys, words[1:]):
                form.append((y,))
                form.extend(w)
            if derives_form(cnf, x, form):
                out.add(tuple(v for p in choice for v in p))
                break
    return out


def oracle_parikh(g: LabeledGraph, lmax: int) -> set[tuple[int, int, tuple[int, ...]]]:
    """``(x, y, counts)`` for walks of length ``<= lmax``; counts follow ``g.alphabet``."""
    k = len(g.alphabet)
    succ = _succ(g)
    index = {s: i for i, s in enumerate(g.alphabet)}
    result = set()
    for x in range(g.n):
        layer = {(x, (0,) * k)}
        for _ in range(lmax + 1):
            result |= {(x, y, vec) for y, vec in layer}
            nxt = set()
            for a, vec in layer:
                for s, b in succ[a]:
                    bumped = list(vec)
                    bumped[index[s]] += 1
                    nxt.add((b, tuple(bumped)))
            layer = nxt
            if not layer:
                break
    return result


def oracle_palindrome(g: LabeledGraph, x: int, y: int) -> bool:
    words = dag_paths(g).get((x, y), set())
    return any(w == w[::-1] for w in words)


# -- products ----------------------------------------------------------------

def explicit_product(factors: Sequence[LabeledGraph], rules: Sequence[Sequence[int]] | None = None,
                     labeled: bool = False, budget: OracleBudget = DEFAULT_BUDGET
                     ) -> dict[tuple[int, ...], set[tuple[int, ...]]]:
    """Materialize the product graph.

    Without ``labeled``: for every rule, factors with bit 1 take an edge and
    the others stay put (all-ones rules by default). With ``labeled``, all
    factors move along edges carrying the same symbol.
    """
    size = 1
    for f in factors:
        size *= f.n
    if size > budget.max_count:
        raise BudgetExceeded(f"product has {size} nodes")
    m = len(factors)
    if rules is None:
        rules = [(1,) * m]
    succ = [_succ(f) for f in factors]
    graph: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
    for node in product(*[range(f.n) for f in factors]):
        targets = set()
        if labeled:
            symbols = set.intersection(*[{s for s, _ in succ[i][node[i]]} for i in range(m)]) if m else set()
            for s in symbols:
                options = [[b for t, b in succ[i][node[i]] if t == s] for i in range(m)]
                targets |= set(product(*options))
        else:
            for rule in rules:
                options = [[b for _, b in succ[i][node[i]]] if rule[i] else [node[i]] for i in range(m)]
                targets |= set(product(*options))
        graph[node] = targets
    return graph


def product_bfs(graph: dict[tuple[int, ...], set[tuple[int, ...]]], source: tuple[int, ...]) -> set[tuple[int, ...]]:
    seen = {source}
    queue = deque([source])
    while queue:
        a = queue.popleft()
        for b in graph[a]:
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return seen


def product_deepening(graph: dict[tuple[int, ...], set[tuple[int, ...]]], source: tuple[int, ...]) -> set[tuple[int, ...]]:
    """Reachable set by iterative deepening on walk length; second opinion for BFS."""
    reached = {source}
    frontier = {source}
    for _ in range(len(graph)):
        frontier = {b for a in frontier for b in graph[a]}
        new = frontier - reached
        if not new:
            break
        reached |= new
        frontier = new
    return reached


def oracle_explicit_product(factors: Sequence[LabeledGraph], x: Sequence[int], y: Sequence[int],
                            rules: Sequence[Sequence[int]] | None = None, labeled: bool = False,
                            budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    graph = explicit_product(factors, rules, labeled, budget)
    return tuple(y) in product_bfs(graph, tuple(x))


def oracle_gf2_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Z2 as log2 of the size of the row span."""
    span = {tuple(0 for _ in rows[0])} if rows and rows[0] else {()}
    for r in rows:
        r = tuple(r)
        span |= {tuple(a ^ b for a, b in zip(s, r)) for s in span}
    return len(span).bit_length() - 1


def oracle_gf2_solvable(B: Sequence[Sequence[int]], d: Sequence[int]) -> bool:
    k = len(B[0]) if B else 0
    for xs in product((0, 1), repeat=k):
        if all(sum(b * x for b, x in zip(row, xs)) % 2 == di for row, di in zip(B, d)):
            return True
    return False


# -- conjunctive queries ------------------------------------------------------

def _assignments(query: EcrpqQuery, per_atom: Sequence[Iterable[tuple[int, int, object]]]):
    """Yield (assignment, payloads) for consistent choices of one tuple per atom."""
    options = [list(opts) for opts in per_atom]

    def rec(i: int, env: dict[str, int], payloads: list):
        if i == len(query.atoms):
            yield dict(env), list(payloads)
            return
        x, _, y = query.atoms[i]
        for a, b, payload in options[i]:
            if env.get(x, a) != a:
                continue
            bound_x = x not in env
            env[x] = a
            if env.get(y, b) != b:
                if bound_x:
                    del env[x]
                continue
            bound_y = y not in env
            env[y] = b
            payloads.append(payload)
            yield from rec(i + 1, env, payloads)
            payloads.pop()
            if bound_y:
                del env[y]
            if bound_x:
                del env[x]

    yield from rec(0, {}, [])


def _heads(query: EcrpqQuery, accepted: Iterable[dict[str, int]]) -> set[tuple[int, ...]]:
    out = set()
    for env in accepted:
        out.add(tuple(env[z] for z in query.head))
    return out


def _unary_nfa(query: EcrpqQuery, atom: int) -> SyncAutomaton | None:
    """Conjunction of all unary relations on one path, as a 1-tape product; None if unconstrained."""
    path = query.atoms[atom][1]
    rels = [rel for rel, omega in query.relations if omega == (path,)]
    if not rels:
        return None
    start = tuple(r.start for r in rels)
    seen = {start: 0}
    order = [start]
    trans = set()
    i = 0
    while i < len(order):
        cur = order[i]
        symbols = set.intersection(*[{col[0] for p, col, _ in r.transitions if p == c}
                                     for r, c in zip(rels, cur)])
        for s in symbols:
            succs = [[q for p, col, q in r.transitions if p == c and col[0] == s] for r, c in zip(rels, cur)]
            for nxt in product(*succs):
                if nxt not in seen:
                    seen[nxt] = len(order)
                    order.append(nxt)
                trans.add((seen[cur], (s,), seen[nxt]))
        i += 1
    finals = frozenset(seen[c] for c in order if all(q in r.finals for r, q in zip(rels, c)))
    return SyncAutomaton(1, len(order), 0, finals, frozenset(trans))


def oracle_crpq(query: EcrpqQuery, g: LabeledGraph, lmax: int) -> set[tuple[int, ...]]:
    """Bounded-witness CRPQ semantics: every atom path has length at most ``lmax``."""
    if not query.is_crpq:
        raise ValueError("query has relations of arity > 1")
    k = len(g.alphabet)
    index = {s: i for i, s in enumerate(g.alphabet)}
    succ = _succ(g)
    per_atom = []
    for j in range(len(query.atoms)):
        nfa = _unary_nfa(query, j)
        found = set()
        for x in range(g.n):
            start = (x, nfa.start if nfa else 0, (0,) * k)
            layer = {start}
            seen = {start}
            for step in range(lmax + 1):
                for a, q, vec in layer:
                    if nfa is None or q in nfa.finals:
                        found.add((x, a, vec))
                if step == lmax:
                    break
                nxt = set()
                for a, q, vec in layer:
                    for s, b in succ[a]:
                        bumped = list(vec)
                        bumped[index[s]] += 1
                        targets = [0] if nfa is None else [t for p, col, t in nfa.transitions
                                                           if p == q and col[0] == s]
                        for t in targets:
                            item = (b, t, tuple(bumped))
                            if item not in seen:
                                seen.add(item)
                                nxt.add(item)
                layer = nxt
                if not layer:
                    break
        per_atom.append(found)
    accepted = []
    for env, vecs in _assignments(query, per_atom):
        ell = [c for v in vecs for c in v]
        if satisfies(query.A, query.b, ell):
            accepted.append(env)
    return _heads(query, accepted)


def oracle_ecrpq(plan_automaton: SyncAutomaton, query: EcrpqQuery,
                 copies: Sequence[LabeledGraph], budget: OracleBudget = DEFAULT_BUDGET) -> set[tuple[int, ...]]:
    """Product of the acyclic copies with a single m-tape automaton, Parikh counts per tape."""
    m = len(copies)
    k = len(query.alphabet)
    index = {s: i for i, s in enumerate(query.alphabet)}
    succ = [_succ(c) for c in copies]
    n = copies[0].n if copies else 0
    by_state: dict[int, list[tuple[tuple, int]]] = {}
    for p, col, q in plan_automaton.transitions:
        by_state.setdefault(p, []).append((col, q))
    results: dict[tuple[int, ...], set[tuple]] = {}
    count = 0
    for xs in product(range(n), repeat=m):
        start = (xs, plan_automaton.start, (0,) * (m * k))
        seen = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            count += 1
            if count > budget.max_count:
                raise BudgetExceeded("ECRPQ product too large")
            nodes, q, ls = cur
            if q in plan_automaton.finals:
                results.setdefault(xs, set()).add((nodes, ls))
            for col, q2 in by_state.get(q, []):
                if all(s is PAD for s in col):
                    continue
                options = []
                for i, s in enumerate(col):
                    if s is PAD:
                        options.append([nodes[i]])
                    else:
                        options.append([b for t, b in succ[i][nodes[i]] if t == s])
                bumped = list(ls)
                for i, s in enumerate(col):
                    if s is not PAD:
                        bumped[i * k + index[s]] += 1
                for nxt_nodes in product(*options):
                    item = (tuple(nxt_nodes), q2, tuple(bumped))
                    if item not in seen:
                        seen.add(item)
                        stack.append(item)
    accepted = []
    # every atom i reads tape i, so the joint tuple fixes all atoms at once
    for xs, found in results.items():
        for ys, ls in found:
            if not satisfies(query.A, query.b, ls):
                continue
            env: dict[str, int] = {}
            ok = True
            for (x, _, y), a, b in zip(query.atoms, xs, ys):
                if env.setdefault(x, a) != a or env.setdefault(y, b) != b:
                    ok = False
                    break
            if ok:
                accepted.append(env)
    return _heads(query, accepted)


def oracle_ecrpq_naive(query: EcrpqQuery, copies: Sequence[LabeledGraph],
                       budget: OracleBudget = DEFAULT_BUDGET) -> set[tuple[int, ...]]:
    """Enumerate one path per atom in its own acyclic copy, then test each relation directly."""
    paths_per_copy = []
    for c in copies:
        found = []
        for (x, y), words in dag_paths(c, budget).items():
            for w in words:
                found.append((x, y, w))
        paths_per_copy.append(found)
    position = {p: i for i, p in enumerate(query.paths)}
    k = len(query.alphabet)
    accepted = []
    for env, words in _assignments(query, paths_per_copy):
        if not all(rel.accepts([words[position[p]] for p in omega]) for rel, omega in query.relations):
            continue
        ell = [w.count(s) for w in words for s in query.alphabet]
        assert len(ell) == k * len(words)
        if satisfies(query.A, query.b, ell):
            accepted.append(env)
    return _heads(query, accepted)
