"""Extended conjunctive path queries with occurrence constraints.

ECRPQs run over ``m`` acyclic copies of the graph, one path per copy.  The
query's regular relations are merged into one synchronous ``m``-tape
automaton; for each state pair the engine keeps tuples
``(xs, ys, counts)`` of start nodes, end nodes and per-path symbol counts
for which the automaton can move between the two states reading the labels
of paths ``xs[i] -> ys[i]``.

CRPQs (only unary relations) are handled on arbitrary graphs under
insertions by tracking Parikh vectors in the product of the graph with each
atom's automaton.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .dyndist import ParikhState, parikh_init, parikh_insert
from .errors import CycleWouldForm, InvalidModification, UnsupportedModification
from .graphstore import LabeledGraph, Modification, TcState, apply_mod, cycle_check, tc_after_delete, tc_after_insert
from .specs.queries import EcrpqQuery
from .specs.sync import PAD, SyncAutomaton, columns, universal, validate_sync

Entry = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]  # (xs, ys, counts)


# -- compilation --------------------------------------------------------------------

@dataclass(frozen=True)
class EcrpqPlan:
    query: EcrpqQuery
    automaton: SyncAutomaton

    @property
    def m(self) -> int:
        return len(self.query.atoms)

    @property
    def counting(self) -> bool:
        return bool(self.query.A)


def ecrpq_compile(q: EcrpqQuery) -> EcrpqPlan:
    """Synchronized product of all relations, tapes ordered like the atoms."""
    for rel, _ in q.relations:
        validate_sync(rel)
    paths = q.paths
    m = len(paths)
    if len(q.relations) == 1 and q.relations[0][1] == paths:
        return EcrpqPlan(q, q.relations[0][0])
    rels = [(rel, [paths.index(p) for p in omega]) for rel, omega in q.relations]
    cols = columns(q.alphabet, m)
    start = (tuple(rel.start for rel, _ in rels), (False,) * m)
    index = {start: 0}
    order = [start]
    trans: set[tuple[int, tuple, int]] = set()
    moves = [{} for _ in rels]
    for r, (rel, _) in enumerate(rels):
        for p, col, q2 in rel.transitions:
            moves[r].setdefault((p, col), []).append(q2)
    pos = 0
    while pos < len(order):
        states, ended = order[pos]
        for col in cols:
            if any(e and s is not PAD for e, s in zip(ended, col)):
                continue
            options = []
            for r, (rel, tapes) in enumerate(rels):
                proj = tuple(col[t] for t in tapes)
                if all(s is PAD for s in proj):
                    options.append([states[r]])
                else:
                    options.append(moves[r].get((states[r], proj), []))
            now_ended = tuple(e or s is PAD for e, s in zip(ended, col))
            for nxt_states in product(*options):
                nxt = (tuple(nxt_states), now_ended)
                if nxt not in index:
                    index[nxt] = len(order)
                    order.append(nxt)
                trans.add((pos, col, index[nxt]))
        pos += 1
    finals = frozenset(i for i, (states, _) in enumerate(order)
                       if all(s in rel.finals for s, (rel, _) in zip(states, rels)))
    automaton = SyncAutomaton(m, len(order), 0, finals, frozenset(trans))
    validate_sync(automaton)
    return EcrpqPlan(q, automaton)


# -- ECRPQ state ------------------------------------------------------------------------

@dataclass(frozen=True)
class EcrpqState:
    plan: EcrpqPlan
    copies: tuple[LabeledGraph, ...]
    tcs: tuple[TcState, ...]
    R: dict[tuple[int, int], frozenset[Entry]]

    @property
    def n(self) -> int:
        return self.copies[0].n if self.copies else 0

    def entries(self, p: int, q: int) -> frozenset[Entry]:
        return self.R.get((p, q), frozenset())


def ecrpq_init(plan: EcrpqPlan, n: int, alphabet: Sequence[str] | None = None) -> EcrpqState:
    alphabet = tuple(alphabet) if alphabet is not None else plan.query.alphabet
    m = plan.m
    width = len(plan.query.alphabet) * m if plan.counting else 0
    zero = (0,) * width
    diag = frozenset((xs, xs, zero) for xs in product(range(n), repeat=m))
    R = {(p, p): diag for p in range(plan.automaton.n_states)}
    copies = tuple(LabeledGraph.empty(n, alphabet) for _ in range(m))
    return EcrpqState(plan, copies, tuple(TcState.initial(n) for _ in range(m)), R)


def _compose(s: EcrpqState, tape: int, edges: Iterable[tuple[int, str, int]]) -> dict[tuple[int, int], set[Entry]]:
    """Runs that read one of ``edges`` on ``tape``, glued from stored runs before and after it."""
    plan = s.plan
    a = plan.automaton
    k = len(plan.query.alphabet)
    sym_index = {sym: j for j, sym in enumerate(plan.query.alphabet)}
    succ = []
    for g in s.copies:
        table: dict[tuple[int, str], list[int]] = {}
        for x, sym, y in g.edges:
            table.setdefault((x, sym), []).append(y)
        succ.append(table)
    edges_at: dict[tuple[int, str], list[int]] = {}
    for z, sym, z2 in edges:
        edges_at.setdefault((z, sym), []).append(z2)

    ending: dict[tuple[int, int, int], list[Entry]] = {}   # (p', node on tape) -> entries of R[p, p']
    for (p, p2), entries in s.R.items():
        for e in entries:
            ending.setdefault((p2, e[1][tape]), []).append((p,) + e)
    starting: dict[tuple[int, tuple[int, ...]], list[tuple[int, tuple[int, ...], tuple[int, ...]]]] = {}
    for (q2, q), entries in s.R.items():
        for xs, ys, ls in entries:
            starting.setdefault((q2, xs), []).append((q, ys, ls))

    out: dict[tuple[int, int], set[Entry]] = {}
    for p2, col, q2 in a.transitions:
        sym = col[tape]
        if sym is PAD:
            continue
        for (z, esym), targets in edges_at.items():
            if esym != sym:
                continue
            for p, xs, mids, ls1 in ending.get((p2, z), []):
                options = []
                for j, cj in enumerate(col):
                    if j == tape:
                        options.append(targets)
                    elif cj is PAD:
                        options.append([mids[j]])
                    else:
                        options.append(succ[j].get((mids[j], cj), []))
                if plan.counting:
                    step = [0] * len(ls1)
                    for j, cj in enumerate(col):
                        if cj is not PAD:
                            step[j * k + sym_index[cj]] += 1
                    base = tuple(x + d for x, d in zip(ls1, step))
                for after in product(*options):
                    for q, ys, ls2 in starting.get((q2, tuple(after)), []):
                        ls = tuple(x + y for x, y in zip(base, ls2)) if plan.counting else ()
                        out.setdefault((p, q), set()).add((xs, ys, ls))
    return out


def ecrpq_update(s: EcrpqState, copy: int, m: Modification) -> EcrpqState:
    if not 0 <= copy < len(s.copies):
        raise InvalidModification(f"no copy {copy}; the plan has {len(s.copies)} tapes")
    g = s.copies[copy]
    g_after = apply_mod(g, m)
    if g_after is g:
        return s
    tc = s.tcs[copy]
    T = tc.T
    u, v = m.u, m.v
    if m.is_insert:
        if cycle_check(tc, u, v):
            raise CycleWouldForm(f"inserting {u}->{v} into copy {copy} closes a cycle")
        added = _compose(s, copy, [(u, m.symbol, v)])
        R = dict(s.R)
        for key, entries in added.items():
            R[key] = s.R.get(key, frozenset()) | entries
        T_new = tc_after_insert(T, u, v)
    else:
        reaches_u = T[:, u]
        good = [(z, sym, z2) for z, sym, z2 in g_after.edges if reaches_u[z] and not reaches_u[z2]]
        rebuilt = _compose(s, copy, good)
        R = {}
        for key, entries in s.R.items():
            kept = {e for e in entries if not (T[e[0][copy], u] and T[v, e[1][copy]])}
            kept |= {e for e in rebuilt.get(key, ()) if T[e[0][copy], u] and T[v, e[1][copy]]}
            if kept:
                R[key] = frozenset(kept)
        T_new = tc_after_delete(T, g_after.adjacency(), u, v)
    copies = s.copies[:copy] + (g_after,) + s.copies[copy + 1:]
    tcs = s.tcs[:copy] + (TcState(T_new),) + s.tcs[copy + 1:]
    return EcrpqState(s.plan, copies, tcs, R)


def ecrpq_update_all(s: EcrpqState, m: Modification) -> EcrpqState:
    """Apply one modification of the underlying graph to every copy."""
    for i in range(len(s.copies)):
        s = ecrpq_update(s, i, m)
    return s


def ecrpq_recompute(plan: EcrpqPlan, copies: Sequence[LabeledGraph]) -> EcrpqState:
    """Fresh state for the given copies, built by inserting every edge."""
    n = copies[0].n if copies else 0
    alphabet = copies[0].alphabet if copies else plan.query.alphabet
    s = ecrpq_init(plan, n, alphabet)
    for i, g in enumerate(copies):
        for u, sym, v in sorted(g.edges):
            s = ecrpq_update(s, i, Modification.ins(sym, u, v))
    return s


def _bind(atoms: Sequence[tuple[str, str, str]], xs: Sequence[int], ys: Sequence[int]) -> dict[str, int] | None:
    env: dict[str, int] = {}
    for (x, _, y), a, b in zip(atoms, xs, ys):
        if env.setdefault(x, a) != a or env.setdefault(y, b) != b:
            return None
    return env


def ecrpq_eval(s: EcrpqState) -> set[tuple[int, ...]]:
    q = s.plan.query
    a = s.plan.automaton
    A = np.array(q.A, dtype=np.int64).reshape(len(q.A), len(q.alphabet) * len(q.atoms))
    b = np.array(q.b, dtype=np.int64)
    answers = set()
    for f in a.finals:
        for xs, ys, ls in s.entries(a.start, f):
            if s.plan.counting and not np.all(A @ np.array(ls, dtype=np.int64) >= b):
                continue
            env = _bind(q.atoms, xs, ys)
            if env is not None:
                answers.add(tuple(env[z] for z in q.head))
    return answers


# -- CRPQ on general graphs under insertions ---------------------------------------------

def atom_automaton(q: EcrpqQuery, atom: int) -> SyncAutomaton:
    """Intersection of the unary relations on one atom's path, trimmed to useful states."""
    path = q.atoms[atom][1]
    rels = [rel for rel, omega in q.relations if omega == (path,)]
    if not rels:
        return universal(q.alphabet)
    start = tuple(r.start for r in rels)
    index = {start: 0}
    order = [start]
    trans = set()
    pos = 0
    while pos < len(order):
        cur = order[pos]
        for sym in q.alphabet:
            succs = [[t for p, col, t in r.transitions if p == c and col == (sym,)] for r, c in zip(rels, cur)]
            for nxt in product(*succs):
                if nxt not in index:
                    index[nxt] = len(order)
                    order.append(nxt)
                trans.add((pos, (sym,), index[nxt]))
        pos += 1
    finals = {i for i, c in enumerate(order) if all(x in r.finals for r, x in zip(rels, c))}
    # keep states that can still reach a final state
    alive = set(finals)
    changed = True
    while changed:
        changed = False
        for p, _, t in trans:
            if t in alive and p not in alive:
                alive.add(p)
                changed = True
    alive.add(0)
    keep = sorted(alive)
    renum = {old: new for new, old in enumerate(keep)}
    trans = {(renum[p], col, renum[t]) for p, col, t in trans if p in alive and t in alive}
    return SyncAutomaton(1, len(keep), 0, frozenset(renum[f] for f in finals), frozenset(trans))


@dataclass(frozen=True)
class CrpqState:
    query: EcrpqQuery
    graph: LabeledGraph
    automata: tuple[SyncAutomaton, ...]
    products: tuple[ParikhState, ...]
    lmax: int

    def atom_vectors(self, j: int) -> dict[tuple[int, int], np.ndarray]:
        """``(x, y) -> array of Parikh vectors`` of accepted bounded walks for atom ``j``."""
        a = self.automata[j]
        S = self.products[j].S
        nq = a.n_states
        found: dict[tuple[int, int], list] = {}
        for f in a.finals:
            sub = S[a.start::nq, f::nq, 1]
            for x, y, *vec in zip(*np.nonzero(sub)):
                found.setdefault((int(x), int(y)), []).append(vec)
        return {key: np.unique(np.array(v, dtype=np.int64).reshape(len(v), -1), axis=0)
                for key, v in found.items()}


def default_crpq_lmax(n: int, automata: Sequence[SyncAutomaton]) -> int:
    q = max((a.n_states for a in automata), default=1)
    return (n * q) ** 2


def crpq_init(q: EcrpqQuery, n: int, lmax: int | None = None, alphabet: Sequence[str] | None = None) -> CrpqState:
    if not q.is_crpq:
        raise UnsupportedModification("general-graph maintenance needs unary relations only")
    alphabet = tuple(alphabet) if alphabet is not None else q.alphabet
    if alphabet != q.alphabet:
        raise ValueError("query and graph alphabets differ")
    automata = tuple(atom_automaton(q, j) for j in range(len(q.atoms)))
    lmax = default_crpq_lmax(n, automata) if lmax is None else lmax
    products = tuple(parikh_init(n * a.n_states, alphabet, lmax) for a in automata)
    return CrpqState(q, LabeledGraph.empty(n, alphabet), automata, products, lmax)


def crpq_insert(s: CrpqState, symbol: str, u: int, v: int) -> CrpqState:
    g_after = apply_mod(s.graph, Modification.ins(symbol, u, v))
    if g_after is s.graph:
        return s
    products = []
    for a, prod in zip(s.automata, s.products):
        nq = a.n_states
        for p, col, t in sorted(a.transitions):
            if col == (symbol,):
                prod = parikh_insert(prod, symbol, u * nq + p, v * nq + t)
        products.append(prod)
    return CrpqState(s.query, g_after, s.automata, tuple(products), s.lmax)


def crpq_update(s: CrpqState, m: Modification) -> CrpqState:
    if not m.is_insert:
        raise UnsupportedModification("CRPQs on general graphs are maintained under insertions only")
    return crpq_insert(s, m.symbol, m.u, m.v)


def _feasible(A: np.ndarray, b: np.ndarray, blocks: Sequence[np.ndarray], widths: Sequence[int]) -> bool:
    """Is there one row per block such that ``A`` times their concatenation is ``>= b``?"""
    h = len(b)
    if h == 0:
        return True
    partial = np.zeros((1, h), dtype=np.int64)
    offset = 0
    for vecs, w in zip(blocks, widths):
        contrib = vecs @ A[:, offset:offset + w].T
        partial = np.unique((partial[:, None, :] + contrib[None, :, :]).reshape(-1, h), axis=0)
        offset += w
    return bool(np.any(np.all(partial >= b, axis=1)))


def crpq_eval(s: CrpqState) -> set[tuple[int, ...]]:
    q = s.query
    k = len(q.alphabet)
    A = np.array(q.A, dtype=np.int64).reshape(len(q.A), k * len(q.atoms))
    b = np.array(q.b, dtype=np.int64)
    per_atom = [s.atom_vectors(j) for j in range(len(q.atoms))]
    answers = set()

    def rec(j: int, env: dict[str, int], blocks: list[np.ndarray]) -> None:
        if j == len(q.atoms):
            if _feasible(A, b, blocks, [k] * len(blocks)):
                answers.add(tuple(env[z] for z in q.head))
            return
        x, _, y = q.atoms[j]
        for (a, c), vecs in per_atom[j].items():
            if env.get(x, a) != a or env.get(y, c) != c:
                continue
            if x == y and a != c:
                continue
            nxt = dict(env)
            nxt[x] = a
            nxt[y] = c
            rec(j + 1, nxt, blocks + [vecs])

    rec(0, {}, [])
    return answers
