"""Context-free path queries on acyclic graphs under insertions and deletions.

``R[X, Y, x1, y1, x2, y2]`` records that ``X`` derives ``s1 Y s2`` where
``s1`` labels a path ``x1 -> y1`` and ``s2`` labels a path ``x2 -> y2``.

Updates split a derivation tree at the lowest common ancestor of the leaf
``Y`` and the terminal leaf produced at a chosen edge.  On insertion that
edge is the new one.  On deletion it is the first edge of a surviving path
that leaves the set of nodes still reaching ``u``; acyclicity guarantees the
rest of such a path avoids the deleted edge, so old tuples can be reused.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boolops import bjoin
from .errors import ArityUnsupported, CycleWouldForm, InvalidModification
from .graphstore import LabeledGraph, Modification, TcState, apply_mod, cycle_check, tc_after_delete, tc_after_insert
from .specs.grammar import CnfGrammar


@dataclass(frozen=True)
class CflState:
    grammar: CnfGrammar
    graph: LabeledGraph
    tc: TcState
    R: np.ndarray       # [X, Y, x1, y1, x2, y2]
    P: np.ndarray       # [V, V1, V2] for rules V -> V1 V2
    term: np.ndarray    # [U, sigma] for rules U -> sigma
    Q: np.ndarray       # [x, y] query answer

    @property
    def n(self) -> int:
        return self.graph.n

    def relation(self, x: str, y: str) -> set[tuple[int, int, int, int]]:
        g = self.grammar
        sub = self.R[g.var_index(x), g.var_index(y)]
        return {tuple(int(c) for c in t) for t in zip(*np.nonzero(sub))}


def _rule_arrays(grammar: CnfGrammar, alphabet: tuple[str, ...]) -> tuple[np.ndarray, np.ndarray]:
    nv = len(grammar.variables)
    P = np.zeros((nv, nv, nv), dtype=bool)
    for x, y, z in grammar.binary:
        P[grammar.var_index(x), grammar.var_index(y), grammar.var_index(z)] = True
    term = np.zeros((nv, len(alphabet)), dtype=bool)
    for x, a in grammar.unary:
        if a in alphabet:
            term[grammar.var_index(x), alphabet.index(a)] = True
    return P, term


def cfl_init(grammar: CnfGrammar, n: int, alphabet: tuple[str, ...] | None = None) -> CflState:
    alphabet = tuple(alphabet) if alphabet is not None else grammar.terminals
    graph = LabeledGraph.empty(n, alphabet, directed=True)
    nv = len(grammar.variables)
    R = np.zeros((nv, nv, n, n, n, n), dtype=bool)
    idx = np.arange(n)
    for x in range(nv):
        R[x, x, idx[:, None], idx[:, None], idx[None, :], idx[None, :]] = True
    P, term = _rule_arrays(grammar, alphabet)
    Q = np.zeros((n, n), dtype=bool)
    if grammar.start_eps:
        Q[idx, idx] = True
    return CflState(grammar, graph, TcState.initial(n), R, P, term, Q)


def cfl_from_graph(grammar: CnfGrammar, graph: LabeledGraph) -> CflState:
    """Build a state by inserting the edges of an acyclic graph one at a time."""
    s = cfl_init(grammar, graph.n, graph.alphabet)
    for u, sym, v in sorted(graph.edges):
        s = cfl_update(s, Modification.ins(sym, u, v))
    return s


# -- composition primitives ----------------------------------------------------
#
# Index letters: X top variable, V split variable, P/Q its children, Y the
# tracked leaf; i j k l are the four tuple positions, a b c split nodes.

def _marked(R: np.ndarray, G: np.ndarray) -> np.ndarray:
    """``M[V, a, c]``: V derives a word spanning a path a -> c through a marked edge."""
    return bjoin("VUazwc,Uzw->Vac", R, G)


def _left(R: np.ndarray, P: np.ndarray, M: np.ndarray, mid: np.ndarray) -> np.ndarray:
    # marked part in the left child, tracked leaf under the right child
    PM = bjoin("VPQ,Pac->VQac", P, M)
    T1 = bjoin("XViabl,VQac->XQilcb", R, PM)
    return bjoin("XQilcb,QYcjkb->XYijkl", T1, mid)


def _right(R: np.ndarray, P: np.ndarray, M: np.ndarray, mid: np.ndarray) -> np.ndarray:
    # tracked leaf under the left child, marked part in the right child
    PM = bjoin("VPQ,Qcb->VPcb", P, M)
    T1 = bjoin("XViabl,VPcb->XPilac", R, PM)
    return bjoin("XPilac,PYajkc->XYijkl", T1, mid)


def _compose(R: np.ndarray, P: np.ndarray, G: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tuples whose first, second, or both paths cross a marked edge (labels in ``G``)."""
    M = _marked(R, G)
    left = _left(R, P, M, R)
    right = _right(R, P, M, R)
    both = _right(R, P, M, left) | _left(R, P, M, right)
    return left, right, both


def _answer(R: np.ndarray, term: np.ndarray, E: np.ndarray, grammar: CnfGrammar) -> np.ndarray:
    n = E.shape[1]
    G = bjoin("Ut,tzw->Uzw", term, E)
    Q = bjoin("Uxzwy,Uzw->xy", R[grammar.var_index(grammar.start)], G)
    if grammar.start_eps:
        Q[np.arange(n), np.arange(n)] = True
    return Q


def cfl_update(s: CflState, m: Modification) -> CflState:
    g_after = apply_mod(s.graph, m)
    if g_after is s.graph:
        return s
    sym = s.graph.alphabet.index(m.symbol)
    u, v = m.u, m.v
    T = s.tc.T
    nv, n = s.R.shape[0], s.n
    if m.is_insert:
        if cycle_check(s.tc, u, v):
            raise CycleWouldForm(f"inserting {u}->{v} closes a cycle")
        G = np.zeros((nv, n, n), dtype=bool)
        G[:, u, v] = s.term[:, sym]
        left, right, both = _compose(s.R, s.P, G)
        R = s.R | left | right | both
        T_new = tc_after_insert(T, u, v)
    else:
        E_after = g_after.label_adjacency()
        # surviving edges that leave the nodes reaching u
        leaving = T[:, u][:, None] & ~T[:, u][None, :]
        G = bjoin("Ut,tzw->Uzw", s.term, E_after) & leaving[None]
        left, right, both = _compose(s.R, s.P, G)
        via = np.outer(T[:, u], T[v, :])
        via1 = via[None, None, :, :, None, None]
        via2 = via[None, None, None, None, :, :]
        R = ((s.R & ~via1 & ~via2) | (left & via1 & ~via2)
             | (right & ~via1 & via2) | (both & via1 & via2))
        T_new = tc_after_delete(T, g_after.adjacency(), u, v)
    Q = _answer(R, s.term, g_after.label_adjacency(), s.grammar)
    return CflState(s.grammar, g_after, TcState(T_new), R, s.P, s.term, Q)


def cfl_query(s: CflState) -> set[tuple[int, int]]:
    return {(int(x), int(y)) for x, y in zip(*np.nonzero(s.Q))}


def _derived2(s: CflState, y1: int, y2: int) -> np.ndarray:
    """``D[X, x1, y1, x2, y2, x3, y3]`` for fixed ``Y1, Y2`` and every top variable ``X``."""
    R, P = s.R, s.P
    T1 = bjoin("XViabl,VPQ->XPQiabl", R, P)
    T2 = bjoin("XPQiabl,Pajkc->XQijkbcl", T1, R[:, y1])
    return bjoin("XQijkbcl,Qcmob->Xijkmol", T2, R[:, y2])


def cfl_derived(s: CflState, x: str, ys: list[str] | tuple[str, ...]) -> np.ndarray:
    """Boolean tensor of arity ``2 (len(ys) + 1)`` for ``x =>* s1 Y1 s2 ... Yk s_{k+1}``.

    Meant for inspection on small domains: the result has ``n ** (2k + 2)`` cells.
    """
    g = s.grammar
    k = len(ys)
    if not 1 <= k <= 3:
        raise ArityUnsupported(f"derived relations are available for 1..3 variables, not {k}")
    try:
        xi = g.var_index(x)
        yi = [g.var_index(y) for y in ys]
    except ValueError as exc:
        raise InvalidModification(str(exc)) from None
    if k == 1:
        return s.R[xi, yi[0]].copy()
    if k == 2:
        return _derived2(s, yi[0], yi[1])[xi]
    R, P = s.R, s.P
    top = bjoin("Viabl,VPQ->PQiabl", R[xi], P)
    # Y1 Y2 below the left child, Y3 below the right child
    psi1 = bjoin("PQiabl,Pajkmoc,Qcstb->ijkmostl", top, _derived2(s, yi[0], yi[1]), R[:, yi[2]])
    # Y1 below the left child, Y2 Y3 below the right child
    psi2 = bjoin("PQiabl,Pajkc,Qcmostb->ijkmostl", top, R[:, yi[0]], _derived2(s, yi[1], yi[2]))
    return psi1 | psi2
