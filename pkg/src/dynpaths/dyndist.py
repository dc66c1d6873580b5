"""Path lengths and Parikh counts between node pairs.

Three regimes:

* insertions on arbitrary directed graphs, keeping for every pair the
  achievable sums of ``t`` path lengths (``InsDistState``) or of ``t`` Parikh
  vectors (``ParikhState``), truncated at ``lmax``;
* insertions and deletions on acyclic graphs (``AcyDistState``);
* insertions and deletions on undirected graphs via shortest odd and even
  walk lengths (``UndirDistState``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .boolops import bconv, bjoin, shift
from .errors import BoundExceeded, BudgetExceeded, CycleWouldForm, UnsupportedModification
from .graphstore import LabeledGraph, Modification, TcState, apply_mod, cycle_check, tc_after_delete, tc_after_insert


# largest boolean table a length-tracking state may allocate
MAX_CELLS = 1 << 27


def _table(shape: tuple[int, ...]) -> np.ndarray:
    cells = int(np.prod(shape, dtype=object))
    if cells > MAX_CELLS:
        raise BudgetExceeded(f"a table of shape {shape} needs {cells} cells; lower lmax")
    return np.zeros(shape, dtype=bool)


def toeplitz(a: np.ndarray) -> np.ndarray:
    """``out[..., i, o] = a[..., o - i]`` for ``o >= i``, else False (last axis is the length)."""
    size = a.shape[-1]
    offset = np.arange(size)[None, :] - np.arange(size)[:, None]
    valid = offset >= 0
    out = a[..., np.where(valid, offset, 0)]
    return out & valid


def _pairs_at(mask: np.ndarray) -> set[tuple[int, ...]]:
    return {tuple(int(c) for c in t) for t in zip(*np.nonzero(mask))}


# -- insert-only lengths -------------------------------------------------------

@dataclass(frozen=True)
class InsDistState:
    """``A[x, y, t, l]``: some ``t`` walks from x to y have lengths summing to ``l``."""

    graph: LabeledGraph
    lmax: int
    A: np.ndarray

    def lengths(self) -> set[tuple[int, int, int]]:
        return _pairs_at(self.A[:, :, 1, :])


def insdist_init(n: int, lmax: int | None = None, alphabet: tuple[str, ...] = ("e",),
                 directed: bool = True) -> InsDistState:
    lmax = n * n if lmax is None else lmax
    if lmax < 0:
        raise ValueError("lmax must be non-negative")
    A = _table((n, n, max(lmax, 1) + 1, lmax + 1))
    A[:, :, 0, 0] = True
    A[np.arange(n), np.arange(n), :, 0] = True
    return InsDistState(LabeledGraph.empty(n, alphabet, directed), lmax, A)


def insdist_insert(s: InsDistState, u: int, v: int, symbol: str | None = None) -> InsDistState:
    symbol = s.graph.alphabet[0] if symbol is None else symbol
    g_after = apply_mod(s.graph, Modification.ins(symbol, u, v))
    if not g_after.directed:
        A = _insdist_edge(s.A, u, v)
        A = _insdist_edge(A, v, u)
    else:
        A = _insdist_edge(s.A, u, v)
    return InsDistState(g_after, s.lmax, A)


def _insdist_edge(A: np.ndarray, u: int, v: int) -> np.ndarray:
    n, _, T, L = A.shape
    # t+ walks each split as x -> u, the new edge, v -> y:  sum over equal t+
    tv = toeplitz(A[v])                                     # [y, t, l1, l]
    through = bjoin("xti,ytio->xyto", A[:, u], tv)           # [x, y, t+, l+1 + l+2]
    # t_loop returns v -> u, each followed by another crossing of the new edge
    loops = np.zeros(L, dtype=bool)
    for t_loop in range(T):
        loops |= shift(A[v, u, t_loop], 0, t_loop)
    loop_toe = toeplitz(loops)                              # [l1, l]
    E = np.zeros_like(A)
    E[:, :, 0, 0] = True
    for t_plus in range(1, T):
        crossed = shift(through[:, :, t_plus], 2, t_plus)   # one edge step per walk
        E[:, :, t_plus] = bjoin("xyi,io->xyo", crossed, loop_toe)
    # combine with the t- old walks: 2-D sumset in (t, l) per pair
    out = np.zeros_like(A)
    for t_plus in range(T):
        part = E[:, :, t_plus]
        if not part.any():
            continue
        shifted = shift(A, 2, t_plus)
        out |= bjoin("xyti,xyio->xyto", shifted, toeplitz(part))
    return out


def insdist_has_length(s: InsDistState, x: int, y: int, length: int) -> bool:
    if length > s.lmax:
        raise BoundExceeded(f"length {length} exceeds the maintained bound {s.lmax}")
    if length < 0:
        return False
    return bool(s.A[x, y, 1, length])


def insdist_update(s: InsDistState, m: Modification) -> InsDistState:
    if not m.is_insert:
        raise UnsupportedModification("all-lengths maintenance on general graphs supports insertions only")
    return insdist_insert(s, m.u, m.v, m.symbol)


# -- Parikh vectors ----------------------------------------------------------------

@dataclass(frozen=True)
class ParikhState:
    """``S[x, y, t, l_1, ..., l_k]``: ``t`` walks x -> y whose labels jointly hold ``l_i`` copies of symbol i.

    Cells with ``sum(l) > lmax`` are kept False.
    """

    graph: LabeledGraph
    lmax: int
    S: np.ndarray
    mask: np.ndarray = field(repr=False)

    @property
    def k(self) -> int:
        return len(self.graph.alphabet)

    def vectors(self, t: int = 1) -> set[tuple[int, int, tuple[int, ...]]]:
        return {(x, y, tuple(rest)) for x, y, *rest in _pairs_at(self.S[:, :, t])}


def _budget_mask(k: int, lmax: int) -> np.ndarray:
    grids = np.indices((lmax + 1,) * k) if k else np.zeros((0,), dtype=int)
    return grids.sum(axis=0) <= lmax if k else np.ones((), dtype=bool)


def parikh_init(n: int, alphabet: tuple[str, ...], lmax: int | None = None) -> ParikhState:
    lmax = n * n if lmax is None else lmax
    k = len(alphabet)
    S = _table((n, n, max(lmax, 1) + 1) + (lmax + 1,) * k)
    origin = (0,) * k
    S[(slice(None), slice(None), 0) + origin] = True
    S[(np.arange(n), np.arange(n), slice(None)) + origin] = True
    return ParikhState(LabeledGraph.empty(n, alphabet), lmax, S, _budget_mask(k, lmax))


def parikh_insert(s: ParikhState, symbol: str, u: int, v: int) -> ParikhState:
    g_after = apply_mod(s.graph, Modification.ins(symbol, u, v))
    if g_after is s.graph:
        return s
    S = s.S
    k = s.k
    i = s.graph.alphabet.index(symbol)
    T = S.shape[2]
    L = s.lmax + 1
    vec_axes = tuple(range(3, 3 + k))
    vec_shape = (L,) * k
    # only nodes with a nonempty walk to u (from v) can gain new tuples
    xs = np.flatnonzero(S[:, u, 1:].reshape(S.shape[0], -1).any(axis=1))
    ys = np.flatnonzero(S[v, :, 1:].reshape(S.shape[0], -1).any(axis=1))
    if len(xs) == 0 or len(ys) == 0:
        return ParikhState(g_after, s.lmax, S, s.mask)
    # x -> u and v -> y walks paired by equal t+, summed over Parikh vectors
    through = bconv(S[xs, u][:, None], S[v, ys][None, :], vec_axes, vec_shape)
    # loops v -> u, each adding one more crossing of the new edge
    loops = np.zeros(vec_shape, dtype=bool)
    for t_loop in range(T):
        loops |= shift(S[v, u, t_loop], i, t_loop)
    crossed = np.zeros_like(through)
    for t_plus in range(1, T):
        # each of the t+ walks crosses the new edge once more
        crossed[:, :, t_plus] = shift(through[:, :, t_plus], 2 + i, t_plus)
    E = bconv(crossed, loops[None, None, None], vec_axes, vec_shape)
    # t- old walks combined with the t+ >= 1 new ones; t+ = 0 keeps S itself
    block = S[np.ix_(xs, ys)]
    new = bconv(block, E, (2,) + vec_axes, (T,) + vec_shape) & s.mask
    out = S.copy()
    out[np.ix_(xs, ys)] |= new
    return ParikhState(g_after, s.lmax, out, s.mask)


def parikh_update(s: ParikhState, m: Modification) -> ParikhState:
    if not m.is_insert:
        raise UnsupportedModification("Parikh distances are maintained under insertions only")
    return parikh_insert(s, m.symbol, m.u, m.v)


def parikh_has_vector(s: ParikhState, x: int, y: int, vec: tuple[int, ...]) -> bool:
    if sum(vec) > s.lmax:
        raise BoundExceeded(f"vector {vec} exceeds the maintained bound {s.lmax}")
    return bool(s.S[(x, y, 1) + tuple(vec)])


# -- acyclic graphs ----------------------------------------------------------------

@dataclass(frozen=True)
class AcyDistState:
    """``D[x, y, l]``: a path of length ``l`` leads from x to y (``l < n``)."""

    graph: LabeledGraph
    tc: TcState
    D: np.ndarray

    def lengths(self) -> set[tuple[int, int, int]]:
        return _pairs_at(self.D)


def acydist_init(n: int, alphabet: tuple[str, ...] = ("e",)) -> AcyDistState:
    D = np.zeros((n, n, max(n, 1)), dtype=bool)
    D[np.arange(n), np.arange(n), 0] = True
    return AcyDistState(LabeledGraph.empty(n, alphabet), TcState.initial(n), D)


def acydist_update(s: AcyDistState, m: Modification) -> AcyDistState:
    g_after = apply_mod(s.graph, m)
    if g_after is s.graph:
        return s
    u, v = m.u, m.v
    D, T = s.D, s.tc.T
    if m.is_insert:
        if cycle_check(s.tc, u, v):
            raise CycleWouldForm(f"inserting {u}->{v} closes a cycle")
        if s.graph.adjacency()[u, v]:
            return AcyDistState(g_after, s.tc, D)
        # D(x,u,d) and D(v,y,d') with d + d' + 1 = l
        out_v = toeplitz(shift(D[v], 1, 1))                  # [y, d, l]
        new = bjoin("xd,ydl->xyl", D[:, u], out_v)
        return AcyDistState(g_after, TcState(tc_after_insert(T, u, v)), D | new)
    adj_after = g_after.adjacency()
    if adj_after[u, v]:
        return AcyDistState(g_after, s.tc, D)
    via = np.outer(T[:, u], T[v, :])
    good = adj_after & T[:, u][:, None] & ~T[:, u][None, :]
    # D(x,z,d), good edge (z,z'), D(z',y,d') with d + d' + 1 = l
    out_z = toeplitz(shift(D, 2, 1))                        # [z', y, d, l]
    alternative = bjoin("xzd,zw,wydl->xyl", D, good, out_z)
    keep = D & (~via[:, :, None] | alternative)
    return AcyDistState(g_after, TcState(tc_after_delete(T, adj_after, u, v)), keep)


def acydist_has_length(s: AcyDistState, x: int, y: int, length: int) -> bool:
    if length < 0 or length >= s.D.shape[2]:
        return False
    return bool(s.D[x, y, length])


# -- undirected graphs ---------------------------------------------------------------

@dataclass(frozen=True)
class UndirDistState:
    """Shortest odd/even walk lengths per pair; a missing key means no such walk."""

    graph: LabeledGraph
    d_odd: dict[tuple[int, int], int]
    d_even: dict[tuple[int, int], int]
    isolated: frozenset[int]


def _parity_bfs(g: LabeledGraph) -> tuple[dict, dict, frozenset[int]]:
    """BFS on the product with K2: node (x, parity of steps so far)."""
    adj = [set() for _ in range(g.n)]
    for a, _, b in g.edges:
        adj[a].add(b)
        adj[b].add(a)
    d_odd: dict[tuple[int, int], int] = {}
    d_even: dict[tuple[int, int], int] = {}
    for x in range(g.n):
        dist = {(x, 0): 0}
        queue = deque([(x, 0)])
        while queue:
            a, par = queue.popleft()
            for b in adj[a]:
                nxt = (b, 1 - par)
                if nxt not in dist:
                    dist[nxt] = dist[(a, par)] + 1
                    queue.append(nxt)
        for (y, par), d in dist.items():
            (d_odd if par else d_even)[(x, y)] = d
    isolated = frozenset(x for x in range(g.n) if not adj[x])
    return d_odd, d_even, isolated


def undir_init(n: int, alphabet: tuple[str, ...] = ("e",)) -> UndirDistState:
    g = LabeledGraph.empty(n, alphabet, directed=False)
    return UndirDistState(g, *_parity_bfs(g))


def undir_from_graph(g: LabeledGraph) -> UndirDistState:
    if g.directed:
        raise ValueError("parity distances need an undirected graph")
    return UndirDistState(g, *_parity_bfs(g))


def undir_update(s: UndirDistState, m: Modification) -> UndirDistState:
    g_after = apply_mod(s.graph, m)
    if g_after is s.graph:
        return s
    return UndirDistState(g_after, *_parity_bfs(g_after))


def undir_has_length(s: UndirDistState, x: int, y: int, length: int) -> bool:
    if length < 0:
        return False
    if x == y:
        if length == 0:
            return True
        if x in s.isolated:
            return False
    bound = (s.d_odd if length % 2 else s.d_even).get((x, y))
    return bound is not None and length >= bound
