"""Labeled graphs, modifications and acyclic transitive-closure maintenance."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .boolops import bmm
from .errors import CycleWouldForm, DeleteAbsentEdge, InvalidModification, ParseError

INSERT = "insert"
DELETE = "delete"

Edge = tuple[int, str, int]


@dataclass(frozen=True)
class Modification:
    kind: str
    symbol: str
    u: int
    v: int

    def __post_init__(self) -> None:
        if self.kind not in (INSERT, DELETE):
            raise InvalidModification(f"unknown modification kind {self.kind!r}")

    @classmethod
    def ins(cls, symbol: str, u: int, v: int) -> "Modification":
        return cls(INSERT, symbol, u, v)

    @classmethod
    def delete(cls, symbol: str, u: int, v: int) -> "Modification":
        return cls(DELETE, symbol, u, v)

    @property
    def is_insert(self) -> bool:
        return self.kind == INSERT

    def reversed(self) -> "Modification":
        return Modification(self.kind, self.symbol, self.v, self.u)


@dataclass(frozen=True)
class LabeledGraph:
    """A finite graph over nodes ``0..n-1`` whose edges carry symbols.

    Undirected graphs keep both orientations of every edge in ``edges``.
    Instances are immutable; :func:`apply_mod` returns a new graph.
    """

    n: int
    alphabet: tuple[str, ...]
    directed: bool = True
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("domain size must be non-negative")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet symbols must be distinct")
        for u, s, v in self.edges:
            self._check(s, u, v)
        if not self.directed:
            for u, s, v in self.edges:
                if (v, s, u) not in self.edges:
                    raise ValueError("undirected graph must store both orientations")

    @classmethod
    def empty(cls, n: int, alphabet: Iterable[str], directed: bool = True) -> "LabeledGraph":
        return cls(n, tuple(alphabet), directed, frozenset())

    def _check(self, symbol: str, u: int, v: int) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise InvalidModification(f"node out of range 0..{self.n - 1}: ({u}, {v})")
        if symbol not in self.alphabet:
            raise InvalidModification(f"symbol {symbol!r} not in alphabet {self.alphabet}")

    def symbol_index(self, symbol: str) -> int:
        return self.alphabet.index(symbol)

    def has_edge(self, symbol: str, u: int, v: int) -> bool:
        return (u, symbol, v) in self.edges

    def labels_between(self, u: int, v: int) -> set[str]:
        return {s for (a, s, b) in self.edges if a == u and b == v}

    def out_edges(self, u: int) -> Iterator[tuple[str, int]]:
        for a, s, b in self.edges:
            if a == u:
                yield s, b

    def adjacency(self) -> np.ndarray:
        """Boolean matrix of the union of all label projections."""
        adj = np.zeros((self.n, self.n), dtype=bool)
        for u, _, v in self.edges:
            adj[u, v] = True
        return adj

    def label_adjacency(self) -> np.ndarray:
        """Array ``E[sigma_index, u, v]``."""
        adj = np.zeros((len(self.alphabet), self.n, self.n), dtype=bool)
        for u, s, v in self.edges:
            adj[self.alphabet.index(s), u, v] = True
        return adj

    def projection(self, symbol: str) -> "LabeledGraph":
        return LabeledGraph(self.n, self.alphabet, self.directed,
                            frozenset(e for e in self.edges if e[1] == symbol))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=lambda e: (e[0], e[2], e[1]))


def apply_mod(g: LabeledGraph, m: Modification) -> LabeledGraph:
    """Return the graph after ``m``; re-inserting a present edge is a no-op."""
    g._check(m.symbol, m.u, m.v)
    oriented = {(m.u, m.symbol, m.v)}
    if not g.directed:
        oriented.add((m.v, m.symbol, m.u))
    if m.is_insert:
        if oriented <= g.edges:
            return g
        return LabeledGraph(g.n, g.alphabet, g.directed, g.edges | oriented)
    if (m.u, m.symbol, m.v) not in g.edges:
        raise DeleteAbsentEdge(f"no edge {m.symbol} {m.u} {m.v}")
    return LabeledGraph(g.n, g.alphabet, g.directed, g.edges - oriented)


def is_acyclic(adj: np.ndarray) -> bool:
    """Kahn's algorithm on a boolean adjacency matrix."""
    indeg = adj.sum(axis=0).astype(int)
    stack = [v for v in range(adj.shape[0]) if indeg[v] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for v in np.flatnonzero(adj[u]):
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(int(v))
    return seen == adj.shape[0]


@dataclass(frozen=True)
class TcState:
    """Reflexive transitive closure ``T`` of an acyclic graph.

    ``T[x, y]`` holds iff ``y`` is reachable from ``x`` by a path of length
    zero or more; the diagonal is always set.
    """

    T: np.ndarray
    acyclic: bool = True

    @classmethod
    def initial(cls, n: int) -> "TcState":
        return cls(np.eye(n, dtype=bool))

    @property
    def n(self) -> int:
        return self.T.shape[0]

    def pairs(self) -> set[tuple[int, int]]:
        return {(int(x), int(y)) for x, y in zip(*np.nonzero(self.T))}


def cycle_check(s: TcState, u: int, v: int) -> bool:
    """True iff adding the edge ``u -> v`` would close a cycle."""
    return u == v or bool(s.T[v, u])


def tc_after_insert(T: np.ndarray, u: int, v: int) -> np.ndarray:
    # T(x,y) or (T(x,u) and T(v,y))
    return T | np.outer(T[:, u], T[v, :])


def tc_after_delete(T: np.ndarray, adj_after: np.ndarray, u: int, v: int) -> np.ndarray:
    """Delete rule for acyclic graphs, ``adj_after`` being the union graph minus (u, v)."""
    if adj_after[u, v]:
        return T.copy()
    via = np.outer(T[:, u], T[v, :])
    # an alternative path must leave the set of nodes reaching u through some edge (z, z')
    leaving = adj_after & T[:, u][:, None] & ~T[:, u][None, :]
    alternative = bmm(bmm(T, leaving), T)
    return T & (~via | alternative)


def tc_update(s: TcState, g_before: LabeledGraph, m: Modification) -> TcState:
    if not g_before.directed:
        raise ValueError("acyclic transitive closure needs a directed graph")
    g_after = apply_mod(g_before, m)
    if m.is_insert:
        if g_after is g_before:
            return s
        if cycle_check(s, m.u, m.v):
            raise CycleWouldForm(f"inserting {m.u}->{m.v} closes a cycle")
        return TcState(tc_after_insert(s.T, m.u, m.v), s.acyclic)
    return TcState(tc_after_delete(s.T, g_after.adjacency(), m.u, m.v), s.acyclic)


# -- graph file format -------------------------------------------------------

def parse_graph(text: str) -> LabeledGraph:
    n = None
    alphabet: tuple[str, ...] | None = None
    directed = True
    raw_edges: list[tuple[int, str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "domain":
                (n_text,) = rest
                n = int(n_text)
            elif head == "alphabet":
                alphabet = tuple(rest)
            elif head == "mode":
                (mode,) = rest
                if mode not in ("directed", "undirected"):
                    raise ParseError(f"unknown mode {mode!r}", lineno)
                directed = mode == "directed"
            elif head == "edge":
                sym, a, b = rest
                raw_edges.append((int(a), sym, int(b), lineno))
            else:
                raise ParseError(f"unknown directive {head!r}", lineno)
        except ValueError as exc:
            raise ParseError(f"malformed {head!r} line: {exc}", lineno) from None
    if n is None:
        raise ParseError("missing 'domain' line")
    if alphabet is None:
        alphabet = tuple(sorted({e[1] for e in raw_edges}))
    g = LabeledGraph.empty(n, alphabet, directed)
    for a, sym, b, lineno in raw_edges:
        try:
            g = apply_mod(g, Modification.ins(sym, a, b))
        except InvalidModification as exc:
            raise ParseError(str(exc), lineno) from None
    return g


def load_graph(path: str | Path) -> LabeledGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def dump_graph(g: LabeledGraph) -> str:
    lines = [f"domain {g.n}", "alphabet " + " ".join(g.alphabet),
             "mode " + ("directed" if g.directed else "undirected")]
    seen = set()
    for u, s, v in g.sorted_edges():
        if not g.directed and (v, s, u) in seen:
            continue
        seen.add((u, s, v))
        lines.append(f"edge {s} {u} {v}")
    return "\n".join(lines) + "\n"
