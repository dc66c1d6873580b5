"""Path queries for languages ``s1^k s2^k ... sr^k`` (``k >= 0``), e.g. ``a^k b^k c^k``.

Each symbol's subgraph keeps its own length relation; a pair ``(x, y)`` is
selected when some ``k`` and intermediate nodes split a path into blocks of
``k`` edges per symbol.  Acyclic graphs support insertions and deletions,
general graphs insertions only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .boolops import bjoin
from .dyndist import AcyDistState, InsDistState, acydist_init, acydist_update, insdist_init, insdist_update
from .errors import InvalidModification
from .graphstore import LabeledGraph, Modification, apply_mod

LengthState = Union[AcyDistState, InsDistState]


@dataclass(frozen=True)
class BlockQueryState:
    graph: LabeledGraph
    blocks: tuple[str, ...]
    per_symbol: dict[str, LengthState]

    def lengths(self, symbol: str) -> np.ndarray:
        """``L[x, y, l]`` for paths using only ``symbol`` edges."""
        st = self.per_symbol[symbol]
        return st.D if isinstance(st, AcyDistState) else st.A[:, :, 1, :]


def block_query_init(n: int, blocks: Sequence[str], alphabet: Sequence[str] | None = None,
                     acyclic: bool = True, lmax: int | None = None) -> BlockQueryState:
    blocks = tuple(blocks)
    alphabet = tuple(alphabet) if alphabet is not None else tuple(dict.fromkeys(blocks))
    missing = [b for b in blocks if b not in alphabet]
    if missing:
        raise InvalidModification(f"block symbols {missing} are not in the alphabet")
    per_symbol: dict[str, LengthState] = {}
    for sym in dict.fromkeys(blocks):
        per_symbol[sym] = acydist_init(n, (sym,)) if acyclic else insdist_init(n, lmax, (sym,))
    return BlockQueryState(LabeledGraph.empty(n, alphabet), blocks, per_symbol)


def block_query_update(s: BlockQueryState, m: Modification) -> BlockQueryState:
    g_after = apply_mod(s.graph, m)
    if g_after is s.graph:
        return s
    per_symbol = dict(s.per_symbol)
    st = per_symbol.get(m.symbol)
    if st is not None:
        update = acydist_update if isinstance(st, AcyDistState) else insdist_update
        per_symbol[m.symbol] = update(st, m)
    # edges with other symbols cannot join a block path; only the graph changes
    return BlockQueryState(g_after, s.blocks, per_symbol)


def block_query_from_graph(g: LabeledGraph, blocks: Sequence[str], acyclic: bool = True,
                           lmax: int | None = None) -> BlockQueryState:
    s = block_query_init(g.n, blocks, g.alphabet, acyclic, lmax)
    for u, sym, v in g.sorted_edges():
        s = block_query_update(s, Modification.ins(sym, u, v))
    return s


def block_query_answer(s: BlockQueryState) -> set[tuple[int, int]]:
    mats = [s.lengths(sym) for sym in s.blocks]
    depth = min(m.shape[2] for m in mats)
    mats = [m[:, :, :depth] for m in mats]
    letters = "abcdefghijkmnopqrsuvw"
    if len(mats) >= len(letters):
        raise ValueError("too many blocks")
    specs = ",".join(f"{letters[i]}{letters[i + 1]}l" for i in range(len(mats)))
    joined = bjoin(f"{specs}->{letters[0]}{letters[len(mats)]}", *mats)
    return {(int(x), int(y)) for x, y in zip(*np.nonzero(joined))}
