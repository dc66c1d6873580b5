"""Regular path queries under edge insertions.

For every pair of DFA states ``(p, q)`` the state keeps the node pairs
``(x, y)`` joined by a path that drives the DFA from ``p`` to ``q``.  An
insertion of ``u -σ-> v`` only looks at the old relations on the nodes
``x, y, u, v``; witnesses that loop through the new edge several times are
covered by ``phi`` with at most ``|Q|`` visits to ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boolops import bjoin, bmm
from .errors import UnsupportedModification
from .graphstore import Modification
from .specs.dfa import Dfa


@dataclass(frozen=True)
class RpqState:
    dfa: Dfa
    R: np.ndarray  # R[p, q, x, y]

    @property
    def n(self) -> int:
        return self.R.shape[2]

    def relation(self, p: int, q: int) -> set[tuple[int, int]]:
        return {(int(x), int(y)) for x, y in zip(*np.nonzero(self.R[p, q]))}


def rpq_init(dfa: Dfa, n: int) -> RpqState:
    R = np.zeros((dfa.n_states, dfa.n_states, n, n), dtype=bool)
    diag = np.arange(n)
    for p in range(dfa.n_states):
        R[p, p, diag, diag] = True
    return RpqState(dfa, R)


def step_matrix(dfa: Dfa, symbol: str) -> np.ndarray:
    """``M[p, q]`` is true iff the DFA moves from p to q on ``symbol``."""
    M = np.zeros((dfa.n_states, dfa.n_states), dtype=bool)
    if symbol in dfa.alphabet:
        j = dfa.alphabet.index(symbol)
        for p, row in enumerate(dfa.delta):
            M[p, row[j]] = True
    return M


def phi_matrices(s: RpqState, symbol: str, u: int, v: int, upto: int | None = None) -> list[np.ndarray]:
    """``[phi^1, ..., phi^upto]`` as state-by-state matrices for the pending edge u -> v."""
    upto = s.dfa.n_states if upto is None else upto
    phi1 = step_matrix(s.dfa, symbol) | s.R[:, :, u, v]
    back = s.R[:, :, v, u]
    phis = [phi1]
    for _ in range(1, upto):
        prev = phis[-1]
        phis.append(prev | bmm(bmm(phi1, back), prev))
    return phis


def phi_reach(s: RpqState, i: int, p: int, q: int, u: int, v: int, symbol: str) -> bool:
    if not 1 <= i <= s.dfa.n_states:
        raise ValueError(f"i must lie in 1..{s.dfa.n_states}")
    return bool(phi_matrices(s, symbol, u, v, i)[i - 1][p, q])


def rpq_insert(s: RpqState, symbol: str, u: int, v: int) -> RpqState:
    phi = phi_matrices(s, symbol, u, v)[-1]
    into_u = s.R[:, :, :, u]      # [p, p', x]
    out_of_v = s.R[:, :, v, :]    # [q', q, y]
    through = bjoin("apx,pq,qby->abxy", into_u, phi, out_of_v)
    return RpqState(s.dfa, s.R | through)


def rpq_update(s: RpqState, m: Modification) -> RpqState:
    if not m.is_insert:
        raise UnsupportedModification("regular path queries are maintained under insertions only")
    return rpq_insert(s, m.symbol, m.u, m.v)


def rpq_query(s: RpqState) -> set[tuple[int, int]]:
    finals = sorted(s.dfa.finals)
    if not finals:
        return set()
    answer = s.R[s.dfa.start, finals].any(axis=0)
    return {(int(x), int(y)) for x, y in zip(*np.nonzero(answer))}
