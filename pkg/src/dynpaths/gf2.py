"""Bit matrices over Z2 with rows packed into Python ints."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class Gf2Matrix:
    """``rows[r]`` holds row ``r``; bit ``c`` is the entry in column ``c``."""

    rows: tuple[int, ...]
    cols: int

    def __post_init__(self) -> None:
        if self.cols < 0:
            raise ValueError("column count must be non-negative")
        limit = 1 << self.cols
        for r in self.rows:
            if not 0 <= r < limit:
                raise ValueError(f"row {r:b} does not fit in {self.cols} columns")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "Gf2Matrix":
        if cols is None:
            cols = len(entries[0]) if entries else 0
        rows = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            bits = 0
            for c, e in enumerate(row):
                if e not in (0, 1):
                    raise ValueError(f"entry {e!r} is not a bit")
                bits |= e << c
            rows.append(bits)
        return cls(tuple(rows), cols)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def entry(self, r: int, c: int) -> int:
        return (self.rows[r] >> c) & 1

    def to_lists(self) -> list[list[int]]:
        return [[self.entry(r, c) for c in range(self.cols)] for r in range(self.n_rows)]

    def with_row(self, r: int, bits: int) -> "Gf2Matrix":
        rows = list(self.rows)
        rows[r] = bits
        return Gf2Matrix(tuple(rows), self.cols)

    def augment(self, column: Sequence[int]) -> "Gf2Matrix":
        """Append ``column`` as a new last column."""
        if len(column) != self.n_rows:
            raise ValueError("column length differs from the row count")
        rows = tuple(r | ((c & 1) << self.cols) for r, c in zip(self.rows, column))
        return Gf2Matrix(rows, self.cols + 1)


def gf2_rank(M: Gf2Matrix) -> int:
    """Rank by Gaussian elimination, one pivot per column."""
    work = list(M.rows)
    rank = 0
    for col in range(M.cols):
        bit = 1 << col
        pivot = next((i for i in range(rank, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for i in range(len(work)):
            if i != rank and work[i] & bit:
                work[i] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


def gf2_solvable(B: Gf2Matrix, d: Sequence[int]) -> bool:
    """Whether ``B x = d`` has a solution over Z2."""
    return gf2_rank(B) == gf2_rank(B.augment(d))
