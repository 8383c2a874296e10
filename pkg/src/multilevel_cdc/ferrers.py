"""Ferrers diagrams in column-count form.

A diagram ``[g_1, ..., g_n]`` has ``g_j`` dots in column ``j``, stacked from
the top row; counts are non-decreasing left to right, so every row is a
right-aligned run of dots.  The empty diagram ``[]`` is a legal value: it is
what a weight-k identifying vector with no free tableau entries produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class FerrersDiagram:
    columns: tuple[int, ...]

    def __init__(self, columns: Sequence[int]) -> None:
        cols = tuple(int(c) for c in columns)
        if cols and cols[0] < 1:
            raise ValueError(f"column counts must be positive: {list(cols)}")
        if any(a > b for a, b in zip(cols, cols[1:])):
            raise ValueError(f"column counts must be non-decreasing: {list(cols)}")
        object.__setattr__(self, "columns", cols)

    @classmethod
    def parse(cls, text: str) -> "FerrersDiagram":
        """Read the CLI literal ``2,2,4,4,6,6``."""
        text = text.strip().strip("[]")
        return cls([int(x) for x in text.split(",") if x.strip()] if text else [])

    @classmethod
    def full(cls, m: int, n: int) -> "FerrersDiagram":
        return cls([m] * n) if m and n else cls([])

    @classmethod
    def from_vector(cls, v: Sequence[int]) -> "FerrersDiagram":
        """Diagram of the Ferrers tableaux of any subspace with identifying vector ``v``.

        Each zero of ``v`` that follows at least one 1 contributes a column
        whose height is the number of ones before it.  Rows belonging to
        trailing ones carry no dots and are simply absent.
        """
        cols = []
        ones = 0
        for b in v:
            if b:
                ones += 1
            elif ones:
                cols.append(ones)
        return cls(cols)

    @property
    def m(self) -> int:
        return self.columns[-1] if self.columns else 0

    @property
    def n(self) -> int:
        return len(self.columns)

    @property
    def dots(self) -> int:
        return sum(self.columns)

    @property
    def is_empty(self) -> bool:
        return not self.columns

    @property
    def is_full(self) -> bool:
        return self.dots == self.m * self.n

    def rows(self) -> list[int]:
        """Dot count of each row, top to bottom."""
        return [sum(1 for g in self.columns if g > i) for i in range(self.m)]

    def transpose(self) -> "FerrersDiagram":
        return FerrersDiagram(self.rows()[::-1])

    def mask(self) -> np.ndarray:
        """Boolean ``m x n`` support: cell ``(r, c)`` holds a dot iff ``r < g_c``."""
        return np.arange(self.m)[:, None] < np.array(self.columns, dtype=np.int64)[None, :]

    def cells(self) -> list[tuple[int, int]]:
        return [(r, c) for c, g in enumerate(self.columns) for r in range(g)]

    def vmin(self, delta: int) -> int:
        """Upper bound on the dimension of any FDRMC on this diagram with distance ``delta``.

        The minimum over ``i`` of the dots left after deleting the top ``i``
        rows and the rightmost ``delta - 1 - i`` columns; deletions that
        exhaust the diagram count as zero.
        """
        if delta < 1:
            raise ValueError(f"delta must be >= 1, got {delta}")
        best = None
        for i in range(delta):
            keep = self.n - (delta - 1 - i)
            nu = sum(max(g - i, 0) for g in self.columns[: max(keep, 0)])
            best = nu if best is None else min(best, nu)
        return best

    def subdiagram(self, drop_left: int = 0, drop_bottom: int = 0) -> "FerrersDiagram":
        """Delete the ``drop_left`` leftmost columns and the ``drop_bottom`` bottom rows."""
        if drop_left < 0 or drop_bottom < 0:
            raise ValueError("drop counts must be non-negative")
        height = self.m - drop_bottom
        if drop_left >= self.n or height <= 0:
            raise ValueError(
                f"removing {drop_left} columns and {drop_bottom} rows exhausts {list(self.columns)}"
            )
        return FerrersDiagram([min(g, height) for g in self.columns[drop_left:]])

    def contains(self, other: "FerrersDiagram", col_offset: int = 0) -> bool:
        """True if ``other`` placed with its columns starting at ``col_offset`` fits inside."""
        if col_offset + other.n > self.n:
            return False
        return all(g <= self.columns[col_offset + j] for j, g in enumerate(other.columns))

    def __str__(self) -> str:
        return "[" + ",".join(str(g) for g in self.columns) + "]"


def runs(columns: Sequence[int]) -> list[tuple[int, int]]:
    """Group equal consecutive column counts into ``(count, multiplicity)`` pairs."""
    out: list[tuple[int, int]] = []
    for g in columns:
        if out and out[-1][0] == g:
            out[-1] = (g, out[-1][1] + 1)
        else:
            out.append((g, 1))
    return out
