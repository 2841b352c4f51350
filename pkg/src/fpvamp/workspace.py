"""Discretized planar workspace: cell states, the grid, and cell regions."""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, NamedTuple

from .exceptions import OutOfBounds


class CellCoord(NamedTuple):
    col: int
    row: int


class CellState(IntEnum):
    FREE = 0
    OBSTACLE = 1
    GLASS = 2

    @property
    def blocks_motion(self) -> bool:
        return self is not CellState.FREE

    @property
    def blocks_sight(self) -> bool:
        return self is CellState.OBSTACLE


class RegionSet(frozenset):
    """Immutable set of ``(col, row)`` cells."""

    def size(self) -> int:
        return len(self)

    def union(self, *others) -> "RegionSet":
        return RegionSet(frozenset.union(self, *others))

    def difference(self, *others) -> "RegionSet":
        return RegionSet(frozenset.difference(self, *others))

    def intersection(self, *others) -> "RegionSet":
        return RegionSet(frozenset.intersection(self, *others))

    def __or__(self, other):
        return RegionSet(frozenset.__or__(self, other))

    def __sub__(self, other):
        return RegionSet(frozenset.__sub__(self, other))

    def __and__(self, other):
        return RegionSet(frozenset.__and__(self, other))

    def __repr__(self):
        return f"RegionSet({sorted(self)!r})"


EMPTY_REGION = RegionSet()


def union(a: Iterable, b: Iterable) -> RegionSet:
    return RegionSet(a) | RegionSet(b)


def difference(a: Iterable, b: Iterable) -> RegionSet:
    return RegionSet(a) - RegionSet(b)


def size(a: Iterable) -> int:
    return len(RegionSet(a))


@dataclass(frozen=True)
class WorkspaceGrid:
    """Dense row-major grid of :class:`CellState` values.

    ``states`` is a ``bytes`` object of length ``width * height`` holding the
    integer value of each cell state.
    """

    width: int
    height: int
    states: bytes

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        if len(self.states) != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} cell states, got {len(self.states)}"
            )
        if any(b > 2 for b in set(self.states)):
            raise ValueError("unknown cell state value")

    @classmethod
    def from_rows(cls, rows) -> "WorkspaceGrid":
        rows = [list(r) for r in rows]
        height = len(rows)
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(width, height, bytes(int(s) for r in rows for s in r))

    def in_bounds(self, col: int, row: int) -> bool:
        return 0 <= col < self.width and 0 <= row < self.height

    def state(self, col: int, row: int) -> CellState:
        if not self.in_bounds(col, row):
            raise OutOfBounds(f"cell ({col}, {row}) outside {self.width}x{self.height} grid")
        return CellState(self.states[row * self.width + col])

    def cells_in_state(self, state: CellState) -> RegionSet:
        w = self.width
        return RegionSet(
            (i % w, i // w) for i, s in enumerate(self.states) if s == state
        )

    def boundary_sealed(self) -> bool:
        w, h = self.width, self.height
        ring = [(c, 0) for c in range(w)] + [(c, h - 1) for c in range(w)]
        ring += [(0, r) for r in range(h)] + [(w - 1, r) for r in range(h)]
        return all(self.state(c, r) is CellState.OBSTACLE for c, r in ring)
