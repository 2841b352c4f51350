"""Immutable, batch-built kd-tree with exact ball range queries.

The tree is stored implicitly: after construction the items are permuted so
that the node of the sub-range ``[lo, hi)`` sits at ``(lo + hi) // 2`` and its
children own ``[lo, mid)`` and ``[mid + 1, hi)``.
"""
from __future__ import annotations

import math
from typing import Any, Hashable, Iterator, NamedTuple, Sequence

from .exceptions import NegativeRadius


class PointLabel(NamedTuple):
    point: tuple[float, ...]
    label: Hashable | Any


# Sub-ranges this small are scanned linearly during queries.
LEAF_SCAN = 8


class KdTree:
    __slots__ = ("_items", "_coords", "count", "dim", "_lo", "_hi")

    def __init__(self, items, coords, dim):
        self._items = items
        self._coords = coords
        self.count = len(items)
        self.dim = dim
        if coords:
            self._lo = tuple(min(c[k] for c in coords) for k in range(dim))
            self._hi = tuple(max(c[k] for c in coords) for k in range(dim))
        else:
            self._lo = self._hi = ()

    @classmethod
    def build(cls, points: Sequence[PointLabel], dim: int | None = None) -> "KdTree":
        """Median-split build; ties on the split coordinate keep input order."""
        points = list(points)
        if dim is None:
            dim = len(points[0].point) if points else 2
        for p in points:
            if len(p.point) != dim or not all(math.isfinite(v) for v in p.point):
                raise ValueError(f"bad point {p.point!r} for a {dim}-d tree")
        order = list(range(len(points)))
        # Explicit stack instead of recursion: trees may hold 10^5 points.
        stack = [(0, len(order), 0)]
        while stack:
            lo, hi, axis = stack.pop()
            if hi - lo <= 1:
                continue
            order[lo:hi] = sorted(order[lo:hi], key=lambda i: (points[i].point[axis], i))
            mid = (lo + hi) // 2
            nxt = (axis + 1) % dim
            stack.append((lo, mid, nxt))
            stack.append((mid + 1, hi, nxt))
        items = [points[i] for i in order]
        coords = [p.point for p in items]
        return cls(items, coords, dim)

    def __len__(self):
        return self.count

    def __iter__(self):
        return iter(self._items)

    @property
    def depth(self) -> int:
        return self.count.bit_length()

    def points(self) -> list[PointLabel]:
        return list(self._items)

    def iter_ball(self, center, r: float, visits: list[int] | None = None) -> Iterator[PointLabel]:
        """Yield stored items within distance ``r`` of ``center`` (inclusive).

        ``visits``, when given, is a one-element list incremented per visited node.
        """
        if r < 0:
            raise NegativeRadius(f"radius {r} < 0")
        if not self.count:
            return
        r2 = r * r
        # Whole-tree reject against the bounding box.
        gap2 = 0.0
        for c, lo, hi in zip(center, self._lo, self._hi):
            if c < lo:
                gap2 += (lo - c) * (lo - c)
            elif c > hi:
                gap2 += (c - hi) * (c - hi)
        if gap2 > r2:
            return
        coords = self._coords
        items = self._items
        dim = self.dim
        stack = [(0, self.count, 0)]
        pop, push = stack.pop, stack.append
        visited = 0
        if dim == 2:
            qx, qy = center[0], center[1]
            while stack:
                lo, hi, axis = pop()
                if hi - lo <= LEAF_SCAN:
                    visited += hi - lo
                    for i in range(lo, hi):
                        px, py = coords[i]
                        dx = qx - px
                        dy = qy - py
                        if dx * dx + dy * dy <= r2:
                            yield items[i]
                    continue
                mid = (lo + hi) >> 1
                visited += 1
                px, py = coords[mid]
                dx = qx - px
                dy = qy - py
                if dx * dx + dy * dy <= r2:
                    yield items[mid]
                diff = dx if axis == 0 else dy
                # Left subtree holds coordinates <= the split value, right holds >=.
                if diff >= 0 or diff * diff <= r2:
                    push((mid + 1, hi, axis ^ 1))
                if diff <= 0 or diff * diff <= r2:
                    push((lo, mid, axis ^ 1))
        else:
            while stack:
                lo, hi, axis = pop()
                if lo >= hi:
                    continue
                mid = (lo + hi) >> 1
                visited += 1
                p = coords[mid]
                d2 = 0.0
                for k in range(dim):
                    t = center[k] - p[k]
                    d2 += t * t
                if d2 <= r2:
                    yield items[mid]
                diff = center[axis] - p[axis]
                nxt = (axis + 1) % dim
                if diff >= 0 or diff * diff <= r2:
                    push((mid + 1, hi, nxt))
                if diff <= 0 or diff * diff <= r2:
                    push((lo, mid, nxt))
        if visits is not None:
            visits[0] += visited

    def ball_query(self, center, r: float, visits: list[int] | None = None) -> list[PointLabel]:
        return list(self.iter_ball(center, r, visits))

    def check_invariants(self) -> None:
        """Assert the split-plane ordering of every node; used by tests."""
        stack = [(0, self.count, 0)]
        while stack:
            lo, hi, axis = stack.pop()
            if hi - lo <= 0:
                continue
            mid = (lo + hi) // 2
            split = self._coords[mid][axis]
            assert all(self._coords[i][axis] <= split for i in range(lo, mid))
            assert all(self._coords[i][axis] >= split for i in range(mid + 1, hi))
            nxt = (axis + 1) % self.dim
            stack.append((lo, mid, nxt))
            stack.append((mid + 1, hi, nxt))


def build(points: Sequence[PointLabel]) -> KdTree:
    return KdTree.build(points)


def ball_query(tree: KdTree, center, r: float) -> list[PointLabel]:
    return tree.ball_query(center, r)
