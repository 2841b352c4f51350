"""Fully persistent nearest-neighbor tree.

Every insertion returns a new immutable version node. A version holds its own
point, a link to its predecessor, its depth and a *forest*: a tuple whose slot
``i`` is either ``None`` or a shared :class:`KdTree` of exactly ``2**i * M``
points. The most recent ``((depth - 1) % M) + 1`` points are not in the forest;
they are reached by walking predecessor links (the lookback).

Forests are shared between versions whenever possible, so inserting under an
old version never touches any other version.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .exceptions import NegativeRadius
from .kdtree import KdTree, PointLabel

NODE_UNITS = 64
SLOT_UNITS = 8
POINT_LABEL_UNITS = 24
KD_NODE_UNITS = 40


@dataclass(frozen=True)
class FpnntConfig:
    M: int = 32

    def __post_init__(self):
        if isinstance(self.M, bool) or not isinstance(self.M, int) or self.M < 1:
            raise ValueError(f"M must be an integer >= 1, got {self.M!r}")


class FpnntNode(NamedTuple):
    """One immutable version. Equality is identity: versions are never merged."""

    point_label: PointLabel
    predecessor: "FpnntNode | None"
    depth: int
    forest: tuple
    M: int

    __eq__ = object.__eq__
    __ne__ = object.__ne__
    __hash__ = object.__hash__

    def __repr__(self):
        occupied = [i for i, t in enumerate(self.forest) if t is not None]
        return f"FpnntNode(depth={self.depth}, M={self.M}, slots={occupied})"

    @property
    def lookback_size(self) -> int:
        return (self.depth - 1) % self.M + 1

    def occupied_slots(self) -> dict[int, int]:
        return {i: t.count for i, t in enumerate(self.forest) if t is not None}


def new_root(p: PointLabel, cfg: FpnntConfig = FpnntConfig()) -> FpnntNode:
    return FpnntNode(_as_point_label(p), None, 1, (), cfg.M)


def _as_point_label(p) -> PointLabel:
    if isinstance(p, PointLabel):
        return p
    point, label = p
    return PointLabel(tuple(point), label)


def lookback(node: FpnntNode) -> list[PointLabel]:
    """Point-labels held outside the forest, newest first."""
    out = []
    n = node
    for _ in range(node.lookback_size):
        out.append(n.point_label)
        n = n.predecessor
    return out


def insert_node(n_pred: FpnntNode, p_succ: PointLabel, stats=None) -> FpnntNode:
    """Create the version holding ``p_succ`` plus everything in ``n_pred``.

    When the predecessor's depth is a multiple of ``M`` its lookback is merged
    with the run of occupied low slots into one freshly built tree, like a
    carry in a binary counter. ``stats``, if given, is a dict whose
    ``"built_points"`` entry accumulates the number of points passed to builds.
    """
    M = n_pred.M
    forest = n_pred.forest
    if n_pred.depth % M == 0:
        pts = lookback(n_pred)
        slots = list(forest)
        k = 0
        while k < len(slots) and slots[k] is not None:
            pts.extend(slots[k])
            slots[k] = None
            k += 1
        if k == len(slots):
            slots.append(None)
        slots[k] = KdTree.build(pts)
        forest = tuple(slots)
        if stats is not None:
            stats["built_points"] = stats.get("built_points", 0) + len(pts)
            stats["builds"] = stats.get("builds", 0) + 1
    return FpnntNode(_as_point_label(p_succ), n_pred, n_pred.depth + 1, forest, M)


def iter_range(node: FpnntNode, center, r: float) -> Iterator[PointLabel]:
    """Lazily yield matches: lookback newest first, then forest slots ascending."""
    if r < 0:
        raise NegativeRadius(f"radius {r} < 0")
    r2 = r * r
    n = node
    # Tuple indexing: [0] point_label, [1] predecessor; hot loop.
    if len(center) == 2:
        cx, cy = center[0], center[1]
        for _ in range((node[2] - 1) % node[4] + 1):
            pl = n[0]
            p = pl[0]
            dx = p[0] - cx
            dy = p[1] - cy
            if dx * dx + dy * dy <= r2:
                yield pl
            n = n[1]
    else:
        for _ in range((node[2] - 1) % node[4] + 1):
            pl = n[0]
            if sum((a - b) ** 2 for a, b in zip(pl[0], center)) <= r2:
                yield pl
            n = n[1]
    for tree in node[3]:
        if tree is not None:
            yield from tree.iter_ball(center, r)


def range_query(node: FpnntNode, center, r: float) -> list[PointLabel]:
    return list(iter_range(node, center, r))


def chain(node: FpnntNode) -> list[PointLabel]:
    """All point-labels of a version by walking to the root, newest first."""
    out = []
    n = node
    while n is not None:
        out.append(n.point_label)
        n = n.predecessor
    return out


def logical_size(nodes: FpnntNode | Iterable[FpnntNode]) -> int:
    """Platform-independent storage units reachable from the given versions.

    Every distinct version on the given nodes' ancestor chains costs a node
    header, its point-label and one reference per forest slot. Each distinct
    tree is charged once per stored point, however many versions share it.
    """
    if isinstance(nodes, FpnntNode):
        nodes = [nodes]
    seen_nodes = set()
    seen_trees = set()
    total = 0
    for node in nodes:
        n = node
        while n is not None and id(n) not in seen_nodes:
            seen_nodes.add(id(n))
            total += NODE_UNITS + POINT_LABEL_UNITS + SLOT_UNITS * len(n.forest)
            for t in n.forest:
                if t is not None and id(t) not in seen_trees:
                    seen_trees.add(id(t))
                    total += KD_NODE_UNITS * t.count
            n = n.predecessor
    return total
