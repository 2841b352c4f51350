"""Robot configurations, motion primitives, swept cells and the viewcone.

Coordinates: a cell ``(col, row)`` has its center at the real point
``(col, row)`` and covers ``[col - 0.5, col + 0.5] x [row - 0.5, row + 0.5]``.
Rows grow downward, so facing north means facing decreasing row.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import NamedTuple

from .exceptions import NotAPrimitive, OutOfBounds
from .workspace import CellState, RegionSet, WorkspaceGrid


class Orientation(IntEnum):
    N = 0
    E = 1
    S = 2
    W = 3

    @property
    def vector(self) -> tuple[int, int]:
        return FACING[self]


FACING = ((0, -1), (1, 0), (0, 1), (-1, 0))


class Configuration(NamedTuple):
    x: int
    y: int
    orient: int

    def __repr__(self):
        return f"({self.x},{self.y},{Orientation(self.orient).name})"


def successors(q: Configuration) -> list[Configuration]:
    """The six lattice neighbours of ``q`` in the order x+, x-, y+, y-, theta+, theta-."""
    x, y, o = q
    return [
        Configuration(x + 1, y, o),
        Configuration(x - 1, y, o),
        Configuration(x, y + 1, o),
        Configuration(x, y - 1, o),
        Configuration(x, y, (o + 1) % 4),
        Configuration(x, y, (o - 1) % 4),
    ]


def is_translation(q_a: Configuration, q_b: Configuration) -> bool:
    return q_a.orient == q_b.orient and abs(q_a.x - q_b.x) + abs(q_a.y - q_b.y) == 1


def is_primitive(q_a: Configuration, q_b: Configuration) -> bool:
    """True when ``q_b`` equals ``q_a`` or is one of its successors."""
    if q_a == q_b or is_translation(q_a, q_b):
        return True
    return (q_a.x, q_a.y) == (q_b.x, q_b.y) and (q_b.orient - q_a.orient) % 4 in (1, 3)


@dataclass(frozen=True)
class Ball:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("ball radius must be non-negative")

    def contains(self, p) -> bool:
        dx = p[0] - self.center[0]
        dy = p[1] - self.center[1]
        return dx * dx + dy * dy <= self.radius * self.radius


@dataclass(frozen=True)
class RobotSpec:
    """Square robot with a forward-facing viewcone.

    ``view_range`` defaults to ``ceil(1.5 * footprint_side)``. ``r_vis`` is
    derived by enumerating the free-space cone of every orientation.
    """

    footprint_side: int = 2
    view_range: int | None = None
    view_halfangle_deg: float = 45.0
    r_vis: float = field(init=False, compare=False)

    def __post_init__(self):
        if self.footprint_side < 1:
            raise ValueError("footprint_side must be >= 1")
        if self.view_range is None:
            object.__setattr__(self, "view_range", math.ceil(1.5 * self.footprint_side))
        if self.view_range < 0:
            raise ValueError("view_range must be >= 0")
        if not 0 <= self.view_halfangle_deg <= 180:
            raise ValueError("view_halfangle_deg must lie in [0, 180]")
        r2 = 0.0
        for o in range(4):
            cx, cy = _view_center_offset(self, o)
            for dc, dr, _ in _view_template(self, o):
                r2 = max(r2, (dc - cx) ** 2 + (dr - cy) ** 2)
        object.__setattr__(self, "r_vis", _covering_sqrt(r2))

    @property
    def center_offset(self) -> float:
        return (self.footprint_side - 1) / 2


def _covering_sqrt(r2: float) -> float:
    """Square root rounded up so that ``r * r >= r2`` also holds in floats."""
    r = math.sqrt(r2)
    while r * r < r2:
        r = math.nextafter(r, math.inf)
    return r


def footprint(q: Configuration, spec: RobotSpec) -> RegionSet:
    s = spec.footprint_side
    return RegionSet((q.x + i, q.y + j) for j in range(s) for i in range(s))


def footprint_center(q: Configuration, spec: RobotSpec) -> tuple[float, float]:
    h = spec.center_offset
    return (q.x + h, q.y + h)


def swept_cells(q_a: Configuration, q_b: Configuration, spec: RobotSpec) -> RegionSet:
    if is_translation(q_a, q_b):
        return footprint(q_a, spec) | footprint(q_b, spec)
    if is_primitive(q_a, q_b):
        return footprint(q_a, spec)
    raise NotAPrimitive(f"{q_b!r} is not a primitive motion away from {q_a!r}")


# -- viewcone ---------------------------------------------------------------


def _segment_touches_cell(ax2, ay2, bx2, by2, i, j) -> bool:
    """Closed segment vs closed cell square, all in doubled integer coordinates."""
    lo_x, hi_x = 2 * i - 1, 2 * i + 1
    lo_y, hi_y = 2 * j - 1, 2 * j + 1
    if max(min(ax2, bx2), lo_x) > min(max(ax2, bx2), hi_x):
        return False
    if max(min(ay2, by2), lo_y) > min(max(ay2, by2), hi_y):
        return False
    dx, dy = bx2 - ax2, by2 - ay2
    signs = set()
    for cx, cy in ((lo_x, lo_y), (hi_x, lo_y), (lo_x, hi_y), (hi_x, hi_y)):
        cross = dx * (cy - ay2) - dy * (cx - ax2)
        signs.add((cross > 0) - (cross < 0))
    return not (signs == {1} or signs == {-1})


def supercover(ax2: int, ay2: int, bx2: int, by2: int) -> list[tuple[int, int]]:
    """Cells touched by the segment between two points given in doubled coordinates."""
    i_lo = (min(ax2, bx2) - 1) // 2
    i_hi = (max(ax2, bx2) + 1) // 2 + 1
    j_lo = (min(ay2, by2) - 1) // 2
    j_hi = (max(ay2, by2) + 1) // 2 + 1
    return [
        (i, j)
        for j in range(j_lo, j_hi + 1)
        for i in range(i_lo, i_hi + 1)
        if _segment_touches_cell(ax2, ay2, bx2, by2, i, j)
    ]


def _origin_cell_offset(spec: RobotSpec, orient: int) -> tuple[int, int]:
    # Footprint cell holding the center; on a cell boundary, prefer the facing side
    # and then the lower index.
    s = spec.footprint_side
    fx, fy = FACING[orient]
    if s % 2:
        return (s // 2, s // 2)
    lo, hi = s // 2 - 1, s // 2
    col = hi if fx > 0 else lo
    row = hi if fy > 0 else lo
    return (col, row)


def _in_cone(vx2: int, vy2: int, orient: int, spec: RobotSpec) -> bool:
    n2 = vx2 * vx2 + vy2 * vy2
    if n2 == 0:
        return True
    limit = 2 * spec.view_range + 1
    if n2 > limit * limit:
        return False
    fx, fy = FACING[orient]
    dot = vx2 * fx + vy2 * fy
    half = math.radians(spec.view_halfangle_deg)
    cos_h = math.cos(half)
    if cos_h >= 0:
        if dot < 0:
            return False
        # Tolerance admits cells lying exactly on the cone edge (e.g. 45 degrees).
        return dot * dot >= n2 * cos_h * cos_h - 1e-9 * n2
    return dot >= 0 or dot * dot <= n2 * cos_h * cos_h + 1e-9 * n2


@lru_cache(maxsize=None)
def _view_template(spec: RobotSpec, orient: int):
    """Free-space cone cells relative to the reference cell, with LOS blockers.

    Each entry is ``(dc, dr, blockers)`` where ``blockers`` lists the cells the
    sight line crosses strictly before reaching the target.
    """
    s = spec.footprint_side
    ox2 = oy2 = s - 1
    reach = spec.view_range + s
    origin = _origin_cell_offset(spec, orient)
    entries = []
    for dr in range(-reach, reach + 1):
        for dc in range(-reach, reach + 1):
            vx2, vy2 = 2 * dc - ox2, 2 * dr - oy2
            if (dc, dr) != origin and not _in_cone(vx2, vy2, orient, spec):
                continue
            line = supercover(ox2, oy2, 2 * dc, 2 * dr)
            blockers = tuple(c for c in line if c != (dc, dr))
            entries.append((vx2 * vx2 + vy2 * vy2, dr, dc, blockers))
    entries.sort(key=lambda e: (e[0], e[1], e[2]))
    return tuple((dc, dr, blockers) for _, dr, dc, blockers in entries)


def visible_cells(grid: WorkspaceGrid, q: Configuration, spec: RobotSpec) -> RegionSet:
    s = spec.footprint_side
    if not (grid.in_bounds(q.x, q.y) and grid.in_bounds(q.x + s - 1, q.y + s - 1)):
        raise OutOfBounds(f"footprint of {q!r} leaves the grid")
    return RegionSet(_visible_cells_fast(grid, q, spec))


def _visible_cells_fast(grid: WorkspaceGrid, q, spec: RobotSpec) -> list[tuple[int, int]]:
    w, h = grid.width, grid.height
    states = grid.states
    obstacle = CellState.OBSTACLE
    x, y = q[0], q[1]
    out = []
    for dc, dr, blockers in _view_template(spec, q[2]):
        c, r = x + dc, y + dr
        if not (0 <= c < w and 0 <= r < h):
            continue
        for bc, br in blockers:
            bc += x
            br += y
            if not (0 <= bc < w and 0 <= br < h) or states[br * w + bc] == obstacle:
                break
        else:
            out.append((c, r))
    return out


def _view_center_offset(spec: RobotSpec, orient: int) -> tuple[float, float]:
    h = spec.center_offset
    fx, fy = FACING[orient]
    half = spec.view_range / 2
    return (h + half * fx, h + half * fy)


def view_ball(q: Configuration, spec: RobotSpec) -> Ball:
    """Ball guaranteed to contain ``visible_cells(q)`` on any grid."""
    cx, cy = _view_center_offset(spec, q.orient)
    return Ball((q.x + cx, q.y + cy), spec.r_vis)


def swept_ball(q_a: Configuration, q_b: Configuration, spec: RobotSpec) -> Ball:
    cells = swept_cells(q_a, q_b, spec)
    ax, ay = footprint_center(q_a, spec)
    bx, by = footprint_center(q_b, spec)
    cx, cy = (ax + bx) / 2, (ay + by) / 2
    r2 = 0.0
    for c, r in cells:
        for kx in (c - 0.5, c + 0.5):
            for ky in (r - 0.5, r + 0.5):
                r2 = max(r2, (kx - cx) ** 2 + (ky - cy) ** 2)
    return Ball((cx, cy), _covering_sqrt(r2))
