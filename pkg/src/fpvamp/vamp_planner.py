"""Relaxed visibility-aware motion planning over the configuration lattice.

The search keeps no explicit visible region per node. Each node carries a
handle into a persistent *path index* holding the viewcone ball centers of
every configuration on its path; the unseen part of a candidate motion is
found by querying that index with the motion's bounding ball.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, NamedTuple

from sklearn.base import BaseEstimator

from . import fpnnt
from ._validation import check_instance, check_scalar
from .exceptions import Collision, InvalidPath, NoPath, NotAPrimitive
from .grid_world import ProblemInstance
from .kdtree import PointLabel
from .robot_geometry import (
    FACING,
    Configuration,
    RobotSpec,
    _view_center_offset,
    _visible_cells_fast,
    footprint,
    is_primitive,
    successors,
    swept_ball,
    swept_cells,
    visible_cells,
)
from .workspace import CellState, RegionSet, WorkspaceGrid

SEARCH_NODE_UNITS = 48
BASELINE_LINK_UNITS = fpnnt.POINT_LABEL_UNITS + 8


# -- path indices ---------------------------------------------------------------


class _Link(NamedTuple):
    point_label: PointLabel
    x: float
    y: float
    parent: "_Link | None"

    __eq__ = object.__eq__
    __ne__ = object.__ne__
    __hash__ = object.__hash__


class BaselineIndex:
    """Per-node point-label with a parent link; queries scan the whole path."""

    name = "baseline"

    def root(self, point, label) -> _Link:
        return _Link(PointLabel(point, label), point[0], point[1], None)

    def insert(self, handle: _Link, point, label) -> _Link:
        return _Link(PointLabel(point, label), point[0], point[1], handle)

    def iter_range(self, handle: _Link, center, r: float) -> Iterator[PointLabel]:
        r2 = r * r
        cx, cy = center
        link = handle
        while link is not None:
            pl, x, y, link = link
            x -= cx
            y -= cy
            if x * x + y * y <= r2:
                yield pl

    def range_query(self, handle, center, r) -> list[PointLabel]:
        return list(self.iter_range(handle, center, r))

    def logical_size(self, handles) -> int:
        seen = set()
        for h in handles:
            while h is not None and id(h) not in seen:
                seen.add(id(h))
                h = h.parent
        return BASELINE_LINK_UNITS * len(seen)


class FpnntIndex:
    """Path index backed by the fully persistent nearest-neighbor tree."""

    name = "fpnnt"

    def __init__(self, M: int = 32):
        self.config = fpnnt.FpnntConfig(M)
        self.build_stats: dict = {}

    def root(self, point, label) -> fpnnt.FpnntNode:
        return fpnnt.new_root(PointLabel(point, label), self.config)

    def insert(self, handle, point, label) -> fpnnt.FpnntNode:
        return fpnnt.insert_node(handle, PointLabel(point, label), self.build_stats)

    def iter_range(self, handle, center, r) -> Iterator[PointLabel]:
        return fpnnt.iter_range(handle, center, r)

    def range_query(self, handle, center, r) -> list[PointLabel]:
        return fpnnt.range_query(handle, center, r)

    def logical_size(self, handles) -> int:
        return fpnnt.logical_size(handles)


class Strategy(Enum):
    BASELINE = "baseline"
    FPNNT = "fpnnt"


def make_index(strategy, M: int = 32):
    strategy = Strategy(strategy.value if isinstance(strategy, Strategy) else str(strategy).lower())
    return BaselineIndex() if strategy is Strategy.BASELINE else FpnntIndex(M)


# -- geometry bound to one instance -------------------------------------------


class VisibilityModel:
    """Caches per-configuration geometry for a fixed grid, robot and ``v0``.

    Internally a cell ``(col, row)`` is the integer ``row * width + col``.
    """

    def __init__(self, grid: WorkspaceGrid, spec: RobotSpec, v0):
        self.grid = grid
        self.spec = spec
        self.width = w = grid.width
        self.v0 = frozenset(r * w + c for c, r in v0)
        self.r_vis = spec.r_vis
        self._vis = {}
        self._free = {}
        s = spec.footprint_side
        fp = tuple(j * w + i for j in range(s) for i in range(s))
        self._fp_offsets = fp
        self._view_offsets = tuple(_view_center_offset(spec, o) for o in range(4))
        self._center_offset = spec.center_offset
        ref = Configuration(0, 0, 0)
        motions = successors(ref) + [ref]
        shift = (1, -1, w, -w, 0, 0, 0)
        self._swept_offsets = tuple(
            tuple(sorted(set(fp) | {o + d for o in fp})) for d in shift
        )
        # Ball radius per successor slot (slot 6 is the identity motion).
        self._swept_radius = tuple(swept_ball(ref, q, spec).radius for q in motions)

    def cell_id(self, c: int, r: int) -> int:
        return r * self.width + c

    def to_region(self, ids) -> RegionSet:
        w = self.width
        return RegionSet((i % w, i // w) for i in ids)

    def visible(self, q) -> frozenset:
        v = self._vis.get(q)
        if v is None:
            w = self.width
            v = self._vis[q] = frozenset(
                r * w + c for c, r in _visible_cells_fast(self.grid, q, self.spec)
            )
        return v

    def footprint_free(self, x: int, y: int) -> bool:
        key = (x, y)
        ok = self._free.get(key)
        if ok is None:
            g = self.grid
            s = self.spec.footprint_side
            if not (0 <= x and 0 <= y and x + s <= g.width and y + s <= g.height):
                ok = False
            else:
                base = y * g.width + x
                states = g.states
                ok = all(states[base + o] == CellState.FREE for o in self._fp_offsets)
            self._free[key] = ok
        return ok

    def view_center(self, q) -> tuple[float, float]:
        cx, cy = self._view_offsets[q[2]]
        return (q[0] + cx, q[1] + cy)

    def swept(self, q_a, slot: int) -> frozenset:
        base = q_a[1] * self.width + q_a[0]
        return frozenset([base + o for o in self._swept_offsets[slot]])

    def swept_ball(self, q_a, slot: int):
        h = self._center_offset
        dx, dy = _SLOT_SHIFT[slot]
        return (q_a[0] + h + dx / 2, q_a[1] + h + dy / 2), self._swept_radius[slot]

    def find_vis_viol(self, index, handle, q_i, q_next, slot: int | None = None) -> frozenset:
        """Unseen part (cell ids) of the swept region of ``q_i -> q_next``.

        ``slot`` is the position of ``q_next`` in ``successors(q_i)``; the
        identity motion is accepted when it is omitted.
        """
        if slot is None:
            slot = _motion_slot(q_i, q_next)
        unseen = self.swept(q_i, slot) - self.v0
        if not unseen:
            return unseen
        center, r_s = self.swept_ball(q_i, slot)
        vis_get = self._vis.get
        visible = self.visible
        for pl in index.iter_range(handle, center, self.r_vis + r_s):
            q = pl[1]
            v = vis_get(q)
            if v is None:
                v = visible(q)
            unseen = unseen - v
            if not unseen:
                break
        return unseen


_SLOT_SHIFT = ((1, 0), (-1, 0), (0, 1), (0, -1), (0, 0), (0, 0), (0, 0))


def _motion_slot(q_i, q_next) -> int:
    nbrs = successors(Configuration(*q_i))
    if tuple(q_next) in nbrs:
        return nbrs.index(tuple(q_next))
    if tuple(q_next) == tuple(q_i):
        return 6
    raise NotAPrimitive(f"{q_next!r} is not adjacent to {q_i!r}")


def find_vis_viol(
    index,
    handle,
    q_i: Configuration,
    q_next: Configuration,
    spec: RobotSpec,
    grid: WorkspaceGrid,
    v0,
    model: VisibilityModel | None = None,
) -> RegionSet:
    """Cells swept by ``q_i -> q_next`` outside ``v0`` and every viewcone in ``handle``."""
    if not is_primitive(q_i, q_next):
        raise NotAPrimitive(f"{q_next!r} is not adjacent to {q_i!r}")
    model = model or VisibilityModel(grid, spec, v0)
    if not all(model.footprint_free(q[0], q[1]) for q in (q_i, q_next)):
        raise Collision(f"motion {q_i!r} -> {q_next!r} hits an obstacle")
    return model.to_region(model.find_vis_viol(index, handle, q_i, q_next))


# -- search -----------------------------------------------------------------------


@dataclass(frozen=True)
class PlannerConfig:
    c_step: float = 1.0
    c_viol: float = 100.0
    use_heuristic: bool = True
    strategy: Strategy = Strategy.FPNNT
    M: int = 32

    def __post_init__(self):
        check_scalar(self.c_step, "c_step", (int, float), min_val=0, include_boundaries="neither")
        check_scalar(self.c_viol, "c_viol", (int, float), min_val=0)
        check_scalar(self.M, "M", int, min_val=1)
        if not isinstance(self.strategy, Strategy):
            object.__setattr__(self, "strategy", Strategy(str(self.strategy).lower()))


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    nodes_generated: int = 0
    find_vis_viol_calls: int = 0
    find_vis_viol_time: float = 0.0
    insert_time: float = 0.0
    total_time: float = 0.0
    logical_memory: int = 0


@dataclass
class PathResult:
    path: list
    total_violation_cells: int
    steps: int
    stats: SearchStats = field(default_factory=SearchStats)


class SearchNode:
    __slots__ = ("q", "parent", "index_handle", "g_steps", "g_viol", "priority")

    def __init__(self, q, parent, index_handle, g_steps, g_viol, priority):
        self.q = q
        self.parent = parent
        self.index_handle = index_handle
        self.g_steps = g_steps
        self.g_viol = g_viol
        self.priority = priority

    def path(self) -> list[Configuration]:
        out = []
        n = self
        while n is not None:
            out.append(n.q)
            n = n.parent
        out.reverse()
        return out


def _goal_reference_cells(goal_cells, spec: RobotSpec) -> frozenset:
    s = spec.footprint_side
    return frozenset((c - i, r - j) for c, r in goal_cells for j in range(s) for i in range(s))


def _footprint_to_box(spec: RobotSpec, goal_cells):
    """L1 distance from a footprint to the goal cells' bounding box."""
    cols = [c for c, _ in goal_cells]
    rows = [r for _, r in goal_cells]
    c0, c1, r0, r1 = min(cols), max(cols), min(rows), max(rows)
    s1 = spec.footprint_side - 1

    def h(x, y):
        dx = c0 - (x + s1) if x + s1 < c0 else (x - c1 if x > c1 else 0)
        dy = r0 - (y + s1) if y + s1 < r0 else (y - r1 if y > r1 else 0)
        return dx + dy

    return h


def relaxed_vamp_search(
    instance: ProblemInstance,
    spec: RobotSpec = RobotSpec(),
    cfg: PlannerConfig = PlannerConfig(),
) -> PathResult:
    """Best-first search that charges each motion for its unseen swept cells.

    Priority is ``c_step * steps + c_viol * violation_cells + h``; ties go to
    fewer violation cells, then fewer steps, then generation order. Only the
    best cost per configuration is kept and a configuration is re-opened when a
    strictly cheaper path to it appears.
    """
    check_instance(instance)
    t_start = time.perf_counter()
    perf = time.perf_counter
    stats = SearchStats()
    index = make_index(cfg.strategy, cfg.M)
    model = VisibilityModel(instance.grid, spec, instance.v0)
    c_step, c_viol = cfg.c_step, cfg.c_viol
    goal_refs = _goal_reference_cells(instance.goal_cells, spec)
    if not instance.goal_cells:
        raise NoPath("empty goal region")
    h_fn = _footprint_to_box(spec, instance.goal_cells) if cfg.use_heuristic else (lambda x, y: 0)

    q0 = Configuration(*instance.q0)
    if not model.footprint_free(q0.x, q0.y):
        raise Collision(f"start {q0!r} is in collision")
    t0 = perf()
    root_handle = index.root(model.view_center(q0), q0)
    insert_time = perf() - t0
    root = SearchNode(q0, None, root_handle, 0, 0, c_step * h_fn(q0.x, q0.y))
    all_nodes = [root]
    best = {q0: 0.0}
    seq = 0
    heap = [(root.priority, 0, 0, seq, root)]
    vis_time = 0.0
    vis_calls = 0
    expanded = 0
    footprint_free = model.footprint_free
    find = model.find_vis_viol
    view_center = model.view_center
    insert = index.insert
    push, pop = heapq.heappush, heapq.heappop
    found = None
    inf = math.inf

    while heap:
        _, g_viol, g_steps, _, node = pop(heap)
        q = node.q
        cost = c_step * g_steps + c_viol * g_viol
        if cost > best[q]:
            continue
        if (q[0], q[1]) in goal_refs:
            found = node
            break
        expanded += 1
        handle = node.index_handle
        x, y, o = q
        for slot, q_next in enumerate((
            (x + 1, y, o), (x - 1, y, o), (x, y + 1, o), (x, y - 1, o),
            (x, y, (o + 1) & 3), (x, y, (o - 1) & 3),
        )):
            if slot < 4 and not footprint_free(q_next[0], q_next[1]):
                continue
            n_steps = g_steps + 1
            known = best.get(q_next, inf)
            # Violations only add cost: skip the query when the child loses anyway.
            if c_step * n_steps + c_viol * g_viol >= known:
                continue
            t0 = perf()
            viol = len(find(index, handle, q, q_next, slot))
            vis_time += perf() - t0
            vis_calls += 1
            n_viol = g_viol + viol
            n_cost = c_step * n_steps + c_viol * n_viol
            if n_cost >= known:
                continue
            q_next = Configuration(*q_next)
            best[q_next] = n_cost
            t0 = perf()
            child_handle = insert(handle, view_center(q_next), q_next)
            insert_time += perf() - t0
            prio = n_cost + c_step * h_fn(q_next[0], q_next[1])
            child = SearchNode(q_next, node, child_handle, n_steps, n_viol, prio)
            all_nodes.append(child)
            seq += 1
            push(heap, (prio, n_viol, n_steps, seq, child))

    stats.nodes_expanded = expanded
    stats.nodes_generated = len(all_nodes)
    stats.find_vis_viol_calls = vis_calls
    stats.find_vis_viol_time = vis_time
    stats.insert_time = insert_time
    stats.logical_memory = SEARCH_NODE_UNITS * len(all_nodes) + index.logical_size(
        n.index_handle for n in all_nodes
    )
    stats.total_time = time.perf_counter() - t_start
    if found is None:
        raise NoPath(f"no collision-free path from {q0!r} to the goal region")
    path = found.path()
    return PathResult(path, found.g_viol, found.g_steps, stats)


# -- oracles ----------------------------------------------------------------------


def _check_path_edges(path, instance, spec):
    grid = instance.grid
    for a, b in zip(path, path[1:]):
        if not is_primitive(a, b):
            raise InvalidPath(f"{b!r} does not follow {a!r} by a primitive motion")
    for q in path:
        for c, r in footprint(q, spec):
            if not grid.in_bounds(c, r):
                raise InvalidPath(f"{q!r} leaves the grid")


def _collision_free(path, instance, spec) -> bool:
    grid = instance.grid
    cells = set()
    for q in path:
        cells |= footprint(q, spec)
    return all(grid.state(c, r) is CellState.FREE for c, r in cells)


def violation_of_path(path, instance: ProblemInstance, spec: RobotSpec = RobotSpec()) -> RegionSet:
    """Union of per-edge unseen swept cells, tracked with an explicit seen set."""
    path = [Configuration(*q) for q in path]
    _check_path_edges(path, instance, spec)
    if not _collision_free(path, instance, spec):
        raise InvalidPath("path is not collision-free")
    seen = set(instance.v0)
    out = set()
    for a, b in zip(path, path[1:]):
        seen |= visible_cells(instance.grid, a, spec)
        out |= swept_cells(a, b, spec) - seen
    return RegionSet(out)


def check_feasible(path, instance: ProblemInstance, spec: RobotSpec = RobotSpec()) -> bool:
    path = [Configuration(*q) for q in path]
    if not path:
        return True
    try:
        _check_path_edges(path, instance, spec)
    except InvalidPath:
        return False
    if not _collision_free(path, instance, spec):
        return False
    if len(path) == 1:
        return footprint(path[0], spec) <= instance.v0
    seen = set(instance.v0)
    for a, b in zip(path, path[1:]):
        seen |= visible_cells(instance.grid, a, spec)
        if not swept_cells(a, b, spec) <= seen:
            return False
    return True


# -- estimator front end ------------------------------------------------------------


class RelaxedVampPlanner(BaseEstimator):
    """Estimator-style wrapper around :func:`relaxed_vamp_search`.

    ``fit(instance)`` runs the search and stores ``result_``, ``path_``,
    ``total_violation_cells_`` and ``stats_``.
    """

    def __init__(self, c_step=1.0, c_viol=100.0, use_heuristic=True, strategy="fpnnt",
                 M=32, footprint_side=2, view_range=None, view_halfangle_deg=45.0):
        self.c_step = c_step
        self.c_viol = c_viol
        self.use_heuristic = use_heuristic
        self.strategy = strategy
        self.M = M
        self.footprint_side = footprint_side
        self.view_range = view_range
        self.view_halfangle_deg = view_halfangle_deg

    def _robot(self) -> RobotSpec:
        return RobotSpec(self.footprint_side, self.view_range, self.view_halfangle_deg)

    def _config(self) -> PlannerConfig:
        return PlannerConfig(self.c_step, self.c_viol, self.use_heuristic,
                             Strategy(str(getattr(self.strategy, "value", self.strategy)).lower()), self.M)

    def fit(self, instance, y=None):
        self.robot_ = self._robot()
        self.result_ = relaxed_vamp_search(instance, self.robot_, self._config())
        self.path_ = self.result_.path
        self.total_violation_cells_ = self.result_.total_violation_cells
        self.stats_ = self.result_.stats
        return self

    def violation_region(self, instance) -> RegionSet:
        """Union-form violation region of the fitted path on ``instance``."""
        if not hasattr(self, "result_"):
            from sklearn.exceptions import NotFittedError

            raise NotFittedError("call fit() first")
        return violation_of_path(self.path_, instance, self.robot_)
