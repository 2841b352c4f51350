"""Quick randomized equivalence checks against brute-force oracles.

Each check returns ``(name, ok, detail)``. They are small versions of the
property suites in the test tree, meant to be run from the command line on a
fresh install.
"""
from __future__ import annotations

import math
import random

from . import fpnnt
from .grid_world import DomainKind, DomainSpec, generate
from .kdtree import KdTree, PointLabel
from .robot_geometry import Configuration, RobotSpec, footprint, successors, swept_cells, visible_cells
from .vamp_planner import (
    PlannerConfig,
    Strategy,
    VisibilityModel,
    make_index,
    relaxed_vamp_search,
    violation_of_path,
)
from .workspace import CellState, WorkspaceGrid


def _scan(points, center, r):
    return {pl for pl in points if math.dist(pl.point, center) <= r}


def check_kdtree(rng: random.Random, rounds: int = 200):
    for _ in range(rounds):
        pts = [PointLabel((rng.randint(0, 30) / 2, rng.randint(0, 30) / 2), i)
               for i in range(rng.randint(0, 60))]
        tree = KdTree.build(pts)
        c = (rng.uniform(-2, 17), rng.uniform(-2, 17))
        r = rng.uniform(0, 6)
        if set(tree.ball_query(c, r)) != _scan(pts, c, r):
            return False, f"mismatch at center={c} r={r}"
    return True, f"{rounds} queries"


def check_fpnnt(rng: random.Random, schedules: int = 60):
    for _ in range(schedules):
        M = rng.choice((1, 2, 5, 32))
        versions = [fpnnt.new_root(PointLabel((0.0, 0.0), 0), fpnnt.FpnntConfig(M))]
        for i in range(1, rng.randint(1, 200)):
            base = versions[-1] if rng.random() < 0.8 else rng.choice(versions)
            p = PointLabel((rng.uniform(0, 20), rng.uniform(0, 20)), i)
            versions.append(fpnnt.insert_node(base, p))
        for _ in range(10):
            v = rng.choice(versions)
            c = (rng.uniform(0, 20), rng.uniform(0, 20))
            r = rng.uniform(0, 8)
            if set(fpnnt.range_query(v, c, r)) != _scan(fpnnt.chain(v), c, r):
                return False, f"mismatch with M={M} at depth {v.depth}"
    return True, f"{schedules} schedules"


def _random_grid(rng: random.Random, w=14, h=14) -> WorkspaceGrid:
    rows = []
    for r in range(h):
        row = []
        for c in range(w):
            if r in (0, h - 1) or c in (0, w - 1):
                row.append(CellState.OBSTACLE)
            else:
                u = rng.random()
                row.append(CellState.OBSTACLE if u < 0.08 else CellState.GLASS if u < 0.14 else CellState.FREE)
        rows.append(row)
    return WorkspaceGrid.from_rows(rows)


def _free(grid, q, spec):
    return all(grid.in_bounds(c, r) and grid.state(c, r) is CellState.FREE for c, r in footprint(q, spec))


def check_filter(rng: random.Random, edges: int = 100):
    spec = RobotSpec()
    done = 0
    while done < edges:
        grid = _random_grid(rng)
        q = Configuration(rng.randint(1, 11), rng.randint(1, 11), rng.randrange(4))
        if not _free(grid, q, spec):
            continue
        v0 = footprint(q, spec) | visible_cells(grid, q, spec)
        path = [q]
        for _ in range(rng.randint(0, 25)):
            nxt = [n for n in successors(path[-1]) if _free(grid, n, spec)]
            if not nxt:
                break
            path.append(rng.choice(nxt))
        last = path[-1]
        nxt = [n for n in successors(last) if _free(grid, n, spec)]
        if not nxt:
            continue
        q_next = rng.choice(nxt)
        seen = set(v0)
        for p in path:
            seen |= visible_cells(grid, p, spec)
        expected = swept_cells(last, q_next, spec) - seen
        model = VisibilityModel(grid, spec, v0)
        for strategy in Strategy:
            index = make_index(strategy, 2)
            h = index.root(model.view_center(path[0]), path[0])
            for p in path[1:]:
                h = index.insert(h, model.view_center(p), p)
            got = model.to_region(model.find_vis_viol(index, h, last, q_next))
            if got != expected:
                return False, f"{strategy.value}: {sorted(got)} != {sorted(expected)}"
        done += 1
    return True, f"{edges} edges"


def check_strategies():
    spec = RobotSpec()
    for kind, size in ((DomainKind.ONE_HALLWAY, 60), (DomainKind.HORSESHOE_HALLWAY, 60),
                       (DomainKind.GLASS_HALLWAY, 100)):
        inst = generate(DomainSpec(kind, size), spec)
        res = {s: relaxed_vamp_search(inst, spec, PlannerConfig(strategy=s)) for s in Strategy}
        a, b = res[Strategy.BASELINE], res[Strategy.FPNNT]
        if (a.path, a.total_violation_cells, a.stats.nodes_expanded) != (
                b.path, b.total_violation_cells, b.stats.nodes_expanded):
            return False, f"{kind.value}({size}) differs between strategies"
        if a.total_violation_cells < len(violation_of_path(a.path, inst, spec)):
            return False, f"{kind.value}({size}) under-approximates its violation"
    return True, "3 domains"


def run_all(seed: int = 0):
    rng = random.Random(seed)
    return [
        ("kd-tree vs linear scan", *check_kdtree(rng)),
        ("fpnnt vs ancestor chain scan", *check_fpnnt(rng)),
        ("find_vis_viol vs full union", *check_filter(rng)),
        ("baseline vs fpnnt search", *check_strategies()),
    ]
