import math
import random

import pytest

from fpvamp.exceptions import NegativeRadius
from fpvamp.kdtree import KdTree, PointLabel, ball_query, build

from oracles import chain_scan


def pts(coords):
    return [PointLabel(tuple(map(float, c)), i) for i, c in enumerate(coords)]


def labels(items):
    return sorted((pl.label for pl in items), key=repr)


def test_empty_and_single():
    t = build([])
    assert t.count == 0 and t.depth == 0
    assert ball_query(t, (0.0, 0.0), 10.0) == []
    one = build(pts([(1, 2)]))
    assert one.count == 1 and one.depth == 1


def test_seven_points_give_depth_three():
    t = build(pts([(i, 7 - i) for i in range(7)]))
    assert t.depth == 3


@pytest.mark.parametrize("n", [1, 2, 3, 8, 100, 1000, 1025])
def test_depth_is_balanced(n):
    t = build(pts([(i % 13, i // 13) for i in range(n)]))
    assert t.depth <= math.ceil(math.log2(n)) + 1
    t.check_invariants()


def test_duplicates_preserved_and_zero_radius():
    t = build(pts([(1, 1), (1, 1), (2, 1), (1, 1.5)]))
    assert t.count == 4
    assert labels(t.ball_query((1.0, 1.0), 0.0)) == [0, 1]


def test_infinite_radius_returns_everything():
    data = pts([(random.Random(3).uniform(-50, 50), i) for i in range(40)])
    t = build(data)
    assert sorted(pl.label for pl in t.ball_query((0.0, 0.0), math.inf)) == list(range(40))
    assert sorted(pl.label for pl in t.ball_query((0.0, 0.0), 1e6)) == list(range(40))


def test_boundary_is_inclusive():
    t = build(pts([(3, 4), (0, 5.0000001)]))
    assert labels(t.ball_query((0.0, 0.0), 5.0)) == [0]


def test_negative_radius():
    with pytest.raises(NegativeRadius):
        build(pts([(0, 0)])).ball_query((0.0, 0.0), -1.0)


def test_non_finite_points_rejected():
    with pytest.raises(ValueError):
        build([PointLabel((math.nan, 0.0), 0)])


def test_build_is_deterministic():
    data = pts([(i % 5, (i * 7) % 3) for i in range(50)])
    a, b = build(data), build(list(data))
    assert a.points() == b.points()
    assert a.ball_query((2.0, 1.0), 1.5) == b.ball_query((2.0, 1.0), 1.5)


@pytest.mark.parametrize("seed", range(3))
def test_thousand_points_match_linear_scan(seed):
    rng = random.Random(seed)
    data = [PointLabel((rng.uniform(0, 100), rng.uniform(0, 100)), i) for i in range(1000)]
    # a slice of integer-lattice points to exercise ties on split planes
    data += [PointLabel((float(rng.randint(0, 20)), float(rng.randint(0, 20))), 1000 + i) for i in range(200)]
    t = build(data)
    t.check_invariants()
    raw = [(p.point, p.label) for p in data]
    for _ in range(100):
        c = (rng.uniform(-10, 110), rng.uniform(-10, 110))
        r = rng.choice([0.0, rng.uniform(0, 5), rng.uniform(0, 30)])
        visits = [0]
        got = t.ball_query(c, r, visits)
        assert labels(got) == chain_scan(raw, c, r)
        assert visits[0] <= t.count


def test_generic_dimension_path():
    rng = random.Random(5)
    data = [PointLabel((rng.uniform(0, 9), rng.uniform(0, 9), rng.uniform(0, 9)), i) for i in range(300)]
    t = KdTree.build(data)
    raw = [(p.point, p.label) for p in data]
    for _ in range(50):
        c = (rng.uniform(0, 9), rng.uniform(0, 9), rng.uniform(0, 9))
        r = rng.uniform(0, 4)
        assert labels(t.ball_query(c, r)) == chain_scan(raw, c, r)
