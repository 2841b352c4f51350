import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpvamp.exceptions import NegativeRadius
from fpvamp.fpnnt import (
    FpnntConfig,
    chain,
    insert_node,
    logical_size,
    lookback,
    new_root,
    range_query,
)
from fpvamp.kdtree import PointLabel

from oracles import chain_logical_size, chain_scan, expected_slots


def grow(M, depth, start=None, offset=0):
    node = start or new_root(PointLabel((0.0, 0.0), 0), FpnntConfig(M))
    nodes = [node]
    while node.depth < depth:
        i = node.depth + offset
        node = insert_node(node, PointLabel((float(i % 17), float(i // 17)), i))
        nodes.append(node)
    return nodes


def labels(items):
    return sorted((pl.label for pl in items), key=repr)


def test_config_validation():
    for bad in (0, -1, 1.5, True):
        with pytest.raises(ValueError):
            FpnntConfig(bad)


def test_root():
    p = PointLabel((2.0, 3.0), "q")
    root = new_root(p, FpnntConfig(5))
    assert root.depth == 1
    assert root.occupied_slots() == {}
    assert range_query(root, p.point, 0.0) == [p]
    assert lookback(root) == [p]


def test_lookback_sizes():
    nodes = grow(5, 11)
    assert len(lookback(nodes[8])) == 4   # depth 9
    assert len(lookback(nodes[9])) == 5   # depth 10
    assert len(lookback(nodes[10])) == 1  # depth 11
    assert [pl.label for pl in lookback(nodes[9])] == [9, 8, 7, 6, 5]


def test_no_merge_shares_forest():
    nodes = grow(5, 10)
    assert nodes[9].depth == 10
    assert nodes[9].forest is nodes[8].forest
    assert nodes[9].lookback_size == 5


def test_merge_vacates_low_slots_and_shares_high_slot():
    nodes = grow(5, 61)
    pred, succ = nodes[59], nodes[60]
    assert pred.depth == 60 and pred.lookback_size == 5
    assert pred.occupied_slots() == {0: 5, 1: 10, 3: 40}
    assert succ.depth == 61 and succ.lookback_size == 1
    assert succ.occupied_slots() == {2: 20, 3: 40}
    assert succ.forest[3] is pred.forest[3]
    # the predecessor is untouched
    assert pred.occupied_slots() == {0: 5, 1: 10, 3: 40}
    assert labels(succ.forest[2]) == list(range(40, 60))


def test_slot_array_grows_when_full():
    nodes = grow(1, 5)
    assert nodes[3].occupied_slots() == {0: 1, 1: 2}   # depth 4: counter 3
    assert nodes[4].occupied_slots() == {2: 4}          # depth 5: counter 4
    assert len(nodes[4].forest) == 3


@pytest.mark.parametrize("M", [1, 2, 3, 5, 32])
def test_occupancy_bit_pattern(M):
    for node in grow(M, 20 * M):
        assert node.occupied_slots() == expected_slots(node.depth, M)
        assert node.lookback_size <= M


def test_counter_with_m1():
    for node in grow(1, 300):
        n = node.depth
        bits = {i for i in range((n - 1).bit_length()) if (n - 1) >> i & 1}
        assert set(node.occupied_slots()) == bits


@settings(max_examples=40, deadline=None)
@given(M=st.integers(1, 40), depth=st.integers(1, 400))
def test_occupancy_property(M, depth):
    node = grow(M, depth)[-1]
    assert node.occupied_slots() == expected_slots(depth, M)
    assert sum(node.occupied_slots().values()) + node.lookback_size == depth


def test_large_radius_returns_every_point():
    node = grow(4, 77)[-1]
    assert len(range_query(node, (0.0, 0.0), 1e9)) == node.depth


def test_query_order_lookback_first_then_slots():
    node = grow(3, 14)[-1]
    got = [pl.label for pl in range_query(node, (0.0, 0.0), 1e9)]
    look = [pl.label for pl in lookback(node)]
    assert got[: len(look)] == look
    assert set(got[len(look):]) == set(range(0, 14)) - set(look)


def test_negative_radius():
    with pytest.raises(NegativeRadius):
        range_query(grow(2, 5)[-1], (0.0, 0.0), -0.5)


def test_range_query_matches_chain_scan_with_branches():
    rng = random.Random(42)
    for M in (1, 2, 5, 32):
        versions = [new_root(PointLabel((0.0, 0.0), 0), FpnntConfig(M))]
        for i in range(1, 300):
            base = versions[-1] if rng.random() < 0.7 else rng.choice(versions)
            versions.append(insert_node(base, PointLabel((rng.uniform(0, 30), rng.uniform(0, 30)), i)))
        for _ in range(100):
            v = rng.choice(versions)
            c = (rng.uniform(0, 30), rng.uniform(0, 30))
            r = rng.uniform(0, 10)
            raw = [(pl.point, pl.label) for pl in chain(v)]
            assert labels(range_query(v, c, r)) == chain_scan(raw, c, r)


def test_branch_does_not_disturb_trunk():
    trunk = grow(5, 100)
    tip = trunk[-1]
    queries = [((x * 1.0, y * 1.0), r) for x in range(0, 17, 4) for y in range(0, 7, 2) for r in (0.5, 2.0, 6.0)]
    before = [range_query(tip, c, r) for c, r in queries]
    branch = grow(5, 137, start=trunk[36], offset=1000)
    assert branch[-1].depth == 137
    after = [range_query(tip, c, r) for c, r in queries]
    assert before == after
    assert all(pl.label < 1000 for res in after for pl in res)
    on_branch = {pl.label for pl in range_query(branch[-1], (0.0, 0.0), 1e9)}
    assert on_branch == set(range(37)) | set(range(1037, 1137))


def test_logical_size_root():
    assert logical_size(new_root(PointLabel((0.0, 0.0), 0))) == 64 + 24


@pytest.mark.parametrize("M", [1, 2, 5, 32])
def test_logical_size_of_chain_matches_counter_arithmetic(M):
    tip = grow(M, 10 * M)[-1]
    assert logical_size(tip) == chain_logical_size(10 * M, M)


def test_logical_size_of_ten_m_chain_with_m5():
    assert logical_size(grow(5, 50)[-1]) == 9600


def test_logical_size_counts_shared_trees_once():
    nodes = grow(5, 12)
    base = nodes[-1]
    a = insert_node(base, PointLabel((1.0, 1.0), "a"))
    b = insert_node(base, PointLabel((2.0, 2.0), "b"))
    assert a.forest is b.forest
    sibling_cost = 64 + 24 + 8 * len(a.forest)
    assert logical_size([a, b]) == logical_size(base) + 2 * sibling_cost
    assert logical_size([a, b, base, a]) == logical_size([a, b])


@pytest.mark.parametrize("M", [1, 32])
def test_amortized_build_volume(M):
    stats = {}
    node = new_root(PointLabel((0.0, 0.0), 0), FpnntConfig(M))
    checkpoints = {1, 2, 10, 100, 1000, 5000, 10_000}
    for L in range(2, 10_001):
        node = insert_node(node, PointLabel((float(L % 97), float(L // 97)), L), stats)
        if L in checkpoints:
            bound = L * (max(L // M, 1).bit_length() - 1 + 2)
            assert stats.get("built_points", 0) <= bound
