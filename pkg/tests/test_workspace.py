import random

import pytest

from fpvamp.exceptions import OutOfBounds
from fpvamp.workspace import (
    EMPTY_REGION,
    CellState,
    RegionSet,
    WorkspaceGrid,
    difference,
    size,
    union,
)

from oracles import sorted_difference, sorted_union


def test_cell_state_semantics():
    assert CellState.OBSTACLE.blocks_motion and CellState.OBSTACLE.blocks_sight
    assert CellState.GLASS.blocks_motion and not CellState.GLASS.blocks_sight
    assert not CellState.FREE.blocks_motion and not CellState.FREE.blocks_sight


def test_self_difference_is_empty():
    a = RegionSet({(1, 2), (3, 4)})
    assert difference(a, a) == EMPTY_REGION
    assert size(difference(a, a)) == 0


def test_union_with_empty_keeps_size():
    a = RegionSet({(0, 0), (0, 1), (5, 5)})
    assert size(union(a, EMPTY_REGION)) == size(a) == 3


def test_duplicates_collapse():
    assert RegionSet([(1, 1), (1, 1), (2, 1)]).size() == 2


@pytest.mark.parametrize("seed", range(5))
def test_region_ops_match_sorted_list_reference(seed):
    rng = random.Random(seed)
    a = [(rng.randrange(60), rng.randrange(60)) for _ in range(1000)]
    b = [(rng.randrange(60), rng.randrange(60)) for _ in range(1000)]
    ra, rb = RegionSet(a), RegionSet(b)
    assert sorted(union(ra, rb)) == sorted_union(a, b)
    assert sorted(difference(ra, rb)) == sorted_difference(a, b)
    assert size(ra) == len(sorted_union(a, []))
    # operator forms return RegionSet as well
    assert isinstance(ra | rb, RegionSet) and isinstance(ra - rb, RegionSet)
    assert sorted(ra & rb) == sorted(set(a) & set(b))


def test_grid_shape_checks():
    with pytest.raises(ValueError):
        WorkspaceGrid(2, 2, bytes(3))
    with pytest.raises(ValueError):
        WorkspaceGrid(2, 2, bytes([0, 0, 0, 7]))
    with pytest.raises(ValueError):
        WorkspaceGrid.from_rows([[0, 0], [0]])


def test_grid_state_lookup_and_bounds():
    g = WorkspaceGrid.from_rows([
        [1, 1, 1],
        [1, 0, 2],
        [1, 1, 1],
    ])
    assert g.state(1, 1) is CellState.FREE
    assert g.state(2, 1) is CellState.GLASS
    assert g.cells_in_state(CellState.GLASS) == {(2, 1)}
    assert not g.boundary_sealed()
    with pytest.raises(OutOfBounds):
        g.state(3, 0)
    sealed = WorkspaceGrid.from_rows([[1, 1, 1], [1, 0, 1], [1, 1, 1]])
    assert sealed.boundary_sealed()
