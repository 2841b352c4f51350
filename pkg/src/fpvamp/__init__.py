"""Relaxed visibility-aware motion planning with a fully persistent nearest-neighbor tree."""
from .exceptions import (
    Collision,
    InvalidPath,
    InvalidSpec,
    NegativeRadius,
    NoPath,
    NotAPrimitive,
    OutOfBounds,
    ParseError,
    VampError,
)
from .fpnnt import FpnntConfig, FpnntNode, insert_node, logical_size, new_root, range_query
from .grid_world import DomainKind, DomainSpec, ProblemInstance, generate, load_ascii, save_ascii
from .kdtree import KdTree, PointLabel
from .robot_geometry import Configuration, Orientation, RobotSpec
from .vamp_planner import (
    PlannerConfig,
    RelaxedVampPlanner,
    Strategy,
    check_feasible,
    find_vis_viol,
    relaxed_vamp_search,
    violation_of_path,
)
from .workspace import CellState, RegionSet, WorkspaceGrid

__version__ = "0.1.0"

__all__ = [
    "CellState", "Collision", "Configuration", "DomainKind", "DomainSpec", "FpnntConfig",
    "FpnntNode", "InvalidPath", "InvalidSpec", "KdTree", "NegativeRadius", "NoPath",
    "NotAPrimitive", "Orientation", "OutOfBounds", "ParseError", "PlannerConfig", "PointLabel",
    "ProblemInstance", "RegionSet", "RelaxedVampPlanner", "RobotSpec", "Strategy", "VampError",
    "WorkspaceGrid", "check_feasible", "find_vis_viol", "generate", "insert_node", "load_ascii",
    "logical_size", "new_root", "range_query", "relaxed_vamp_search", "save_ascii",
    "violation_of_path",
]
