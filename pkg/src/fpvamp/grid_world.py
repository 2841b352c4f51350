"""Experiment domains, problem instances and the ``vamp-grid v1`` text format."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .exceptions import InvalidSpec, ParseError
from .robot_geometry import (
    Configuration,
    Orientation,
    RobotSpec,
    footprint,
    visible_cells,
)
from .workspace import (  # noqa: F401  re-exported
    CellCoord,
    CellState,
    RegionSet,
    WorkspaceGrid,
    difference,
    size,
    union,
)


class DomainKind(Enum):
    ONE_HALLWAY = "one-hallway"
    HORSESHOE_HALLWAY = "horseshoe-hallway"
    GLASS_HALLWAY = "glass-hallway"

    @classmethod
    def parse(cls, text: str) -> "DomainKind":
        key = text.strip().lower().replace("_", "-")
        aliases = {
            "onehallway": cls.ONE_HALLWAY,
            "horseshoehallway": cls.HORSESHOE_HALLWAY,
            "horseshoe": cls.HORSESHOE_HALLWAY,
            "glasshallway": cls.GLASS_HALLWAY,
            "glass": cls.GLASS_HALLWAY,
        }
        for k in cls:
            if k.value == key:
                return k
        if key.replace("-", "") in aliases:
            return aliases[key.replace("-", "")]
        raise InvalidSpec(f"unknown domain kind {text!r}")


@dataclass(frozen=True)
class DomainSpec:
    kind: DomainKind
    size: int
    hallway_width: int = 11
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", DomainKind.parse(self.kind))
        if self.hallway_width < 1:
            raise InvalidSpec("hallway_width must be positive")
        if self.size < 4 * self.hallway_width:
            raise InvalidSpec(
                f"size {self.size} is below 4 * hallway_width = {4 * self.hallway_width}"
            )


@dataclass(frozen=True)
class ProblemInstance:
    grid: WorkspaceGrid
    q0: Configuration
    goal_cells: RegionSet
    v0: RegionSet = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "goal_cells", RegionSet(self.goal_cells))
        if self.v0 is None:
            object.__setattr__(self, "v0", initial_visible_region(self.grid, self.q0))
        else:
            object.__setattr__(self, "v0", RegionSet(self.v0))

    def validate(self, spec: RobotSpec = RobotSpec()) -> None:
        fp = footprint(self.q0, spec)
        for c, r in fp:
            if not self.grid.in_bounds(c, r) or self.grid.state(c, r) is not CellState.FREE:
                raise InvalidSpec(f"start footprint cell {(c, r)} is not free")
        for c, r in self.goal_cells:
            if not self.grid.in_bounds(c, r) or self.grid.state(c, r) is not CellState.FREE:
                raise InvalidSpec(f"goal cell {(c, r)} is not free")
        if not fp <= self.v0:
            raise InvalidSpec("v0 must contain the start footprint")


def initial_visible_region(
    grid: WorkspaceGrid, q0: Configuration, spec: RobotSpec = RobotSpec()
) -> RegionSet:
    return footprint(q0, spec) | visible_cells(grid, q0, spec)


class _Canvas:
    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.cells = bytearray([CellState.OBSTACLE]) * (width * height)

    def fill(self, c0, r0, c1, r1, state):
        """Fill the inclusive rectangle ``[c0, c1] x [r0, r1]``."""
        for r in range(r0, r1 + 1):
            base = r * self.width
            self.cells[base + c0 : base + c1 + 1] = bytes([state]) * (c1 - c0 + 1)

    def grid(self) -> WorkspaceGrid:
        return WorkspaceGrid(self.width, self.height, bytes(self.cells))


def _rect(c0, r0, c1, r1) -> RegionSet:
    return RegionSet((c, r) for r in range(r0, r1 + 1) for c in range(c0, c1 + 1))


def _one_hallway(spec: DomainSpec, robot: RobotSpec):
    w, n = spec.hallway_width, spec.size
    canvas = _Canvas(w + 2, n + 2)
    canvas.fill(1, 1, w, n, CellState.FREE)
    s = robot.footprint_side
    q0 = Configuration(1 + (w - s) // 2, n - s + 1, Orientation.N)
    return canvas.grid(), q0, _rect(1, 1, w, 1)


def _horseshoe_hallway(spec: DomainSpec, robot: RobotSpec):
    # Two legs of height `size` joined across the top; the goal sits at the
    # bottom of the right leg, the start at the bottom of the left leg.
    w, n = spec.hallway_width, spec.size
    gap = w
    width = 2 * w + gap + 2
    canvas = _Canvas(width, n + 2)
    left0, right0 = 1, 1 + w + gap
    canvas.fill(left0, 1, left0 + w - 1, n, CellState.FREE)
    canvas.fill(right0, 1, right0 + w - 1, n, CellState.FREE)
    canvas.fill(left0, 1, right0 + w - 1, w, CellState.FREE)
    s = robot.footprint_side
    q0 = Configuration(left0 + (w - s) // 2, n - s + 1, Orientation.N)
    return canvas.grid(), q0, _rect(right0, n, right0 + w - 1, n)


def glass_corridor_count(size: int) -> int:
    return max(1, size // 100)


def _glass_hallway(spec: DomainSpec, robot: RobotSpec):
    # Vertical corridors open at the top. Each has a glass wall on the side
    # facing the start and an opaque wall on the far side.
    w, n = spec.hallway_width, spec.size
    canvas = _Canvas(n + 2, n + 2)
    canvas.fill(1, 1, n, n, CellState.FREE)
    count = glass_corridor_count(n)
    pitch = n // count
    last_interior = None
    for i in range(count):
        glass_col = pitch * (i + 1) - 2 * w - 1
        interior = (glass_col + 1, glass_col + w)
        canvas.fill(glass_col, w + 1, glass_col, n, CellState.GLASS)
        canvas.fill(glass_col + w + 1, w + 1, glass_col + w + 1, n, CellState.OBSTACLE)
        last_interior = interior
    s = robot.footprint_side
    q0 = Configuration(1, n - s + 1, Orientation.N)
    goal = _rect(last_interior[0], n, last_interior[1], n)
    return canvas.grid(), q0, goal


_GENERATORS = {
    DomainKind.ONE_HALLWAY: _one_hallway,
    DomainKind.HORSESHOE_HALLWAY: _horseshoe_hallway,
    DomainKind.GLASS_HALLWAY: _glass_hallway,
}


def generate(spec: DomainSpec, robot: RobotSpec = RobotSpec()) -> ProblemInstance:
    """Build the deterministic problem instance described by ``spec``."""
    if spec.hallway_width < 2 * robot.footprint_side:
        raise InvalidSpec("hallway_width must be at least twice the robot footprint")
    grid, q0, goal = _GENERATORS[spec.kind](spec, robot)
    inst = ProblemInstance(grid, q0, goal, initial_visible_region(grid, q0, robot))
    inst.validate(robot)
    return inst


# -- text format --------------------------------------------------------------

MAGIC = "vamp-grid v1"
_STATE_CHARS = {CellState.FREE: ".", CellState.OBSTACLE: "#", CellState.GLASS: "g"}
_CHAR_STATES = {".": CellState.FREE, "#": CellState.OBSTACLE, "g": CellState.GLASS,
                "S": CellState.FREE, "E": CellState.FREE}


def save_ascii(instance: ProblemInstance) -> str:
    g = instance.grid
    q0 = instance.q0
    lines = [f"{MAGIC} {g.width} {g.height} {q0.x} {q0.y} {Orientation(q0.orient).name}"]
    goal = instance.goal_cells
    for r in range(g.height):
        row = []
        for c in range(g.width):
            if (c, r) == (q0.x, q0.y):
                row.append("S")
            elif (c, r) in goal:
                row.append("E")
            else:
                row.append(_STATE_CHARS[CellState(g.states[r * g.width + c])])
        lines.append("".join(row))
    return "\n".join(lines) + "\n"


def _parse_orient(tok: str, col: int) -> int:
    if tok in Orientation.__members__:
        return Orientation[tok]
    if tok in ("0", "1", "2", "3"):
        return int(tok)
    raise ParseError(f"bad orientation {tok!r}", 1, col)


def load_ascii(text: str, robot: RobotSpec = RobotSpec()) -> ProblemInstance:
    """Parse ``vamp-grid v1`` text. ``v0`` is rebuilt from the start pose."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("missing header", 1, 1)
    header = lines[0]
    if not header.startswith(MAGIC):
        raise ParseError(f"header must start with {MAGIC!r}", 1, 1)
    toks = header[len(MAGIC):].split()
    if len(toks) != 5:
        raise ParseError("header needs width height x y orient", 1, len(MAGIC) + 1)
    try:
        width, height, qx, qy = (int(t) for t in toks[:4])
    except ValueError:
        raise ParseError("non-integer header field", 1, len(MAGIC) + 2) from None
    orient = _parse_orient(toks[4], len(header) - len(toks[4]) + 1)
    if width < 1 or height < 1:
        raise ParseError("grid dimensions must be positive", 1, len(MAGIC) + 2)
    rows = lines[1:]
    while rows and rows[-1] == "" and len(rows) > height:
        rows.pop()
    if len(rows) != height:
        raise ParseError(f"expected {height} grid rows, found {len(rows)}", min(len(lines), height + 1) + 1, 1)
    cells = bytearray(width * height)
    goal = []
    start_marks = []
    for r, line in enumerate(rows):
        if len(line) != width:
            raise ParseError(f"expected {width} columns, found {len(line)}", r + 2, min(len(line), width) + 1)
        for c, ch in enumerate(line):
            st = _CHAR_STATES.get(ch)
            if st is None:
                raise ParseError(f"unknown cell character {ch!r}", r + 2, c + 1)
            cells[r * width + c] = st
            if ch == "E":
                goal.append((c, r))
            elif ch == "S":
                start_marks.append((c, r))
    if start_marks != [(qx, qy)]:
        raise ParseError(f"expected exactly one 'S' at ({qx}, {qy})", 1, 1)
    grid = WorkspaceGrid(width, height, bytes(cells))
    q0 = Configuration(qx, qy, orient)
    inst = ProblemInstance(grid, q0, RegionSet(goal), initial_visible_region(grid, q0, robot))
    return inst
