"""Baseline-vs-FPNNT scaling runs, CSV output and SVG line charts."""
from __future__ import annotations

import csv
import io
import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from statistics import mean
from xml.sax.saxutils import escape

from ._validation import check_sizes
from .exceptions import NoPath
from .grid_world import DomainKind, DomainSpec, generate
from .robot_geometry import RobotSpec
from .vamp_planner import PlannerConfig, Strategy, relaxed_vamp_search

log = logging.getLogger(__name__)

CSV_HEADER = (
    "domain,size,method,M,trial,total_ms,find_vis_viol_ms,insert_ms,"
    "nodes_expanded,steps,violation_cells,logical_memory"
)
METHODS = ("baseline", "fpnnt")


@dataclass
class BenchConfig:
    domain_kind: DomainKind
    sizes: list
    trials: int = 10
    methods: tuple = METHODS
    M: int = 32
    output_dir: Path | None = None
    emit_svg: bool = False
    hallway_width: int = 11
    parallel_trials: bool = False

    def __post_init__(self):
        self.domain_kind = DomainKind.parse(self.domain_kind) if isinstance(self.domain_kind, str) else self.domain_kind
        self.sizes = check_sizes(self.sizes)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        self.methods = tuple(Strategy(str(m).lower()).value for m in self.methods)
        if not self.methods:
            raise ValueError("at least one method is required")
        if self.output_dir is not None:
            self.output_dir = Path(self.output_dir)


@dataclass
class BenchRow:
    domain: str
    size: int
    method: str
    M: int
    trial: int
    total_ms: float
    find_vis_viol_ms: float
    insert_ms: float
    nodes_expanded: int
    steps: int
    violation_cells: int
    logical_memory: int

    TIMING = ("total_ms", "find_vis_viol_ms", "insert_ms")

    def key(self):
        """Non-timing columns."""
        return tuple(v for k, v in asdict(self).items() if k not in self.TIMING)


def _run_one(domain: DomainKind, size: int, method: str, M: int, trial: int,
             hallway_width: int = 11) -> BenchRow:
    robot = RobotSpec()
    inst = generate(DomainSpec(domain, size, hallway_width), robot)
    cfg = PlannerConfig(strategy=Strategy(method), M=M)
    try:
        res = relaxed_vamp_search(inst, robot, cfg)
    except NoPath:
        log.warning("no path for %s size %d (%s)", domain.value, size, method)
        return BenchRow(domain.value, size, method, M, trial, 0.0, 0.0, 0.0, 0, -1, -1, 0)
    st = res.stats
    return BenchRow(
        domain.value, size, method, M, trial,
        round(st.total_time * 1e3, 3),
        round(st.find_vis_viol_time * 1e3, 3),
        round(st.insert_time * 1e3, 3),
        st.nodes_expanded, res.steps, res.total_violation_cells, st.logical_memory,
    )


def _run_trial(args):
    domain, size, methods, M, trial, width = args
    return [_run_one(domain, size, m, M, trial, width) for m in methods]


def run_bench(cfg: BenchConfig) -> list[BenchRow]:
    """Run every (size, trial, method) combination; write CSV/SVG if configured.

    Methods are interleaved inside each trial so slow drift of the machine hits
    both methods alike. Instance generation is not timed.
    """
    jobs = [(cfg.domain_kind, size, cfg.methods, cfg.M, t, cfg.hallway_width)
            for size in cfg.sizes for t in range(cfg.trials)]
    if cfg.parallel_trials:
        with ProcessPoolExecutor() as pool:
            batches = list(pool.map(_run_trial, jobs))
    else:
        batches = []
        for job in jobs:
            batches.append(_run_trial(job))
            log.info("%s size=%d trial=%d done", job[0].value, job[1], job[4])
    order = {m: i for i, m in enumerate(cfg.methods)}
    rows = sorted((r for b in batches for r in b), key=lambda r: (r.size, order[r.method], r.trial))
    if cfg.output_dir is not None:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        write_csv(rows, cfg.output_dir / f"{cfg.domain_kind.value}.csv")
        if cfg.emit_svg:
            emit_plots(rows, cfg.output_dir)
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([getattr(r, f.name) for f in fields(BenchRow)])
    return buf.getvalue()


def write_csv(rows, path) -> None:
    Path(path).write_text(rows_to_csv(rows))


def parse_csv(text: str) -> list[BenchRow]:
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    out = []
    for rec in csv.reader(lines[1:]):
        vals = {}
        for f, raw in zip(fields(BenchRow), rec):
            vals[f.name] = float(raw) if f.name in BenchRow.TIMING else (
                raw if f.type == "str" else int(raw))
        out.append(BenchRow(**vals))
    return out


def summarize(rows) -> dict:
    """Mean of each numeric column per ``(domain, size, method)``."""
    groups = defaultdict(list)
    for r in rows:
        groups[(r.domain, r.size, r.method)].append(r)
    return {
        k: {c: mean(getattr(r, c) for r in g)
            for c in ("total_ms", "find_vis_viol_ms", "insert_ms", "logical_memory")}
        for k, g in sorted(groups.items())
    }


# -- SVG ------------------------------------------------------------------------

_COLORS = {"baseline": "#1f77b4", "fpnnt": "#d62728"}
_W, _H = 640, 400
_PAD_L, _PAD_R, _PAD_T, _PAD_B = 80, 160, 40, 50


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _line_chart(title, ylabel, series) -> str:
    """``series``: list of (name, color, dash, [(x, y), ...])."""
    xs = [x for *_, pts in series for x, _ in pts]
    ys = [y for *_, pts in series for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y1 = max(ys) if ys and max(ys) > 0 else 1.0
    if x0 == x1:
        x0, x1 = x0 - 1, x1 + 1
    pw, ph = _W - _PAD_L - _PAD_R, _H - _PAD_T - _PAD_B

    def sx(x):
        return _PAD_L + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return _PAD_T + ph - y / y1 * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W // 2}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15">{escape(title)}</text>',
        f'<line x1="{_PAD_L}" y1="{_PAD_T + ph}" x2="{_PAD_L + pw}" y2="{_PAD_T + ph}" stroke="black"/>',
        f'<line x1="{_PAD_L}" y1="{_PAD_T}" x2="{_PAD_L}" y2="{_PAD_T + ph}" stroke="black"/>',
        f'<text x="{_PAD_L + pw // 2}" y="{_H - 12}" text-anchor="middle" font-family="sans-serif" font-size="12">domain size (cells)</text>',
        f'<text x="16" y="{_PAD_T + ph // 2}" text-anchor="middle" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {_PAD_T + ph // 2})">{escape(ylabel)}</text>',
    ]
    for k in range(5):
        yv = y1 * k / 4
        out.append(f'<text x="{_PAD_L - 6}" y="{_fmt(sy(yv) + 4)}" text-anchor="end" font-family="sans-serif" font-size="10">{_fmt(yv)}</text>')
    for xv in sorted(set(xs)):
        out.append(f'<text x="{_fmt(sx(xv))}" y="{_PAD_T + ph + 16}" text-anchor="middle" font-family="sans-serif" font-size="10">{_fmt(xv)}</text>')
    for i, (name, color, dash, pts) in enumerate(series):
        coords = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in pts)
        dash_attr = ' stroke-dasharray="6 3"' if dash else ""
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2"{dash_attr} points="{coords}"/>')
        for x, y in pts:
            out.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="3" fill="{color}"/>')
        ly = _PAD_T + 14 + 18 * i
        lx = _W - _PAD_R + 12
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" stroke="{color}" stroke-width="2"{dash_attr}/>')
        out.append(f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" font-size="11">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_plots(rows) -> dict[str, str]:
    """SVG documents keyed by file name; deterministic for a given row list."""
    if not rows:
        raise ValueError("no rows to plot")
    summary = summarize(rows)
    domains = sorted({d for d, _, _ in summary})
    methods = [m for m in METHODS if any(k[2] == m for k in summary)]
    methods += sorted({k[2] for k in summary} - set(methods))
    docs = {}
    for d in domains:
        runtime, memory = [], []
        for m in methods:
            pts = sorted((s, v) for (dd, s, mm), v in summary.items() if dd == d and mm == m)
            if not pts:
                continue
            color = _COLORS.get(m, "#555555")
            runtime.append((f"{m} total", color, False, [(s, v["total_ms"]) for s, v in pts]))
            runtime.append((f"{m} Find_Vis_Viol", color, True, [(s, v["find_vis_viol_ms"]) for s, v in pts]))
            memory.append((m, color, False, [(s, v["logical_memory"]) for s, v in pts]))
        docs[f"{d}_runtime.svg"] = _line_chart(f"{d}: mean runtime", "time (ms)", runtime)
        docs[f"{d}_memory.svg"] = _line_chart(f"{d}: search tree storage", "logical memory (units)", memory)
    return docs


def emit_plots(rows, output_dir) -> list[Path]:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, doc in render_plots(rows).items():
        p = output_dir / name
        p.write_text(doc)
        written.append(p)
    return written
