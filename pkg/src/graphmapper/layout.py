"""Force-directed 2D placement (Fruchterman-Reingold) with Barnes-Hut
approximated repulsion, plus SVG export for graphs and summaries.

Layout is deterministic: a fixed (graph, seed, iterations, theta) always
produces bit-identical positions. Runs are single-threaded by design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .graph import WeightedGraph
from .mapper import MapperSummary

AREA = 1.0
_MIN_DIST = 1e-9


@dataclass(frozen=True)
class LayoutResult:
    positions: np.ndarray  # (n, 2)
    seed: int
    iterations: int
    theta: float


def ideal_length(n: int) -> float:
    """Ideal spring length: sqrt(area / n)."""
    return math.sqrt(AREA / max(n, 1))


class _QuadNode:
    __slots__ = ("cx", "cy", "half", "mass", "comx", "comy", "children", "point")

    def __init__(self, cx: float, cy: float, half: float):
        self.cx = cx
        self.cy = cy
        self.half = half
        self.mass = 0
        self.comx = 0.0
        self.comy = 0.0
        self.children = None
        self.point = None  # (index, x, y) for a leaf holding one point

    def _quadrant(self, x: float, y: float) -> int:
        return (1 if x > self.cx else 0) + (2 if y > self.cy else 0)

    def _subdivide(self):
        h = self.half / 2.0
        self.children = [
            _QuadNode(self.cx - h, self.cy - h, h),
            _QuadNode(self.cx + h, self.cy - h, h),
            _QuadNode(self.cx - h, self.cy + h, h),
            _QuadNode(self.cx + h, self.cy + h, h),
        ]

    def insert(self, index: int, x: float, y: float, depth: int = 0):
        self.mass += 1
        self.comx += x
        self.comy += y
        if self.children is None and self.point is None and self.mass == 1:
            self.point = (index, x, y)
            return
        if self.children is None:
            if depth > 60:  # coincident points: keep them in this leaf
                return
            self._subdivide()
            old = self.point
            self.point = None
            if old is not None:
                self.children[self._quadrant(old[1], old[2])].insert(old[0], old[1], old[2], depth + 1)
        self.children[self._quadrant(x, y)].insert(index, x, y, depth + 1)


def _build_quadtree(pos: np.ndarray) -> _QuadNode:
    xmin, ymin = pos.min(axis=0)
    xmax, ymax = pos.max(axis=0)
    half = max(xmax - xmin, ymax - ymin) / 2.0 + 1e-6
    root = _QuadNode((xmin + xmax) / 2.0, (ymin + ymax) / 2.0, half)
    for i in range(pos.shape[0]):
        root.insert(i, float(pos[i, 0]), float(pos[i, 1]))
    return root


def repulsion_barnes_hut(pos: np.ndarray, k: float, theta: float) -> np.ndarray:
    """Repulsive force k^2/d per pair, approximated: cells narrower than
    theta times their distance act as their center of mass."""
    if not 0 < theta <= 1:
        raise ParameterError(f"theta must be in (0,1], got {theta}")
    n = pos.shape[0]
    forces = np.zeros((n, 2))
    if n < 2:
        return forces
    root = _build_quadtree(pos)
    k2 = k * k
    for i in range(n):
        xi, yi = float(pos[i, 0]), float(pos[i, 1])
        fx = fy = 0.0
        stack = [root]
        while stack:
            node = stack.pop()
            if node.mass == 0:
                continue
            if node.point is not None:
                pi, px, py = node.point
                if pi == i:
                    continue
                m = node.mass  # coincident points may share a leaf
                dx, dy = xi - px, yi - py
            else:
                dx, dy = xi - node.comx / node.mass, yi - node.comy / node.mass
                dist = math.sqrt(dx * dx + dy * dy)
                inside = (
                    abs(xi - node.cx) <= node.half and abs(yi - node.cy) <= node.half
                )
                if node.children is not None and (inside or dist < _MIN_DIST or node.half * 2.0 / dist >= theta):
                    stack.extend(node.children)
                    continue
                m = node.mass
            dist = math.sqrt(dx * dx + dy * dy)
            if dist < _MIN_DIST:
                dist = _MIN_DIST
            f = m * k2 / dist  # FR repulsion magnitude k^2/d
            fx += f * dx / dist
            fy += f * dy / dist
        forces[i, 0] = fx
        forces[i, 1] = fy
    return forces


def repulsion_exact(pos: np.ndarray, k: float) -> np.ndarray:
    """O(n^2) reference repulsion: force k^2/d along each pair."""
    n = pos.shape[0]
    if n < 2:
        return np.zeros((n, 2))
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    np.fill_diagonal(dist, np.inf)
    dist = np.maximum(dist, _MIN_DIST)
    scale = (k * k) / (dist * dist)  # magnitude/dist, applied to the raw diff
    return (diff * scale[:, :, None]).sum(axis=1)


def _attraction(pos: np.ndarray, edges: np.ndarray, weights: np.ndarray, k: float) -> np.ndarray:
    """Spring force d^2/k along each edge, scaled by edge weight."""
    forces = np.zeros_like(pos)
    if edges.shape[0] == 0:
        return forces
    u, v = edges[:, 0], edges[:, 1]
    diff = pos[u] - pos[v]
    dist = np.maximum(np.sqrt((diff * diff).sum(axis=1)), _MIN_DIST)
    f = (dist / k) * weights  # magnitude d^2/k, divided by dist for direction
    pull = diff * f[:, None]
    np.add.at(forces, u, -pull)
    np.add.at(forces, v, pull)
    return forces


def layout_energy(pos: np.ndarray, edges: np.ndarray, weights: np.ndarray, k: float) -> float:
    """Potential whose negative gradient is the FR force field:
    spring d^3/(3k) per weighted edge, -k^2 ln(d) per pair."""
    energy = 0.0
    if edges.shape[0]:
        diff = pos[edges[:, 0]] - pos[edges[:, 1]]
        dist = np.maximum(np.sqrt((diff * diff).sum(axis=1)), _MIN_DIST)
        energy += float((weights * dist**3 / (3.0 * k)).sum())
    n = pos.shape[0]
    if n > 1:
        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt((diff * diff).sum(axis=2))
        iu = np.triu_indices(n, k=1)
        energy += float((-(k * k) * np.log(np.maximum(dist[iu], _MIN_DIST))).sum())
    return energy


def _edge_arrays(obj) -> tuple[int, np.ndarray, np.ndarray]:
    if isinstance(obj, WeightedGraph):
        n = obj.n
        pairs = [(u, v) for u, v, _ in obj.edges]
        weights = [w for _, _, w in obj.edges]
    elif isinstance(obj, MapperSummary):
        n = len(obj.nodes)
        arr = obj.edge_array()
        pairs = [(u, v) for u, v, _ in arr]
        weights = [w for _, _, w in arr]
    else:
        raise TypeError(f"cannot lay out {type(obj).__name__}")
    edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    return n, edges, np.array(weights, dtype=np.float64)


def layout_fr(obj, seed: int = 0, iterations: int = 200, theta: float = 0.5) -> LayoutResult:
    """Fruchterman-Reingold layout of a graph or summary.

    Linear cooling to zero; initial positions are seed-derived; edge
    weights scale the attractive force. A single node sits at the origin.
    """
    if iterations < 0:
        raise ParameterError(f"iterations must be >= 0, got {iterations}")
    n, edges, weights = _edge_arrays(obj)
    if n == 0:
        return LayoutResult(np.zeros((0, 2)), seed, iterations, theta)
    if n == 1:
        return LayoutResult(np.zeros((1, 2)), seed, iterations, theta)
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2)) * math.sqrt(AREA)
    k = ideal_length(n)
    t0 = 0.1 * math.sqrt(AREA)
    for it in range(iterations):
        t = t0 * (1.0 - it / iterations)
        disp = repulsion_barnes_hut(pos, k, theta) + _attraction(pos, edges, weights, k)
        norm = np.maximum(np.sqrt((disp * disp).sum(axis=1)), _MIN_DIST)
        step = np.minimum(norm, t)
        pos = pos + disp / norm[:, None] * step[:, None]
    return LayoutResult(pos, seed, iterations, theta)


# -- SVG export -----------------------------------------------------------------

_LENS_TINTS = {
    "agd": (178, 24, 43),  # red
    "density": (27, 120, 55),  # green
    "laplacian_l2": (118, 42, 131),  # purple
    "laplacian_l3": (118, 42, 131),
    "pagerank_log": (217, 72, 1),  # orange
    "index": (33, 102, 172),  # blue
}


def lens_color(kind: str, value: float) -> str:
    """Sequential colormap per lens: light tint at 0 to the saturated base
    color at 1 (darker means lower only in the printed figures; here
    higher values are darker)."""
    base = _LENS_TINTS.get(kind, (80, 80, 80))
    v = min(max(float(value), 0.0), 1.0)
    r = round(245 + (base[0] - 245) * v)
    g = round(245 + (base[1] - 245) * v)
    b = round(245 + (base[2] - 245) * v)
    return f"#{r:02x}{g:02x}{b:02x}"


def _svg_canvas(pos: np.ndarray, size: float = 640.0, pad: float = 30.0):
    if pos.shape[0] == 0:
        return (lambda p: (pad, pad)), size
    lo = pos.min(axis=0)
    hi = pos.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
    scale = (size - 2 * pad) / span

    def project(p):
        return (pad + (p[0] - lo[0]) * scale, pad + (p[1] - lo[1]) * scale)

    return project, size


def summary_svg(summary: MapperSummary, result: LayoutResult) -> str:
    """Summary drawing: node radius grows with member count, node fill
    from the lens colormap at the mean lens value, edge stroke width
    proportional to intersection size."""
    pos = result.positions
    project, size = _svg_canvas(pos)
    kind = summary.meta.get("lens", "index")
    max_size = max((node.size for node in summary.nodes), default=1)
    max_w = max((e.weight for e in summary.edges), default=1)
    index_of = {node.id: i for i, node in enumerate(summary.nodes)}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}" '
        f'viewBox="0 0 {size:.0f} {size:.0f}">'
    ]
    for e in summary.edges:
        x1, y1 = project(pos[index_of[e.source]])
        x2, y2 = project(pos[index_of[e.target]])
        w = 1.0 + 5.0 * e.weight / max_w
        parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="#999999" stroke-width="{w:.2f}"/>'
        )
    for node in summary.nodes:
        x, y = project(pos[index_of[node.id]])
        r = 4.0 + 16.0 * node.size / max_size
        fill = lens_color(kind, node.mean_lens)
        parts.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}" fill="{fill}" '
            f'stroke="#333333" stroke-width="1"><title>node {node.id} '
            f'(interval {node.interval_id}, {node.size} members)</title></circle>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def graph_svg(graph: WeightedGraph, result: LayoutResult, field=None) -> str:
    """Original-graph drawing; node fill from the lens when given."""
    pos = result.positions
    project, size = _svg_canvas(pos)
    max_w = max((w for _, _, w in graph.edges), default=1.0)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}" '
        f'viewBox="0 0 {size:.0f} {size:.0f}">'
    ]
    for u, v, w in graph.edges:
        x1, y1 = project(pos[u])
        x2, y2 = project(pos[v])
        parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="#bbbbbb" stroke-width="{0.5 + 2.0 * w / max_w:.2f}"/>'
        )
    for i in range(graph.n):
        x, y = project(pos[i])
        fill = lens_color(field.kind, field.normalized[i]) if field is not None else "#4477aa"
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{fill}"/>')
    parts.append("</svg>")
    return "\n".join(parts)
