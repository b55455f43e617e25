"""Deterministic synthetic graph generators for tests, demos, and benchmarks.

All generators emit unit-weight graphs with node labels "0", "1", ... in
construction order, so the same spec (and seed, where one applies) always
yields a byte-identical serialization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .graph import WeightedGraph

KINDS = (
    "path",
    "cycle",
    "grid",
    "balanced_tree",
    "connected_caveman",
    "torus_mesh",
    "lollipop",
    "random_geometric",
    "complete_bipartite",
)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0


def _require(params: dict, *names: str) -> list:
    missing = [n for n in names if n not in params]
    if missing:
        raise ParameterError(f"missing parameter(s) {missing} for generator")
    return [params[n] for n in names]


def _positive_int(value, name: str, minimum: int = 1) -> int:
    v = int(value)
    if v < minimum:
        raise ParameterError(f"{name} must be >= {minimum}, got {value}")
    return v


def _path(params, rng):
    n = _positive_int(*_require(params, "n"), "n")
    return n, [(i, i + 1) for i in range(n - 1)]


def _cycle(params, rng):
    n = _positive_int(*_require(params, "n"), "n", minimum=3)
    return n, [(i, (i + 1) % n) for i in range(n)]


def _grid(params, rng):
    rows, cols = _require(params, "rows", "cols")
    rows = _positive_int(rows, "rows", minimum=2)
    cols = _positive_int(cols, "cols", minimum=2)
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1))
            if r + 1 < rows:
                edges.append((i, i + cols))
    return rows * cols, edges


def _balanced_tree(params, rng):
    b, h = _require(params, "branching", "height")
    b = _positive_int(b, "branching", minimum=2)
    h = _positive_int(h, "height", minimum=0)
    n = (b ** (h + 1) - 1) // (b - 1)
    edges = [(parent, b * parent + 1 + k) for parent in range((n - 1) // b) for k in range(b)]
    return n, edges


def _connected_caveman(params, rng):
    cliques, size = _require(params, "cliques", "size")
    cliques = _positive_int(cliques, "cliques", minimum=2)
    # size 2 would leave nothing of a clique once its edge is rewired
    size = _positive_int(size, "size", minimum=3)
    n = cliques * size
    edges = []
    for c in range(cliques):
        start = c * size
        for i in range(size):
            for j in range(i + 1, size):
                # one edge per clique is rewired to the previous clique
                if i == 0 and j == 1:
                    continue
                edges.append((start + i, start + j))
        edges.append((start, (start - 1) % n))
    return n, edges


def _torus_mesh(params, rng):
    rows = _positive_int(params.get("rows", 16), "rows", minimum=3)
    cols = _positive_int(params.get("cols", 16), "cols", minimum=3)
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            edges.append((i, r * cols + (c + 1) % cols))
            edges.append((i, ((r + 1) % rows) * cols + c))
    return rows * cols, edges


def _lollipop(params, rng):
    clique, path = _require(params, "clique", "path")
    clique = _positive_int(clique, "clique", minimum=3)
    path = _positive_int(path, "path", minimum=1)
    edges = [(i, j) for i in range(clique) for j in range(i + 1, clique)]
    edges.append((clique - 1, clique))
    edges.extend((clique + i, clique + i + 1) for i in range(path - 1))
    return clique + path, edges


def _random_geometric(params, rng):
    n, radius = _require(params, "n", "radius")
    n = _positive_int(n, "n")
    radius = float(radius)
    if not 0 < radius:
        raise ParameterError(f"radius must be > 0, got {radius}")
    pts = rng.random((n, 2))
    r2 = radius * radius
    # cell binning: candidate pairs only within neighboring cells
    cell = max(radius, 1e-9)
    ncell = max(1, int(np.floor(1.0 / cell)) + 1)
    cx = np.minimum((pts[:, 0] / cell).astype(np.int64), ncell - 1)
    cy = np.minimum((pts[:, 1] / cell).astype(np.int64), ncell - 1)
    cell_id = cx * ncell + cy
    order = np.argsort(cell_id, kind="stable")
    sorted_ids = cell_id[order]
    starts = np.searchsorted(sorted_ids, np.arange(ncell * ncell))
    ends = np.searchsorted(sorted_ids, np.arange(ncell * ncell), side="right")

    edges = []
    for cid in np.unique(sorted_ids):
        ax, ay = divmod(int(cid), ncell)
        here = order[starts[cid]:ends[cid]]
        for dx, dy in ((0, 0), (0, 1), (1, -1), (1, 0), (1, 1)):
            bx, by = ax + dx, ay + dy
            if not (0 <= bx < ncell and 0 <= by < ncell):
                continue
            ocid = bx * ncell + by
            there = order[starts[ocid]:ends[ocid]]
            if there.size == 0 or here.size == 0:
                continue
            d2 = ((pts[here, None, :] - pts[None, there, :]) ** 2).sum(axis=2)
            ii, jj = np.nonzero(d2 <= r2)
            for a, b in zip(here[ii], there[jj]):
                if (dx, dy) == (0, 0) and a >= b:
                    continue
                edges.append((int(a), int(b)) if a < b else (int(b), int(a)))
    edges.sort()
    return n, edges


def _complete_bipartite(params, rng):
    m, n = _require(params, "m", "n")
    m = _positive_int(m, "m")
    n = _positive_int(n, "n")
    edges = [(i, m + j) for i in range(m) for j in range(n)]
    return m + n, edges


_BUILDERS = {
    "path": _path,
    "cycle": _cycle,
    "grid": _grid,
    "balanced_tree": _balanced_tree,
    "connected_caveman": _connected_caveman,
    "torus_mesh": _torus_mesh,
    "lollipop": _lollipop,
    "random_geometric": _random_geometric,
    "complete_bipartite": _complete_bipartite,
}


def generate(spec: GeneratorSpec) -> WeightedGraph:
    """Build the graph described by ``spec``. Identical (spec, seed) pairs
    produce identical graphs; only random_geometric consumes the seed."""
    if spec.kind not in _BUILDERS:
        raise ParameterError(f"unknown generator kind {spec.kind!r}; choose from {KINDS}")
    rng = np.random.default_rng(spec.seed)
    try:
        n, edges = _BUILDERS[spec.kind](dict(spec.params), rng)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"bad parameters for {spec.kind}: {exc}") from None
    labels = [str(i) for i in range(n)]
    return WeightedGraph(labels, [(u, v, 1.0) for u, v in edges])
