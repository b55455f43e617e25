"""Weighted undirected graph container plus parsing, shortest paths,
connected components, and induced subgraphs.

Node labels are arbitrary strings mapped to dense integer indices in
first-appearance order, so every tie-break downstream is deterministic.
Graphs are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import json
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import ParameterError, ParseError, ValidationError

EDGE_LIST = "edge-list"
GRAPH_JSON = "graph-json"


class WeightedGraph:
    """Undirected graph with strictly positive edge weights.

    Invariants enforced at construction: no self-loops, at most one edge
    per unordered node pair, all weights > 0.
    """

    def __init__(self, labels: Sequence[str], edges: Iterable[tuple[int, int, float]]):
        self.labels: tuple[str, ...] = tuple(str(x) for x in labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("duplicate node labels")
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        n = len(self.labels)

        edge_list: list[tuple[int, int, float]] = []
        seen: set[tuple[int, int]] = set()
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u},{v}) references unknown node index")
            if u == v:
                raise ValidationError(f"self-loop on node {self.labels[u]!r}")
            w = float(w)
            if not w > 0:
                raise ValidationError(f"non-positive weight {w} on edge ({self.labels[u]!r},{self.labels[v]!r})")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValidationError(f"duplicate edge ({self.labels[u]!r},{self.labels[v]!r})")
            seen.add(key)
            edge_list.append((u, v, w))
        self.edges: tuple[tuple[int, int, float], ...] = tuple(edge_list)
        self._csr: Optional[sp.csr_array] = None
        self._csr_unit: Optional[sp.csr_array] = None
        self._edge_index: Optional[tuple[np.ndarray, np.ndarray]] = None

    # -- basic accessors ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise LookupError(f"unknown node label {label!r}") from None

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WeightedGraph)
            and self.labels == other.labels
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        return f"WeightedGraph(|V|={self.n}, |E|={self.m})"

    def adjacency(self, unit_weights: bool = False) -> sp.csr_array:
        """Symmetric CSR adjacency; cached. ``unit_weights`` replaces every
        weight with 1 (used where the math counts neighbors, not weights)."""
        if unit_weights:
            if self._csr_unit is None:
                a = self.adjacency().copy()
                a.data = np.ones_like(a.data)
                self._csr_unit = a
            return self._csr_unit
        if self._csr is None:
            n = self.n
            if self.m == 0:
                self._csr = sp.csr_array((n, n), dtype=np.float64)
            else:
                e = np.asarray(self.edges, dtype=np.float64)
                rows = np.concatenate([e[:, 0], e[:, 1]]).astype(np.int64)
                cols = np.concatenate([e[:, 1], e[:, 0]]).astype(np.int64)
                data = np.concatenate([e[:, 2], e[:, 2]])
                self._csr = sp.csr_array((data, (rows, cols)), shape=(n, n))
        return self._csr

    def degrees(self) -> np.ndarray:
        """Neighbor counts (unweighted)."""
        a = self.adjacency()
        return np.diff(a.indptr)

    def edge_index(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoints as two parallel int arrays; cached."""
        if self._edge_index is None:
            if self.m == 0:
                self._edge_index = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
            else:
                e = np.asarray([(u, v) for u, v, _ in self.edges], dtype=np.int64)
                self._edge_index = (e[:, 0], e[:, 1])
        return self._edge_index

    def neighbor_weight_sums(self) -> np.ndarray:
        return np.asarray(self.adjacency().sum(axis=1)).ravel()

    # -- serialization -------------------------------------------------------

    def to_json_obj(self, positions: Optional[np.ndarray] = None) -> dict:
        nodes = []
        for i, lab in enumerate(self.labels):
            node = {"id": lab}
            if positions is not None:
                node["x"] = float(positions[i, 0])
                node["y"] = float(positions[i, 1])
            nodes.append(node)
        edges = [
            {"source": self.labels[u], "target": self.labels[v], "weight": w}
            for u, v, w in self.edges
        ]
        return {"nodes": nodes, "edges": edges}

    def to_json_bytes(self) -> bytes:
        return json.dumps(self.to_json_obj(), separators=(",", ":")).encode()

    def to_edge_list(self) -> str:
        lines = [
            f"{self.labels[u]} {self.labels[v]} {w!r}" for u, v, w in self.edges
        ]
        return "\n".join(lines) + ("\n" if lines else "")


# -- parsing ------------------------------------------------------------------


def _parse_edge_list(text: str) -> WeightedGraph:
    labels: list[str] = []
    index: dict[str, int] = {}
    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()

    def intern(lab: str) -> int:
        if lab not in index:
            index[lab] = len(labels)
            labels.append(lab)
        return index[lab]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) not in (2, 3):
            raise ParseError(f"expected '<u> <v> [weight]', got {len(fields)} fields", line=lineno)
        u, v = intern(fields[0]), intern(fields[1])
        if len(fields) == 3:
            try:
                w = float(fields[2])
            except ValueError:
                raise ParseError(f"bad weight {fields[2]!r}", line=lineno) from None
        else:
            w = 1.0
        try:
            _check_edge(u, v, w, labels)
        except ValidationError as exc:
            raise ValidationError(str(exc), line=lineno) from None
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise ValidationError(f"duplicate edge ({fields[0]!r},{fields[1]!r})", line=lineno)
        seen.add(key)
        edges.append((u, v, w))
    return WeightedGraph(labels, edges)


def _check_edge(u: int, v: int, w: float, labels: list[str]) -> None:
    if u == v:
        raise ValidationError(f"self-loop on node {labels[u]!r}")
    if not w > 0:
        raise ValidationError(f"non-positive weight {w} on edge ({labels[u]!r},{labels[v]!r})")


def _parse_graph_json(text: str) -> WeightedGraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(obj, dict) or "nodes" not in obj or "edges" not in obj:
        raise ParseError("graph JSON must be an object with 'nodes' and 'edges'")
    labels = []
    for node in obj["nodes"]:
        if not isinstance(node, dict) or "id" not in node:
            raise ParseError(f"node entry missing 'id': {node!r}")
        labels.append(str(node["id"]))
    if len(set(labels)) != len(labels):
        raise ValidationError("duplicate node ids")
    index = {lab: i for i, lab in enumerate(labels)}
    edges = []
    for entry in obj["edges"]:
        if not isinstance(entry, dict) or "source" not in entry or "target" not in entry:
            raise ParseError(f"edge entry missing 'source'/'target': {entry!r}")
        s, t = str(entry["source"]), str(entry["target"])
        if s not in index:
            raise ValidationError(f"edge references unknown node {s!r}")
        if t not in index:
            raise ValidationError(f"edge references unknown node {t!r}")
        w = entry.get("weight", 1.0)
        if not isinstance(w, (int, float)):
            raise ParseError(f"bad weight {w!r} on edge ({s!r},{t!r})")
        edges.append((index[s], index[t], float(w)))
    return WeightedGraph(labels, edges)


def parse_graph(data: bytes | str, format: str = EDGE_LIST) -> WeightedGraph:
    """Parse a graph from bytes or text in 'edge-list' or 'graph-json' format.

    Missing weights default to 1.0. Raises ParseError (with a line number
    where possible) on malformed input, ValidationError on invariant
    violations (non-positive weight, duplicate edge, self-loop).
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if format == EDGE_LIST:
        return _parse_edge_list(data)
    if format == GRAPH_JSON:
        return _parse_graph_json(data)
    raise ParameterError(f"unknown graph format {format!r}; use 'edge-list' or 'graph-json'")


def detect_format(path_or_name: str) -> str:
    return GRAPH_JSON if str(path_or_name).endswith(".json") else EDGE_LIST


# -- algorithms ----------------------------------------------------------------


def sssp(g: WeightedGraph, source: str) -> np.ndarray:
    """Weighted geodesic distances from ``source`` to every node
    (np.inf for unreachable)."""
    src = g.index_of(source)
    if g.n == 1:
        return np.zeros(1)
    return csgraph.dijkstra(g.adjacency(), directed=False, indices=src)


def distances_from(g: WeightedGraph, sources: np.ndarray) -> np.ndarray:
    """Rows of geodesic distances, one per source index. Internal fan-out
    point for the distance-based lenses."""
    if g.n == 1:
        return np.zeros((len(sources), 1))
    return csgraph.dijkstra(g.adjacency(), directed=False, indices=sources)


def _group_by_label(idx: np.ndarray, labels: np.ndarray) -> list[np.ndarray]:
    """Split idx (ascending) into groups of equal label, each group sorted,
    groups ordered by smallest member."""
    order = np.argsort(labels, kind="stable")  # stable keeps members ascending
    permuted = idx[order]
    boundaries = np.nonzero(np.diff(labels[order]))[0] + 1
    edges_at = [0, *boundaries.tolist(), permuted.size]
    comps = [permuted[s:e] for s, e in zip(edges_at, edges_at[1:])]
    comps.sort(key=lambda c: int(c[0]))
    return comps


def connected_components(
    g: WeightedGraph, restrict: Optional[np.ndarray] = None
) -> list[np.ndarray]:
    """Maximal connected components, optionally of the subgraph induced by
    ``restrict`` (an edge survives iff both endpoints are in it).

    Components are ordered by their smallest node index; members sorted.
    """
    if restrict is None:
        idx = np.arange(g.n, dtype=np.int64)
        if idx.size == 0:
            return []
        _, labels = csgraph.connected_components(g.adjacency(), directed=False)
        return _group_by_label(idx, labels)
    idx = np.unique(np.asarray(restrict, dtype=np.int64))
    if idx.size == 0:
        return []
    if idx[0] < 0 or idx[-1] >= g.n:
        raise ValidationError("restrict set contains out-of-range node indices")
    # induced subgraph built by masking the edge list (cheaper than sparse
    # fancy indexing)
    mask = np.zeros(g.n, dtype=bool)
    mask[idx] = True
    remap = np.zeros(g.n, dtype=np.int64)
    remap[idx] = np.arange(idx.size)
    eu, ev = g.edge_index()
    keep = mask[eu] & mask[ev]
    ru, rv = remap[eu[keep]], remap[ev[keep]]
    k = idx.size
    sub = sp.csr_array(
        (np.ones(2 * ru.size), (np.concatenate([ru, rv]), np.concatenate([rv, ru]))),
        shape=(k, k),
    )
    _, labels = csgraph.connected_components(sub, directed=False)
    return _group_by_label(idx, labels)


def largest_component(g: WeightedGraph) -> np.ndarray:
    """Node indices of a maximum-cardinality component; ties broken by the
    smallest contained node index. Empty graph gives an empty set."""
    comps = connected_components(g)
    if not comps:
        return np.array([], dtype=np.int64)
    best = max(comps, key=len)  # max() keeps the earliest on ties
    return best


def is_connected(g: WeightedGraph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def induced_subgraph(g: WeightedGraph, nodes: np.ndarray) -> WeightedGraph:
    """Subgraph induced by the given node indices, labels preserved,
    ordered by original index."""
    idx = np.unique(np.asarray(nodes, dtype=np.int64))
    keep = np.zeros(g.n, dtype=bool)
    keep[idx] = True
    remap = -np.ones(g.n, dtype=np.int64)
    remap[idx] = np.arange(idx.size)
    labels = [g.labels[i] for i in idx]
    edges = [
        (int(remap[u]), int(remap[v]), w)
        for u, v, w in g.edges
        if keep[u] and keep[v]
    ]
    return WeightedGraph(labels, edges)
