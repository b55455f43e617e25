"""Summary-graph construction: pull an interval cover back through a lens,
split each preimage into connected components, and connect components that
share graph nodes (the 1-skeleton of the nerve of the pullback cover).

Summary nodes carry their member sets; edges carry the exact intersection.
Only pairwise intersections are computed — higher-order overlaps are never
enumerated.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .cover import Cover, assign_nodes
from .graph import WeightedGraph, induced_subgraph, is_connected, largest_component
from .lenses import CONNECTIVITY_REQUIRED, LensField, compute_lens, resolve_lens_kind


@dataclass(eq=False, slots=True)
class SummaryNode:
    """A connected component of one cover element's preimage."""

    id: int
    interval_id: int
    members: np.ndarray  # sorted node indices into the source graph
    mean_lens: float

    @property
    def size(self) -> int:
        return int(self.members.size)


@dataclass(eq=False, slots=True)
class SummaryEdge:
    source: int
    target: int
    intersection: np.ndarray  # sorted node indices

    @property
    def weight(self) -> int:
        return int(self.intersection.size)


@dataclass
class MapperSummary:
    nodes: list[SummaryNode]
    edges: list[SummaryEdge]
    labels: tuple[str, ...]  # node labels of the graph the summary describes
    filter_state: dict = dc_field(default_factory=lambda: {"min_component_size": 0, "largest_component_only": False})
    meta: dict = dc_field(default_factory=dict)

    def node_by_id(self, node_id: int) -> SummaryNode:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise KeyError(f"no summary node with id {node_id}")

    def edge_array(self) -> list[tuple[int, int, float]]:
        """Edges keyed by *positional* node index, for layout consumers."""
        pos = {node.id: i for i, node in enumerate(self.nodes)}
        return [(pos[e.source], pos[e.target], float(e.weight)) for e in self.edges]

    def to_json_obj(self, positions: np.ndarray | None = None) -> dict:
        nodes = []
        for i, node in enumerate(self.nodes):
            entry = {
                "id": node.id,
                "interval": node.interval_id,
                "size": node.size,
                "mean_lens": node.mean_lens,
                "members": [self.labels[m] for m in node.members],
            }
            if positions is not None:
                entry["x"] = float(positions[i, 0])
                entry["y"] = float(positions[i, 1])
            nodes.append(entry)
        edges = [
            {
                "source": e.source,
                "target": e.target,
                "weight": e.weight,
                "intersection": [self.labels[m] for m in e.intersection],
            }
            for e in self.edges
        ]
        return {"nodes": nodes, "edges": edges, "filter": dict(self.filter_state), "meta": dict(self.meta)}


def pullback(g: WeightedGraph, field: LensField, cover: Cover) -> tuple[list[SummaryNode], np.ndarray]:
    """Connected components of every cover element's preimage, in cover
    order with ids assigned by (interval order, smallest member index).

    Also returns the indices of nodes covered by no interval.

    All preimages are processed in one pass: each interval contributes a
    layer of a block-diagonal graph, so a single components run covers
    every cover element.
    """
    assignment, uncovered = assign_nodes(cover, field)
    member_arrays = [assignment[iv.id] for iv in cover.intervals]
    interval_ids = [iv.id for iv in cover.intervals]
    sizes = np.array([m.size for m in member_arrays], dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offsets[-1])
    if total == 0:
        return [], uncovered

    all_members = np.concatenate([m for m in member_arrays if m.size])
    eu, ev = g.edge_index()
    mask = np.zeros(g.n, dtype=bool)
    remap = np.zeros(g.n, dtype=np.int64)
    layered_u: list[np.ndarray] = []
    layered_v: list[np.ndarray] = []
    for t, members in enumerate(member_arrays):
        if members.size == 0:
            continue
        mask[members] = True
        remap[members] = np.arange(members.size) + offsets[t]
        keep = mask[eu] & mask[ev]
        layered_u.append(remap[eu[keep]])
        layered_v.append(remap[ev[keep]])
        mask[members] = False
    lu = np.concatenate(layered_u) if layered_u else np.zeros(0, dtype=np.int64)
    lv = np.concatenate(layered_v) if layered_v else np.zeros(0, dtype=np.int64)
    # CSR assembled directly; one direction suffices for an undirected
    # components pass, and the conversion machinery is the hot path here.
    order = np.argsort(lu, kind="stable")
    indptr = np.zeros(total + 1, dtype=np.int32)
    np.cumsum(np.bincount(lu, minlength=total), out=indptr[1:])
    layered = sp.csr_array(
        (np.ones(lu.size), lv[order].astype(np.int32), indptr), shape=(total, total)
    )
    _, labels = csgraph.connected_components(layered, directed=False)

    order = np.argsort(labels, kind="stable")  # members stay ascending per component
    sorted_members = all_members[order]
    starts = np.nonzero(np.r_[True, np.diff(labels[order]) != 0])[0]
    ends = np.r_[starts[1:], order.size]
    sums = np.add.reduceat(field.normalized[sorted_members], starts)
    comp_layer = np.searchsorted(offsets, order[starts], side="right") - 1

    components = np.lexsort((sorted_members[starts], comp_layer))
    nodes = [
        SummaryNode(
            id=new_id,
            interval_id=interval_ids[int(comp_layer[c])],
            members=sorted_members[starts[c] : ends[c]],
            mean_lens=float(sums[c] / (ends[c] - starts[c])),
        )
        for new_id, c in enumerate(components)
    ]
    return nodes, uncovered


def nerve(nodes: list[SummaryNode], n_graph_nodes: int) -> list[SummaryEdge]:
    """One edge per unordered pair of summary nodes with intersecting
    members; the edge records the exact intersection.

    Components originating from the same interval are disjoint by
    construction; this is asserted, not assumed. Any interval pair may
    intersect (manual covers can overlap arbitrarily), so every shared
    graph node contributes all its owner pairs.
    """
    if not nodes:
        return []
    counts = np.array([node.members.size for node in nodes], dtype=np.int64)
    owner_ids = np.repeat(np.array([node.id for node in nodes], dtype=np.int64), counts)
    graph_nodes = np.concatenate([node.members for node in nodes])
    order = np.argsort(graph_nodes, kind="stable")  # owners stay ascending per node
    gn, ow = graph_nodes[order], owner_ids[order]
    run_starts = np.nonzero(np.r_[True, np.diff(gn) != 0])[0]
    run_lengths = np.diff(np.r_[run_starts, gn.size])

    interval_of = np.empty(int(owner_ids.max()) + 1 if owner_ids.size else 1, dtype=np.int64)
    for node in nodes:
        interval_of[node.id] = node.interval_id

    pair_a: list[np.ndarray] = []
    pair_b: list[np.ndarray] = []
    pair_v: list[np.ndarray] = []
    for length in np.unique(run_lengths):
        if length < 2:
            continue
        starts_l = run_starts[run_lengths == length]
        owners = ow[starts_l[:, None] + np.arange(length)]  # (runs, length)
        iu, ju = np.triu_indices(int(length), k=1)
        pair_a.append(owners[:, iu].ravel())
        pair_b.append(owners[:, ju].ravel())
        pair_v.append(np.repeat(gn[starts_l], iu.size))
    if not pair_a:
        return []
    a = np.concatenate(pair_a)
    b = np.concatenate(pair_b)
    v = np.concatenate(pair_v)
    if (interval_of[a] == interval_of[b]).any():
        bad = int(np.nonzero(interval_of[a] == interval_of[b])[0][0])
        raise AssertionError(
            f"components {a[bad]} and {b[bad]} of interval {interval_of[a[bad]]} "
            f"overlap on node {v[bad]}"
        )
    key = a * (len(nodes) + 1) + b
    order = np.lexsort((v, key))  # by pair, members ascending within a pair
    key, a, b, v = key[order], a[order], b[order], v[order]
    starts = np.nonzero(np.r_[True, np.diff(key) != 0])[0]
    ends = np.r_[starts[1:], key.size]
    return [
        SummaryEdge(source=int(a[s]), target=int(b[s]), intersection=v[s:e])
        for s, e in zip(starts, ends)
    ]


def _summary_components(summary: MapperSummary) -> list[list[int]]:
    """Connected components of the summary graph itself, each sorted,
    ordered by smallest contained node id."""
    adjacency: dict[int, list[int]] = {node.id: [] for node in summary.nodes}
    for e in summary.edges:
        adjacency[e.source].append(e.target)
        adjacency[e.target].append(e.source)
    seen: set[int] = set()
    comps: list[list[int]] = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            cur = stack.pop()
            comp.append(cur)
            for nb in adjacency[cur]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        comps.append(sorted(comp))
    return comps


def filter_summary(summary: MapperSummary, min_size: int = 0, largest_only: bool = False) -> MapperSummary:
    """Drop summary nodes below the size threshold (with incident edges),
    then optionally keep only the largest connected component of the
    summary graph (ties broken by smallest node id)."""
    if min_size < 0:
        raise ValueError(f"min_size must be >= 0, got {min_size}")
    keep_nodes = [node for node in summary.nodes if node.size >= min_size]
    keep_ids = {node.id for node in keep_nodes}
    keep_edges = [e for e in summary.edges if e.source in keep_ids and e.target in keep_ids]
    out = MapperSummary(
        nodes=keep_nodes,
        edges=keep_edges,
        labels=summary.labels,
        filter_state={"min_component_size": int(min_size), "largest_component_only": bool(largest_only)},
        meta=dict(summary.meta),
    )
    if largest_only and out.nodes:
        comps = _summary_components(out)
        best = max(comps, key=len)  # earliest wins ties, i.e. smallest node id
        chosen = set(best)
        out.nodes = [node for node in out.nodes if node.id in chosen]
        out.edges = [e for e in out.edges if e.source in chosen and e.target in chosen]
    return out


def summarize(
    g: WeightedGraph,
    field: LensField,
    cover: Cover,
    min_size: int = 0,
    largest_only: bool = False,
    extra_meta: dict | None = None,
) -> MapperSummary:
    """Pullback + nerve + filter for an already-computed lens field."""
    nodes, uncovered = pullback(g, field, cover)
    edges = nerve(nodes, g.n)
    summary = MapperSummary(
        nodes=nodes,
        edges=edges,
        labels=g.labels,
        meta={
            "lens": field.kind,
            "lens_params": dict(field.params),
            "constant_lens": field.constant,
            "cover": cover.to_json_obj(),
            "coverage_gaps": [[lo, hi] for lo, hi in cover.coverage_gaps()],
            "graph_nodes": g.n,
            "graph_edges": g.m,
            "uncovered": [g.labels[i] for i in uncovered],
            **(extra_meta or {}),
        },
    )
    return filter_summary(summary, min_size=min_size, largest_only=largest_only)


def compute_mog(
    g: WeightedGraph,
    lens_kind: str,
    lens_params: dict | None = None,
    cover: Cover | None = None,
    min_size: int = 0,
    largest_only: bool = False,
    threads: int = 1,
) -> MapperSummary:
    """Full pipeline: lens -> cover preimages -> components -> nerve -> filter.

    Lenses that need a connected graph are computed on the largest
    component when the input is disconnected; the restriction is recorded
    in the summary metadata.
    """
    if cover is None:
        raise ValueError("compute_mog requires a cover (see uniform_cover)")
    kind = resolve_lens_kind(lens_kind)
    restricted = False
    work = g
    if kind in CONNECTIVITY_REQUIRED and not is_connected(g):
        work = induced_subgraph(g, largest_component(g))
        restricted = True
    field = compute_lens(work, kind, threads=threads, **(lens_params or {}))
    return summarize(
        work,
        field,
        cover,
        min_size=min_size,
        largest_only=largest_only,
        extra_meta={"restricted_to_largest_component": restricted},
    )


def summary_from_json_obj(obj: dict) -> MapperSummary:
    """Rebuild a summary from its wire format (labels recovered from the
    membership lists, in order of first appearance)."""
    labels: list[str] = []
    index: dict[str, int] = {}

    def intern(lab: str) -> int:
        if lab not in index:
            index[lab] = len(labels)
            labels.append(lab)
        return index[lab]

    nodes = [
        SummaryNode(
            id=int(entry["id"]),
            interval_id=int(entry["interval"]),
            members=np.array(sorted(intern(m) for m in entry["members"]), dtype=np.int64),
            mean_lens=float(entry["mean_lens"]),
        )
        for entry in obj["nodes"]
    ]
    edges = [
        SummaryEdge(
            source=int(entry["source"]),
            target=int(entry["target"]),
            intersection=np.array(sorted(intern(m) for m in entry["intersection"]), dtype=np.int64),
        )
        for entry in obj.get("edges", [])
    ]
    return MapperSummary(
        nodes=nodes,
        edges=edges,
        labels=tuple(labels),
        filter_state=dict(obj.get("filter", {"min_component_size": 0, "largest_component_only": False})),
        meta=dict(obj.get("meta", {})),
    )
