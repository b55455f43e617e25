"""Shared builders and independent oracles for the test suite.

The oracles here are deliberately naive (dense matrices, quadratic scans,
BFS on dicts) and never call the production code paths they check.
"""

import numpy as np
import pytest

from graphmapper import WeightedGraph


def graph_from_edges(n, edges, weights=None):
    labels = [str(i) for i in range(n)]
    if weights is None:
        weights = [1.0] * len(edges)
    return WeightedGraph(labels, [(u, v, w) for (u, v), w in zip(edges, weights)])


def path_graph(n):
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n, weight=1.0):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return graph_from_edges(n, edges, [weight] * len(edges))


def star_graph(leaves):
    return graph_from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def two_cliques_bridge(clique_size=10):
    """Two complete graphs joined by a single bridge edge (0 -- clique_size)."""
    edges = []
    for base in (0, clique_size):
        for i in range(clique_size):
            for j in range(i + 1, clique_size):
                edges.append((base + i, base + j))
    edges.append((0, clique_size))
    return graph_from_edges(2 * clique_size, edges)


def random_connected_graph(rng, max_nodes=120, weighted=False):
    """Random spanning tree plus extra edges; connected by construction."""
    n = int(rng.integers(4, max_nodes + 1))
    edges = set()
    for i in range(1, n):
        edges.add((int(rng.integers(0, i)), i))
    extra = int(rng.integers(0, 2 * n))
    for _ in range(extra):
        i, j = sorted(int(x) for x in rng.integers(0, n, 2))
        if i != j:
            edges.add((i, j))
    edges = sorted(edges)
    if weighted:
        weights = [float(w) for w in rng.uniform(0.5, 2.0, len(edges))]
    else:
        weights = None
    return graph_from_edges(n, edges, weights)


# -- oracles ---------------------------------------------------------------


def dense_distance_matrix(g: WeightedGraph) -> np.ndarray:
    """All-pairs shortest paths by Floyd-Warshall on a dense matrix."""
    n = g.n
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in g.edges:
        d[u, v] = min(d[u, v], w)
        d[v, u] = min(d[v, u], w)
    for k in range(n):
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    return d


def dense_laplacian(g: WeightedGraph) -> np.ndarray:
    n = g.n
    lap = np.zeros((n, n))
    for u, v, w in g.edges:
        lap[u, u] += w
        lap[v, v] += w
        lap[u, v] -= w
        lap[v, u] -= w
    return lap


def pagerank_linear_solve(g: WeightedGraph, damping=0.85) -> np.ndarray:
    """Direct solve of the PageRank fixed-point equations."""
    n = g.n
    m = np.zeros((n, n))
    deg = np.zeros(n)
    for u, v, _ in g.edges:
        deg[u] += 1
        deg[v] += 1
    for u, v, _ in g.edges:
        m[v, u] = 1.0 / deg[u]
        m[u, v] = 1.0 / deg[v]
    return np.linalg.solve(np.eye(n) - damping * m, np.full(n, (1.0 - damping) / n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
