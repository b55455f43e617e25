import json

import numpy as np
import pytest

from graphmapper import (
    ParseError,
    ValidationError,
    WeightedGraph,
    connected_components,
    induced_subgraph,
    largest_component,
    parse_graph,
    sssp,
)
from graphmapper.graph import EDGE_LIST, GRAPH_JSON

from conftest import complete_graph, graph_from_edges, path_graph, random_connected_graph


class TestParseEdgeList:
    def test_default_weights(self):
        g = parse_graph("a b\nb c")
        assert g.n == 3 and g.m == 2
        assert all(w == 1.0 for _, _, w in g.edges)
        assert g.labels == ("a", "b", "c")

    def test_explicit_weight(self):
        g = parse_graph("a b 2.5")
        assert g.edges == ((0, 1, 2.5),)

    def test_non_positive_weight_rejected(self):
        with pytest.raises(ValidationError, match="line 1"):
            parse_graph("a b -1")
        with pytest.raises(ValidationError):
            parse_graph("a b 0")

    def test_comments_and_blanks_ignored(self):
        g = parse_graph("# header\n\na b\n  # indented comment\nb c 3\n")
        assert g.m == 2

    def test_malformed_line_reports_number(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_graph("a b\nb c\nonly-one-field")

    def test_bad_weight_reports_number(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_graph("a b\nb c notafloat")

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ValidationError, match="duplicate"):
            parse_graph("a b\nb a")

    def test_self_loop_rejected(self):
        with pytest.raises(ValidationError, match="self-loop"):
            parse_graph("a a")


class TestParseGraphJson:
    def test_round_trip(self):
        g = parse_graph("a b 2.0\nb c\nc d 0.5")
        again = parse_graph(g.to_json_bytes(), format=GRAPH_JSON)
        assert again == g

    def test_edge_list_round_trip(self):
        g = parse_graph("a b 2.0\nb c\nc d 0.25")
        again = parse_graph(g.to_edge_list(), format=EDGE_LIST)
        assert again == g

    def test_weight_defaults(self):
        g = parse_graph(
            json.dumps({"nodes": [{"id": "x"}, {"id": "y"}], "edges": [{"source": "x", "target": "y"}]}),
            format=GRAPH_JSON,
        )
        assert g.edges == ((0, 1, 1.0),)

    def test_isolated_nodes_accepted(self):
        g = parse_graph(
            json.dumps({"nodes": [{"id": "a"}, {"id": "b"}, {"id": "c"}], "edges": [{"source": "a", "target": "b"}]}),
            format=GRAPH_JSON,
        )
        assert g.n == 3 and g.m == 1
        comps = connected_components(g)
        assert [c.tolist() for c in comps] == [[0, 1], [2]]

    def test_unknown_endpoint_rejected(self):
        with pytest.raises(ValidationError, match="unknown node"):
            parse_graph(
                json.dumps({"nodes": [{"id": "a"}], "edges": [{"source": "a", "target": "zz"}]}),
                format=GRAPH_JSON,
            )

    def test_invalid_json_is_parse_error(self):
        with pytest.raises(ParseError):
            parse_graph(b"{nodes: ", format=GRAPH_JSON)


class TestComponents:
    def test_restrict_drops_induced_edges(self):
        g = path_graph(3)
        comps = connected_components(g, restrict=np.array([0, 2]))
        assert [c.tolist() for c in comps] == [[0], [2]]

    def test_whole_graph_connected(self):
        comps = connected_components(path_graph(3))
        assert [c.tolist() for c in comps] == [[0, 1, 2]]

    def test_disjoint_triangles(self):
        g = graph_from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        comps = connected_components(g)
        assert [c.tolist() for c in comps] == [[0, 1, 2], [3, 4, 5]]

    def test_empty_restrict(self):
        assert connected_components(path_graph(3), restrict=np.array([], dtype=int)) == []

    def test_partition_property(self, rng):
        for _ in range(20):
            g = random_connected_graph(rng, max_nodes=40)
            subset = np.nonzero(rng.random(g.n) < 0.6)[0]
            comps = connected_components(g, restrict=subset)
            merged = sorted(int(x) for c in comps for x in c)
            assert merged == sorted(subset.tolist())  # union is the subset
            assert len(merged) == len(set(merged))  # disjoint


class TestSssp:
    def test_path_distances(self):
        assert sssp(path_graph(3), "0").tolist() == [0.0, 1.0, 2.0]

    def test_single_weighted_edge(self):
        g = parse_graph("a b 2.5")
        assert sssp(g, "a").tolist() == [0.0, 2.5]

    def test_unreachable_is_infinite(self):
        g = graph_from_edges(3, [(0, 1)])
        d = sssp(g, "0")
        assert d[1] == 1.0 and np.isinf(d[2])

    def test_unknown_source(self):
        with pytest.raises(LookupError, match="nope"):
            sssp(path_graph(2), "nope")

    def test_triangle_inequality_on_sampled_triples(self, rng):
        for _ in range(5):
            g = random_connected_graph(rng, max_nodes=60, weighted=True)
            dists = np.array([sssp(g, lab) for lab in g.labels])
            for _ in range(200):
                a, b, c = rng.integers(0, g.n, 3)
                assert dists[a, c] <= dists[a, b] + dists[b, c] + 1e-9

    def test_relabeling_preserves_distance_multiset(self, rng):
        g = random_connected_graph(rng, max_nodes=30, weighted=True)
        perm = rng.permutation(g.n)
        relabeled = WeightedGraph(
            [str(10_000 + i) for i in range(g.n)],
            [(int(perm[u]), int(perm[v]), w) for u, v, w in g.edges],
        )
        d1 = np.sort(np.concatenate([sssp(g, lab) for lab in g.labels]))
        d2 = np.sort(np.concatenate([sssp(relabeled, lab) for lab in relabeled.labels]))
        assert np.allclose(d1, d2)
        sizes1 = sorted(len(c) for c in connected_components(g))
        sizes2 = sorted(len(c) for c in connected_components(relabeled))
        assert sizes1 == sizes2


class TestLargestComponent:
    def test_k3_beats_k2(self):
        g = graph_from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4)])
        assert largest_component(g).tolist() == [0, 1, 2]

    def test_tie_breaks_to_lowest_index(self):
        g = graph_from_edges(4, [(2, 3), (0, 1)])
        assert largest_component(g).tolist() == [0, 1]

    def test_connected_graph_is_identity(self):
        g = path_graph(4)
        assert largest_component(g).tolist() == [0, 1, 2, 3]

    def test_empty_graph(self):
        g = WeightedGraph([], [])
        assert largest_component(g).tolist() == []


class TestInducedSubgraph:
    def test_labels_and_edges_preserved(self):
        g = parse_graph("a b 2\nb c\nc d 4\na d")
        sub = induced_subgraph(g, np.array([0, 1, 3]))
        assert sub.labels == ("a", "b", "d")
        assert sub.edges == ((0, 1, 2.0), (0, 2, 1.0))

    def test_complete_graph_subset(self):
        g = complete_graph(5)
        sub = induced_subgraph(g, np.array([1, 2, 4]))
        assert sub.n == 3 and sub.m == 3


def test_graph_rejects_bad_construction():
    with pytest.raises(ValidationError):
        WeightedGraph(["a", "b"], [(0, 0, 1.0)])
    with pytest.raises(ValidationError):
        WeightedGraph(["a", "b"], [(0, 1, 1.0), (1, 0, 2.0)])
    with pytest.raises(ValidationError):
        WeightedGraph(["a", "a"], [])
