import numpy as np
import pytest

from graphmapper import (
    ConvergenceError,
    DisconnectedGraphError,
    MultiplicityError,
    ParameterError,
    ValidationError,
    WeightedGraph,
    compute_agd,
    compute_density,
    compute_laplacian_eigen,
    compute_lens,
    compute_pagerank,
    histogram,
    normalize_lens,
)
from graphmapper.generators import GeneratorSpec, generate
from graphmapper.lenses import LensField, resolve_lens_kind

from conftest import (
    complete_graph,
    cycle_graph,
    dense_distance_matrix,
    dense_laplacian,
    graph_from_edges,
    pagerank_linear_solve,
    path_graph,
    random_connected_graph,
    star_graph,
)


class TestNormalize:
    def test_affine_map(self):
        assert normalize_lens(np.array([2.0, 4.0, 6.0])).tolist() == [0.0, 0.5, 1.0]

    def test_constant_maps_to_half(self):
        assert normalize_lens(np.array([7.0, 7.0, 7.0])).tolist() == [0.5, 0.5, 0.5]

    def test_identity_on_unit_range(self):
        assert normalize_lens(np.array([0.0, 1.0])).tolist() == [0.0, 1.0]

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError):
            normalize_lens(np.array([0.0, np.nan]))
        with pytest.raises(ValidationError):
            normalize_lens(np.array([0.0, np.inf]))

    def test_constant_flag_set(self):
        field = LensField.from_raw("index", np.array([3.0, 3.0]), {})
        assert field.constant
        field = LensField.from_raw("index", np.array([3.0, 4.0]), {})
        assert not field.constant


class TestHistogram:
    def test_boundary_convention(self):
        # 0.5 and 1.0 both land in the second of two bins
        field = LensField.from_raw("index", np.array([0.0, 2.0, 4.0]), {})
        h = histogram(field, 2)
        assert h.counts.tolist() == [1, 2]

    def test_single_bin(self):
        field = LensField.from_raw("index", np.arange(17, dtype=float), {})
        assert histogram(field, 1).counts.tolist() == [17]

    def test_counts_sum_to_node_count(self, rng):
        field = LensField.from_raw("index", rng.random(500), {})
        h = histogram(field, 13)
        assert h.counts.sum() == 500
        assert h.bin_edges[0] == 0.0 and h.bin_edges[-1] == 1.0
        assert np.all(np.diff(h.bin_edges) > 0)

    def test_uniform_values_spread(self, rng):
        field = LensField.from_raw("index", rng.random(2000), {})
        h = histogram(field, 10)
        # each bin expects 200; allow a generous statistical band
        assert all(120 < c < 280 for c in h.counts)

    def test_bad_bin_count(self):
        field = LensField.from_raw("index", np.array([0.5]), {})
        with pytest.raises(ParameterError):
            histogram(field, 0)


class TestAgd:
    def test_p3_hand_computed(self):
        field = compute_agd(path_graph(3))
        assert np.allclose(field.raw, [1.0, 2.0 / 3.0, 1.0], atol=1e-12)
        assert np.allclose(field.normalized, [1.0, 0.0, 1.0], atol=1e-12)

    def test_k3_constant_by_symmetry(self):
        field = compute_agd(complete_graph(3))
        assert np.allclose(field.raw, 2.0 / 3.0, atol=1e-15)
        assert field.constant

    def test_grid_matches_dense_oracle(self):
        g = generate(GeneratorSpec("grid", {"rows": 4, "cols": 4}))
        field = compute_agd(g)
        expected = dense_distance_matrix(g).mean(axis=1)
        assert np.abs(field.raw - expected).max() <= 1e-12

    def test_weighted_matches_dense_oracle(self, rng):
        g = random_connected_graph(rng, max_nodes=40, weighted=True)
        field = compute_agd(g)
        expected = dense_distance_matrix(g).mean(axis=1)
        assert np.abs(field.raw - expected).max() <= 1e-12

    def test_disconnected_raises_with_hint(self):
        g = graph_from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(DisconnectedGraphError, match="largest component"):
            compute_agd(g)


class TestDensity:
    def test_single_node(self):
        field = compute_density(WeightedGraph(["a"], []), delta=3.0)
        assert field.raw.tolist() == [1.0]

    def test_unit_edge_two_terms(self):
        field = compute_density(path_graph(2), delta=1.0)
        expected = 1.0 + np.exp(-1.0)
        assert np.allclose(field.raw, [expected, expected], atol=1e-15)

    def test_lollipop_matches_dense_oracle(self):
        g = generate(GeneratorSpec("lollipop", {"clique": 8, "path": 6}))
        field = compute_density(g, delta=7.0)
        d = dense_distance_matrix(g)
        expected = np.exp(-(d * d) / 7.0).sum(axis=1)
        assert np.abs(field.raw - expected).max() <= 1e-12

    def test_bad_delta(self):
        with pytest.raises(ParameterError):
            compute_density(path_graph(2), delta=0.0)

    def test_disconnected_raises(self):
        g = graph_from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(DisconnectedGraphError):
            compute_density(g)

    def test_negative_correlation_with_agd(self, rng):
        graphs = [
            generate(GeneratorSpec("lollipop", {"clique": 8, "path": 6})),
            generate(GeneratorSpec("grid", {"rows": 5, "cols": 6})),
            path_graph(20),
            random_connected_graph(rng, max_nodes=60),
        ]
        for g in graphs:
            agd = compute_agd(g).raw
            dens = compute_density(g, delta=2.0).raw
            if np.all(agd == agd[0]) or np.all(dens == dens[0]):
                continue
            corr = np.corrcoef(agd, dens)[0, 1]
            assert corr < 0.0


class TestLaplacianEigen:
    def test_k2_closed_form(self):
        g = WeightedGraph(["a", "b"], [(0, 1, 2.5)])
        field = compute_laplacian_eigen(g, "l2")
        assert abs(field.params["eigenvalue"] - 5.0) <= 1e-8
        assert np.allclose(field.raw, [2**-0.5, -(2**-0.5)], atol=1e-8)

    def test_p3_fiedler_vector(self):
        # dense oracle on the 3x3 Laplacian: eigenvalues 0, 1, 3 and the
        # middle eigenvector (1, 0, -1)/sqrt(2); frozen below
        g = path_graph(3)
        vals = np.linalg.eigvalsh(dense_laplacian(g))
        assert np.allclose(vals, [0.0, 1.0, 3.0], atol=1e-12)
        field = compute_laplacian_eigen(g, "l2")
        assert abs(field.params["eigenvalue"] - 1.0) <= 1e-8
        assert np.allclose(field.raw, [2**-0.5, 0.0, -(2**-0.5)], atol=1e-8)

    def test_c4_degenerate_contract(self):
        g = cycle_graph(4)
        lap = dense_laplacian(g)
        vals = np.linalg.eigvalsh(lap)
        assert np.allclose(vals, [0.0, 2.0, 2.0, 4.0], atol=1e-12)
        for which, expected in (("l2", 2.0), ("l3", 2.0)):
            field = compute_laplacian_eigen(g, which)
            assert abs(field.params["eigenvalue"] - expected) <= 1e-8
            resid = np.linalg.norm(lap @ field.raw - field.params["eigenvalue"] * field.raw)
            assert resid <= 1e-8
            assert abs(np.linalg.norm(field.raw) - 1.0) <= 1e-10

    def test_matches_dense_oracle_on_random_graphs(self, rng):
        for _ in range(8):
            g = random_connected_graph(rng, max_nodes=50, weighted=True)
            lap = dense_laplacian(g)
            vals = np.linalg.eigvalsh(lap)
            for which, idx in (("l2", 1), ("l3", 2)):
                field = compute_laplacian_eigen(g, which)
                assert abs(field.params["eigenvalue"] - vals[idx]) <= 1e-7
                resid = np.linalg.norm(lap @ field.raw - field.params["eigenvalue"] * field.raw)
                assert resid <= 1e-8

    def test_orthogonal_to_constant(self, rng):
        for g in (path_graph(10), cycle_graph(9), random_connected_graph(rng, max_nodes=40)):
            field = compute_laplacian_eigen(g, "l2")
            assert abs(field.raw.sum()) <= 1e-8

    def test_sign_rule(self, rng):
        # the largest-magnitude entry is positive, lowest index on ties
        for _ in range(6):
            g = random_connected_graph(rng, max_nodes=30)
            v = compute_laplacian_eigen(g, "l2").raw
            mags = np.abs(v)
            top = np.nonzero(mags >= mags.max() * (1 - 1e-9))[0][0]
            assert v[top] > 0

    def test_disconnected_names_kernel_dimension(self):
        g = graph_from_edges(6, [(0, 1), (2, 3), (4, 5)])
        with pytest.raises(MultiplicityError, match="3"):
            compute_laplacian_eigen(g, "l2")

    def test_too_small_for_l3(self):
        with pytest.raises(ParameterError):
            compute_laplacian_eigen(path_graph(2), "l3")


class TestPagerank:
    def test_cycle_is_uniform(self):
        for n in (3, 7, 50):
            field = compute_pagerank(cycle_graph(n))
            r = np.exp(field.raw)
            assert np.abs(r - 1.0 / n).max() <= 1e-10

    def test_k2_symmetry(self):
        field = compute_pagerank(path_graph(2))
        assert np.allclose(np.exp(field.raw), [0.5, 0.5], atol=1e-10)

    def test_star_matches_linear_solve(self):
        g = star_graph(3)
        field = compute_pagerank(g, damping=0.85)
        expected = pagerank_linear_solve(g, damping=0.85)
        # frozen from the oracle: center 0.479729..., leaves 0.173423...
        assert np.allclose(expected, [0.47972973, 0.17342342, 0.17342342, 0.17342342], atol=1e-8)
        assert np.abs(np.exp(field.raw) - expected).max() <= 1e-8

    def test_sums_to_one(self, rng):
        for _ in range(5):
            g = random_connected_graph(rng, max_nodes=80)
            field = compute_pagerank(g)
            assert abs(np.exp(field.raw).sum() - 1.0) <= 1e-8
            assert field.params["residual"] <= field.params["tol"]

    def test_isolated_node_rejected(self):
        g = graph_from_edges(3, [(0, 1)])
        with pytest.raises(ValidationError, match="isolated"):
            compute_pagerank(g)

    def test_bad_damping(self):
        with pytest.raises(ParameterError):
            compute_pagerank(path_graph(2), damping=1.0)

    def test_non_convergence_carries_residual(self):
        with pytest.raises(ConvergenceError):
            compute_pagerank(star_graph(5), tol=1e-300, max_iter=3)

    def test_log_transform_preserves_ordering(self, rng):
        g = random_connected_graph(rng, max_nodes=60)
        field = compute_pagerank(g)
        r = np.exp(field.raw)
        assert np.array_equal(np.argsort(r, kind="stable"), np.argsort(field.normalized, kind="stable"))


class TestIsometryInvariance:
    @pytest.mark.parametrize(
        "g",
        [
            cycle_graph(12),
            complete_graph(7),
            generate(GeneratorSpec("torus_mesh", {"rows": 4, "cols": 4})),
        ],
        ids=["cycle", "complete", "torus"],
    )
    def test_constant_on_vertex_transitive_graphs(self, g):
        agd = compute_agd(g).raw
        assert agd.max() - agd.min() <= 1e-12
        dens = compute_density(g, delta=2.0).raw
        assert dens.max() - dens.min() <= 1e-12


class TestPermutationEquivariance:
    def _relabeled(self, g, perm):
        return WeightedGraph(
            [str(i) for i in range(g.n)],
            [(int(perm[u]), int(perm[v]), w) for u, v, w in g.edges],
        )

    def test_distance_lenses_and_pagerank(self, rng):
        g = random_connected_graph(rng, max_nodes=40, weighted=True)
        perm = rng.permutation(g.n)
        h = self._relabeled(g, perm)
        for compute in (compute_agd, lambda x: compute_density(x, 1.5), compute_pagerank):
            a = compute(g).raw
            b = compute(h).raw
            assert np.abs(a - b[perm]).max() <= 1e-9

    def test_laplacian_on_permuted_graph_meets_contract(self, rng):
        g = random_connected_graph(rng, max_nodes=40)
        perm = rng.permutation(g.n)
        h = self._relabeled(g, perm)
        lg = compute_laplacian_eigen(g, "l2")
        lh = compute_laplacian_eigen(h, "l2")
        assert abs(lg.params["eigenvalue"] - lh.params["eigenvalue"]) <= 1e-7
        lap = dense_laplacian(h)
        resid = np.linalg.norm(lap @ lh.raw - lh.params["eigenvalue"] * lh.raw)
        assert resid <= 1e-8


def test_lens_kind_aliases():
    assert resolve_lens_kind("l2") == "laplacian_l2"
    assert resolve_lens_kind("pagerank") == "pagerank_log"
    assert resolve_lens_kind("agd") == "agd"
    with pytest.raises(ParameterError):
        resolve_lens_kind("curvature")


def test_compute_lens_dispatch(rng):
    g = random_connected_graph(rng, max_nodes=20)
    for kind in ("agd", "density", "l2", "l3", "pagerank", "index"):
        field = compute_lens(g, kind)
        assert field.raw.shape == (g.n,)
        assert field.normalized.min() >= 0.0 and field.normalized.max() <= 1.0


def test_distance_lenses_stable_across_thread_counts(rng):
    g = random_connected_graph(rng, max_nodes=150, weighted=True)
    for compute in (compute_agd, lambda gr, threads: compute_density(gr, 2.0, threads=threads)):
        one = compute(g, threads=1).raw
        four = compute(g, threads=4).raw
        assert np.array_equal(one, four)
