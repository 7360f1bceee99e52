import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    max_modularity_reference,
    min_ncut_two_way_reference,
    min_wcss_reference,
    modularity_reference,
    silhouette_reference,
)
from stratix import (
    Partition,
    ValidationError,
    community_detect,
    heatmap_order,
    kmeans,
    modularity,
    silhouette,
    similarity_matrix,
    sparsify,
    spectral,
)
from stratix.cluster import partition_sidecar, partition_to_csv
from stratix.graph import SimilarityGraph
from test_graph import view_from_points


def two_blob_points(seed=0, spread=0.1):
    rng = np.random.default_rng(seed)
    low = rng.uniform(-spread, spread, size=(3, 2))
    high = rng.uniform(-spread, spread, size=(3, 2)) + 10.0
    return np.vstack([low, high])


def graph_from_edges(n, edges, weight=1.0):
    ids = tuple(f"s{i}" for i in range(n))
    edge_list = tuple((i, j, float(weight)) for i, j in sorted(edges))
    return SimilarityGraph(sample_ids=ids, edges=edge_list, threshold=0.0,
                           metric="euclidean")


def weights_from_graph(graph):
    n = len(graph.sample_ids)
    w = [[0.0] * n for _ in range(n)]
    for i, j, weight in graph.edges:
        w[i][j] = weight
        w[j][i] = weight
    return w


class TestKmeans:
    def test_k1_single_cluster_total_ss(self):
        points = np.array([[0.0, 0.0], [2.0, 0.0], [4.0, 6.0]])
        part = kmeans(view_from_points(points), 1, seed=0)
        assert part.k == 1
        centroid = points.mean(axis=0)
        expected = float(((points - centroid) ** 2).sum())
        assert part.wcss == pytest.approx(expected, rel=1e-12)

    def test_k_equals_n_zero_wcss(self):
        points = np.array([[0.0], [1.0], [2.0], [5.0]])
        part = kmeans(view_from_points(points), 4, seed=3)
        assert part.k == 4
        assert sorted(part.labels.tolist()) == [0, 1, 2, 3]
        assert part.wcss == pytest.approx(0.0, abs=1e-12)

    def test_two_blobs_match_exhaustive_minimum(self):
        points = two_blob_points(seed=1)
        part = kmeans(view_from_points(points), 2, seed=11)
        assert len(set(part.labels[:3].tolist())) == 1
        assert len(set(part.labels[3:].tolist())) == 1
        best = min_wcss_reference(points.tolist(), 2)
        assert part.wcss == pytest.approx(best, rel=1e-10)

    def test_deterministic_given_seed(self):
        points = np.random.default_rng(8).normal(size=(12, 3))
        view = view_from_points(points)
        p1 = kmeans(view, 3, seed=21)
        p2 = kmeans(view, 3, seed=21)
        assert np.array_equal(p1.labels, p2.labels)
        assert p1.wcss == p2.wcss

    def test_k_out_of_range(self):
        view = view_from_points([[0.0], [1.0]])
        with pytest.raises(ValidationError):
            kmeans(view, 0, seed=0)
        with pytest.raises(ValidationError):
            kmeans(view, 3, seed=0)

    def test_fewer_distinct_points_than_k(self):
        view = view_from_points([[1.0], [1.0], [2.0]])
        with pytest.raises(ValidationError, match="distinct"):
            kmeans(view, 3, seed=0)

    def test_labels_surjective_onto_k(self):
        rng = np.random.default_rng(17)
        view = view_from_points(rng.normal(size=(20, 4)))
        for k in (2, 3, 5):
            part = kmeans(view, k, seed=2)
            assert set(part.labels.tolist()) == set(range(k))


class TestSpectral:
    def test_two_disconnected_components_recovered(self):
        # two far-apart blobs; threshold cuts every cross edge
        points = two_blob_points(seed=2)
        view = view_from_points(points)
        part = spectral(view, 2, "euclidean", seed=5, threshold=0.2)
        assert len({part.labels[i] for i in range(3)}) == 1
        assert len({part.labels[i] for i in range(3, 6)}) == 1
        assert part.labels[0] != part.labels[3]

    def test_k_equals_n_distinct_rows(self):
        points = np.array([[0.0, 0.0], [5.0, 0.0], [0.0, 5.0], [5.0, 5.0]])
        part = spectral(view_from_points(points), 4, "euclidean", seed=1)
        assert part.k == 4
        assert sorted(part.labels.tolist()) == [0, 1, 2, 3]

    def test_blobs_match_min_normalized_cut(self):
        points = two_blob_points(seed=3)
        view = view_from_points(points)
        part = spectral(view, 2, "euclidean", seed=9)
        sims = similarity_matrix(view, "euclidean")
        weights = sims.values.copy()
        np.fill_diagonal(weights, 0.0)
        _, best_side = min_ncut_two_way_reference(weights.tolist())
        side = frozenset(np.flatnonzero(part.labels == part.labels[0]).tolist())
        other = frozenset(range(6)) - side
        assert side == best_side or other == best_side

    def test_k_out_of_range(self):
        view = view_from_points([[0.0], [1.0], [2.0]])
        with pytest.raises(ValidationError):
            spectral(view, 1, "euclidean", seed=0)

    def test_deterministic(self):
        rng = np.random.default_rng(6)
        view = view_from_points(rng.normal(size=(10, 3)))
        p1 = spectral(view, 3, "pearson", seed=4)
        p2 = spectral(view, 3, "pearson", seed=4)
        assert np.array_equal(p1.labels, p2.labels)


class TestCommunity:
    def test_two_cliques_with_bridge(self):
        clique1 = [(i, j) for i in range(4) for j in range(i + 1, 4)]
        clique2 = [(i, j) for i in range(4, 8) for j in range(i + 1, 8)]
        graph = graph_from_edges(8, clique1 + clique2 + [(0, 4)])
        part = community_detect(graph, seed=0)
        assert part.k == 2
        assert len({part.labels[i] for i in range(4)}) == 1
        assert len({part.labels[i] for i in range(4, 8)}) == 1
        got = modularity(graph, part.labels)
        best = max_modularity_reference(weights_from_graph(graph))
        assert got == pytest.approx(best, abs=1e-12)

    def test_complete_graph_single_community(self):
        edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
        part = community_detect(graph_from_edges(5, edges), seed=3)
        assert part.k == 1

    def test_isolated_vertex_is_singleton(self):
        graph = graph_from_edges(5, [(0, 1), (2, 3)])
        part = community_detect(graph, seed=1)
        assert part.k == 3
        assert part.labels[0] == part.labels[1]
        assert part.labels[2] == part.labels[3]
        assert part.labels[4] not in (part.labels[0], part.labels[2])

    def test_edgeless_graph_errors(self):
        graph = graph_from_edges(4, [])
        with pytest.raises(ValidationError, match="edge"):
            community_detect(graph, seed=0)

    def test_modularity_matches_definition(self):
        rng = np.random.default_rng(2)
        n = 7
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)
                 if rng.random() < 0.5]
        if not edges:
            edges = [(0, 1)]
        graph = graph_from_edges(n, edges)
        labels = rng.integers(0, 3, size=n)
        got = modularity(graph, labels)
        want = modularity_reference(weights_from_graph(graph), labels.tolist())
        assert got == pytest.approx(want, abs=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 100_000))
    def test_matches_bruteforce_on_small_graphs(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 8))
        edges = []
        weights = {}
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.45:
                    w = float(rng.uniform(0.2, 2.0))
                    edges.append((i, j))
                    weights[(i, j)] = w
        if not edges:
            edges = [(0, 1)]
            weights[(0, 1)] = 1.0
        ids = tuple(f"s{i}" for i in range(n))
        graph = SimilarityGraph(
            sample_ids=ids,
            edges=tuple((i, j, weights[(i, j)]) for i, j in sorted(edges)),
            threshold=0.0, metric="euclidean",
        )
        part = community_detect(graph, seed=seed)
        got = modularity(graph, part.labels)
        best = max_modularity_reference(weights_from_graph(graph))
        assert got == pytest.approx(best, abs=1e-9)


class TestSilhouette:
    def test_two_singletons_are_zero(self):
        view = view_from_points([[0.0], [5.0]])
        part = Partition(modality_name="a", sample_ids=view.sample_ids,
                         labels=np.array([0, 1]), k=2, method="kmeans",
                         params={})
        report = silhouette(view, part)
        assert report.values.tolist() == [0.0, 0.0]

    def test_identical_points_zero_over_zero_rule(self):
        view = view_from_points([[1.0], [1.0], [1.0], [1.0]])
        part = Partition(modality_name="a", sample_ids=view.sample_ids,
                         labels=np.array([0, 0, 1, 1]), k=2, method="kmeans",
                         params={})
        report = silhouette(view, part)
        assert report.values.tolist() == [0.0] * 4

    def test_hand_example_squared_distance(self):
        view = view_from_points([[0.0], [1.0], [10.0], [11.0]])
        part = Partition(modality_name="a", sample_ids=view.sample_ids,
                         labels=np.array([0, 0, 1, 1]), k=2, method="kmeans",
                         params={})
        report = silhouette(view, part)
        # a(0)=1, b(0)=(100+121)/2=110.5, s=1-1/110.5
        assert report.values[0] == pytest.approx(1 - 1 / 110.5, abs=1e-12)

    def test_k1_errors(self):
        view = view_from_points([[0.0], [1.0]])
        part = Partition(modality_name="a", sample_ids=view.sample_ids,
                         labels=np.array([0, 0]), k=1, method="kmeans",
                         params={})
        with pytest.raises(ValidationError, match="k >= 2"):
            silhouette(view, part)

    def test_matches_reference_on_random_instances(self):
        rng = np.random.default_rng(12)
        for _ in range(30):
            n = int(rng.integers(4, 41))
            k = int(rng.integers(2, 6))
            dims = int(rng.integers(1, 9))
            points = rng.normal(size=(n, dims))
            labels = rng.integers(0, k, size=n)
            for c in range(k):  # guarantee non-empty clusters
                labels[c % n] = c
            view = view_from_points(points)
            part = Partition(modality_name="a", sample_ids=view.sample_ids,
                             labels=labels, k=k, method="kmeans", params={})
            got = silhouette(view, part).values
            want = silhouette_reference(points.tolist(), labels.tolist())
            assert np.max(np.abs(got - np.array(want))) <= 1e-12

    def test_report_orders_descending_within_cluster(self):
        rng = np.random.default_rng(13)
        points = rng.normal(size=(15, 3))
        view = view_from_points(points)
        part = kmeans(view, 3, seed=1)
        report = silhouette(view, part)
        for c, member_order in enumerate(report.cluster_order):
            values = [report.values[i] for i in member_order]
            assert values == sorted(values, reverse=True)
            assert {int(part.labels[i]) for i in member_order} == {c}
        assert report.mean == pytest.approx(float(report.values.mean()))

    def test_values_within_unit_interval(self):
        rng = np.random.default_rng(14)
        view = view_from_points(rng.normal(size=(25, 4)))
        part = kmeans(view, 4, seed=3)
        report = silhouette(view, part)
        assert np.all(report.values >= -1.0) and np.all(report.values <= 1.0)


class TestHeatmapOrder:
    def test_k1_orders_by_distance_to_global_mean(self):
        points = np.array([[5.0], [0.0], [3.0]])
        view = view_from_points(points)
        part = Partition(modality_name="a", sample_ids=view.sample_ids,
                         labels=np.array([0, 0, 0]), k=1, method="kmeans",
                         params={})
        layout = heatmap_order(view, part)
        mean = points.mean()
        dists = np.abs(points.ravel() - mean)
        expected = sorted(range(3), key=lambda i: (dists[i], view.sample_ids[i]))
        assert list(layout.column_order) == expected
        assert layout.blocks == ((0, 0, 3),)

    def test_ties_resolved_by_sample_id(self):
        points = np.array([[1.0], [1.0], [4.0], [4.0]])
        view = view_from_points(points)
        part = Partition(modality_name="a", sample_ids=view.sample_ids,
                         labels=np.array([0, 0, 1, 1]), k=2, method="kmeans",
                         params={})
        layout = heatmap_order(view, part)
        assert list(layout.column_order) == [0, 1, 2, 3]

    def test_two_blobs_block_extents(self):
        points = two_blob_points(seed=4)
        view = view_from_points(points)
        part = kmeans(view, 2, seed=7)
        layout = heatmap_order(view, part)
        assert [b[1] for b in layout.blocks] == [0, 3]
        assert [b[2] for b in layout.blocks] == [3, 3]
        for cluster, start, size in layout.blocks:
            block_members = layout.column_order[start:start + size]
            assert {int(part.labels[i]) for i in block_members} == {cluster}

    def test_column_order_is_permutation(self):
        rng = np.random.default_rng(15)
        view = view_from_points(rng.normal(size=(18, 2)))
        part = kmeans(view, 4, seed=9)
        layout = heatmap_order(view, part)
        assert sorted(layout.column_order) == list(range(18))
        assert sum(b[2] for b in layout.blocks) == 18


class TestPartitionSerialization:
    def test_csv_and_sidecar(self):
        view = view_from_points([[0.0], [0.1], [9.0], [9.1]])
        part = kmeans(view, 2, seed=1)
        text = partition_to_csv(part)
        lines = text.strip().split("\n")
        assert lines[0] == "sample_id,label"
        assert len(lines) == 5
        sidecar = partition_sidecar(part)
        assert sidecar["method"] == "kmeans"
        assert sidecar["k"] == 2
        assert sidecar["params"]["seed"] == 1
        assert sum(sidecar["cluster_sizes"]) == 4

    def test_partition_validates_empty_cluster(self):
        with pytest.raises(ValidationError):
            Partition(modality_name="a", sample_ids=("s0", "s1"),
                      labels=np.array([0, 0]), k=2, method="kmeans", params={})


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), k=st.integers(1, 5))
def test_kmeans_wcss_matches_label_recomputation(seed, k):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(max(k, 2), 15))
    points = rng.normal(size=(n, 2))
    view = view_from_points(points)
    try:
        part = kmeans(view, k, seed=seed)
    except ValidationError:
        return  # fewer distinct points than k
    total = 0.0
    for c in range(k):
        members = points[part.labels == c]
        centroid = members.mean(axis=0)
        total += float(((members - centroid) ** 2).sum())
    assert part.wcss == pytest.approx(total, rel=1e-9, abs=1e-12)
