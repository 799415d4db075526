import numpy as np
import pytest

from seqgraph.embedding import PatternGraph, PatternNode, ShapeProjection, build_graph
from seqgraph.graph_clustering import (
    FeatureMatrix,
    Partition,
    cluster_graph,
    extract_features,
    kmeans,
    normalize_rows,
)

from conftest import make_dataset


def graph_from_paths(paths, length=5):
    """Minimal PatternGraph for feature tests; prototypes are dummies."""
    paths = [np.asarray(p, dtype=np.int64) for p in paths]
    n_nodes = int(max(p.max() for p in paths)) + 1
    edges = {}
    for p in paths:
        for a, b in zip(p[:-1], p[1:]):
            edges[(int(a), int(b))] = edges.get((int(a), int(b)), 0) + 1
    nodes = [
        PatternNode(id=i, angular_bin=0, radius=float(i + 1), prototype=np.zeros(length), member_count=1)
        for i in range(n_nodes)
    ]
    total = sum(p.size for p in paths)
    projection = ShapeProjection(
        length=length,
        points2d=np.zeros((total, 2)),
        series_bounds=np.concatenate([[0], np.cumsum([p.size for p in paths])]),
        sample_indices=np.arange(total),
        components=np.eye(3, length),
        mean=np.zeros(length),
        rotation=np.eye(3),
    )
    return PatternGraph(length=length, nodes=nodes, edges=edges, paths=paths, projection=projection)


def dataset_for_paths(paths, length=5):
    rows = [np.arange(float(len(p) + length - 1)) for p in paths]
    return make_dataset(rows)


def brute_force_features(graph):
    """Independent recount straight from the definitions."""
    n_nodes = graph.n_nodes()
    edge_order = graph.edge_list()
    columns = {}
    for i, path in enumerate(graph.paths):
        row = {}
        for node in range(n_nodes):
            count = sum(1 for v in path if v == node)
            if count:
                row[("node", node)] = count
        for edge in edge_order:
            count = sum(
                1 for a, b in zip(path[:-1], path[1:]) if (int(a), int(b)) == edge
            )
            if count:
                row[("edge", edge)] = count
        distinct = {(int(a), int(b)) for a, b in zip(path[:-1], path[1:])}
        for node in range(n_nodes):
            degree = sum(1 for a, b in distinct if a == node) + sum(
                1 for a, b in distinct if b == node
            )
            if degree:
                row[("degree", node)] = degree
        columns[i] = row
    return columns


def as_column_dict(features: FeatureMatrix):
    dense = features.dense()
    out = {}
    for i in range(dense.shape[0]):
        row = {}
        for col in np.flatnonzero(dense[i]):
            row[features.column_kind(int(col))] = int(dense[i, col])
        out[i] = row
    return out


class TestExtractFeatures:
    def test_hand_counted_example(self):
        graph = graph_from_paths([[0, 0, 1], [0]])
        ds = dataset_for_paths([[0, 0, 1], [0]])
        feats = as_column_dict(extract_features(ds, graph))[0]
        assert feats[("node", 0)] == 2
        assert feats[("node", 1)] == 1
        assert feats[("edge", (0, 0))] == 1
        assert feats[("edge", (0, 1))] == 1
        # induced subgraph has edges {(0,0),(0,1)}: deg(0) = 2 + 1, deg(1) = 1
        assert feats[("degree", 0)] == 3
        assert feats[("degree", 1)] == 1

    def test_simple_chain_degrees(self):
        graph = graph_from_paths([[0, 1, 2], [0]])
        ds = dataset_for_paths([[0, 1, 2], [0]])
        feats = as_column_dict(extract_features(ds, graph))[0]
        assert feats[("degree", 0)] == 1
        assert feats[("degree", 1)] == 2
        assert feats[("degree", 2)] == 1

    def test_absent_node_is_zero(self):
        graph = graph_from_paths([[0, 1], [2, 2]])
        ds = dataset_for_paths([[0, 1], [2, 2]])
        rows = as_column_dict(extract_features(ds, graph))
        assert ("node", 2) not in rows[0]
        assert ("degree", 2) not in rows[0]
        assert rows[1][("node", 2)] == 2

    def test_random_paths_match_brute_force(self):
        rng = np.random.default_rng(0)
        for trial in range(50):
            n_series = int(rng.integers(2, 6))
            n_nodes = int(rng.integers(2, 7))
            paths = [
                rng.integers(0, n_nodes, size=int(rng.integers(1, 15)))
                for _ in range(n_series)
            ]
            # make sure every node id appears so the graph covers them
            paths[0] = np.concatenate([paths[0], np.arange(n_nodes)])
            graph = graph_from_paths(paths)
            ds = dataset_for_paths(paths)
            assert as_column_dict(extract_features(ds, graph)) == brute_force_features(graph)

    def test_built_graph_column_sums(self, two_family_dataset):
        graph = build_graph(two_family_dataset, 8, smpl=3, rng_seed=2)
        features = extract_features(two_family_dataset, graph)
        dense = features.dense()
        # node columns sum to total path occurrences
        for node in range(graph.n_nodes()):
            occurrences = sum(int((p == node).sum()) for p in graph.paths)
            assert dense[:, node].sum() == occurrences
        # edge columns sum to the graph's edge weights
        for j, edge in enumerate(features.edge_order):
            assert dense[:, graph.n_nodes() + j].sum() == graph.edges[edge]

    def test_raw_counts_nonnegative_integers(self, two_family_dataset):
        graph = build_graph(two_family_dataset, 8, smpl=3, rng_seed=2)
        counts = extract_features(two_family_dataset, graph).counts
        assert counts.dtype == np.int64
        assert (counts.data >= 0).all()


class TestNormalizeRows:
    def test_textbook_row(self):
        out = normalize_rows(np.array([[1.0, 2.0, 3.0]]))
        np.testing.assert_allclose(out[0], [-1.22474487, 0.0, 1.22474487])

    def test_constant_row_zeroed(self):
        out = normalize_rows(np.array([[5.0, 5.0, 5.0]]))
        np.testing.assert_array_equal(out[0], [0.0, 0.0, 0.0])
        assert not np.any(np.isnan(out))

    def test_means_are_zero(self):
        rng = np.random.default_rng(1)
        X = rng.integers(0, 10, (20, 15)).astype(float)
        out = normalize_rows(X)
        np.testing.assert_allclose(out.mean(axis=1), 0.0, atol=1e-10)

    def test_idempotent_on_normalized_rows(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(10, 8))
        once = normalize_rows(X)
        twice = normalize_rows(once)
        np.testing.assert_allclose(once, twice, atol=1e-10)

    def test_raw_matrix_untouched(self, two_family_dataset):
        graph = build_graph(two_family_dataset, 8, smpl=3, rng_seed=2)
        features = extract_features(two_family_dataset, graph)
        before = features.counts.toarray().copy()
        normalize_rows(features)
        np.testing.assert_array_equal(features.counts.toarray(), before)


class TestKMeans:
    def test_two_blobs_exact(self):
        rng = np.random.default_rng(3)
        X = np.vstack(
            [rng.normal(0, 0.1, (20, 2)), rng.normal(10, 0.1, (20, 2))]
        )
        part = kmeans(X, 2, rng_seed=0)
        # brute-force nearest-centroid check against the construction
        first, second = set(part.labels[:20]), set(part.labels[20:])
        assert len(first) == 1 and len(second) == 1 and first != second

    def test_k_equals_one(self):
        X = np.random.default_rng(4).normal(size=(15, 3))
        part = kmeans(X, 1, rng_seed=0)
        assert set(part.labels.tolist()) == {0}

    def test_duplicate_rows_share_label(self):
        rng = np.random.default_rng(5)
        base = rng.normal(size=(8, 4))
        X = np.vstack([base, base[3]])
        part = kmeans(X, 3, rng_seed=1)
        assert part.labels[3] == part.labels[-1]

    def test_k_larger_than_rows(self):
        with pytest.raises(ValueError):
            kmeans(np.zeros((3, 2)), 4, rng_seed=0)

    def test_deterministic(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(40, 5))
        a = kmeans(X, 4, rng_seed=9)
        b = kmeans(X, 4, rng_seed=9)
        np.testing.assert_array_equal(a.labels, b.labels)

    def test_labels_are_argmin_fixed_point(self):
        # no single reassignment can lower inertia
        rng = np.random.default_rng(7)
        X = rng.normal(size=(60, 4))
        part = kmeans(X, 5, rng_seed=2)
        centers = np.vstack([X[part.labels == j].mean(axis=0) for j in range(5)])
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        np.testing.assert_array_equal(d2.argmin(axis=1), part.labels)

    def test_k_equals_n(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(6, 2))
        part = kmeans(X, 6, rng_seed=0)
        assert len(set(part.labels.tolist())) == 6  # inertia 0 attainable


class TestClusterGraph:
    def test_disjoint_families_perfect_partition(self, two_family_dataset):
        graph = build_graph(two_family_dataset, 10, smpl=3, rng_seed=5)
        part = cluster_graph(two_family_dataset, graph, 2, rng_seed=0)
        assert part.length == 10
        truth = two_family_dataset.labels
        # same label within family, different across
        assert len(set(part.labels[truth == 0].tolist())) == 1
        assert len(set(part.labels[truth == 1].tolist())) == 1
        assert part.labels[0] != part.labels[-1]

    def test_determinism(self, two_family_dataset):
        graph = build_graph(two_family_dataset, 10, smpl=3, rng_seed=5)
        a = cluster_graph(two_family_dataset, graph, 2, rng_seed=3)
        b = cluster_graph(two_family_dataset, graph, 2, rng_seed=3)
        np.testing.assert_array_equal(a.labels, b.labels)


class TestPartition:
    def test_label_range_checked(self):
        with pytest.raises(ValueError):
            Partition(labels=np.array([0, 1, 2]), k=2)

    def test_immutable(self):
        part = Partition(labels=np.array([0, 1]), k=2)
        with pytest.raises(ValueError):
            part.labels[0] = 1
