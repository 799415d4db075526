"""Per-graph clustering: feature matrix, row normalization, k-means.

Each series is described by how it traverses one transition graph: visit
counts per node, traversal counts per edge, and the node degrees of the
subgraph induced by its own path. Rows are z-scored and clustered with
k-means.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse

from .dataset import Dataset
from .embedding import PatternGraph


@dataclass(frozen=True)
class Partition:
    """Cluster labels for every series; length tags the source graph."""

    labels: np.ndarray
    k: int
    length: int | None = None
    replicate: int = 0

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise ValueError("labels must be a nonempty vector")
        if labels.min() < 0 or labels.max() >= self.k:
            raise ValueError("labels out of range for k")
        labels = labels.copy()
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.labels.size


@dataclass(frozen=True)
class FeatureMatrix:
    """Sparse per-series counts: [node visits | edge traversals | degrees]."""

    counts: sparse.csr_matrix
    length: int
    n_nodes: int
    edge_order: list[tuple[int, int]]

    def column_kind(self, col: int) -> tuple[str, object]:
        if col < self.n_nodes:
            return ("node", col)
        if col < self.n_nodes + len(self.edge_order):
            return ("edge", self.edge_order[col - self.n_nodes])
        return ("degree", col - self.n_nodes - len(self.edge_order))

    def dense(self) -> np.ndarray:
        return self.counts.toarray().astype(np.float64)


def extract_features(dataset: Dataset, graph: PatternGraph) -> FeatureMatrix:
    """Count node visits, edge traversals and induced-subgraph degrees.

    The degree feature is the total (in plus out) degree of the node in
    the distinct-edge subgraph traced by the series; a self-loop adds 2.
    """
    if len(graph.paths) != len(dataset):
        raise ValueError("graph was not built over this dataset")
    n_nodes = graph.n_nodes()
    edge_order = graph.edge_list()
    # Dense lookup from encoded pair (src * n_nodes + dst) to edge column.
    edge_col_of_code = np.full(n_nodes * n_nodes, -1, dtype=np.int64)
    for j, (a, b) in enumerate(edge_order):
        edge_col_of_code[a * n_nodes + b] = j
    degree_base = n_nodes + len(edge_order)
    n_cols = degree_base + n_nodes

    row_chunks, col_chunks, val_chunks = [], [], []
    for i, path in enumerate(graph.paths):
        node_counts = np.bincount(path, minlength=n_nodes)
        visited = np.flatnonzero(node_counts)

        codes = path[:-1] * n_nodes + path[1:]
        uniq_codes, pair_counts = np.unique(codes, return_counts=True)
        srcs, dsts = uniq_codes // n_nodes, uniq_codes % n_nodes
        degrees = np.bincount(srcs, minlength=n_nodes) + np.bincount(dsts, minlength=n_nodes)
        with_degree = np.flatnonzero(degrees)

        cols = np.concatenate(
            [visited, n_nodes + edge_col_of_code[uniq_codes], degree_base + with_degree]
        )
        vals = np.concatenate([node_counts[visited], pair_counts, degrees[with_degree]])
        row_chunks.append(np.full(cols.size, i, dtype=np.int64))
        col_chunks.append(cols)
        val_chunks.append(vals)

    counts = sparse.csr_matrix(
        (
            np.concatenate(val_chunks),
            (np.concatenate(row_chunks), np.concatenate(col_chunks)),
        ),
        shape=(len(dataset), n_cols),
        dtype=np.int64,
    )
    return FeatureMatrix(counts=counts, length=graph.length, n_nodes=n_nodes, edge_order=edge_order)


def normalize_rows(features: FeatureMatrix | np.ndarray) -> np.ndarray:
    """Z-score each row; zero-variance rows become all-zero rows."""
    raw = features.dense() if isinstance(features, FeatureMatrix) else np.asarray(features, dtype=np.float64)
    if raw.size == 0:
        raise ValueError("empty feature matrix")
    means = raw.mean(axis=1, keepdims=True)
    stds = raw.std(axis=1, keepdims=True)
    out = np.zeros_like(raw, dtype=np.float64)
    ok = stds[:, 0] > 0
    out[ok] = (raw[ok] - means[ok]) / stds[ok]
    return out


def _plus_plus_init(X: np.ndarray, x_sq: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[int(rng.integers(n))]
    d2 = np.maximum(x_sq - 2.0 * X @ centers[0] + centers[0] @ centers[0], 0.0)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[j] = X[idx]
        d2 = np.minimum(d2, np.maximum(x_sq - 2.0 * X @ centers[j] + centers[j] @ centers[j], 0.0))
    return centers


def _sq_distances(X: np.ndarray, x_sq: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # |x - c|^2 expanded; clip tiny negatives from cancellation
    d2 = x_sq[:, None] - 2.0 * X @ centers.T + (centers * centers).sum(axis=1)[None, :]
    return np.maximum(d2, 0.0)


def _lloyd(
    X: np.ndarray, x_sq: np.ndarray, k: int, rng: np.random.Generator, max_iter: int
) -> tuple[np.ndarray, float]:
    centers = _plus_plus_init(X, x_sq, k, rng)
    labels = _sq_distances(X, x_sq, centers).argmin(axis=1)
    for _ in range(max_iter):
        for j in range(k):
            members = labels == j
            if np.any(members):
                centers[j] = X[members].mean(axis=0)
            else:
                # Refill an empty cluster with the point farthest from its
                # current centroid.
                far = _sq_distances(X, x_sq, centers)[np.arange(len(X)), labels].argmax()
                centers[j] = X[far]
                labels[far] = j
        new_labels = _sq_distances(X, x_sq, centers).argmin(axis=1)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    inertia = float(_sq_distances(X, x_sq, centers)[np.arange(len(X)), labels].sum())
    return labels, inertia


def kmeans(
    X: np.ndarray,
    k: int,
    rng_seed: int,
    n_init: int = 10,
    max_iter: int = 300,
) -> Partition:
    """Lloyd's algorithm with k-means++ starts; best of ``n_init`` restarts.

    Converges when assignments stop changing; fully deterministic for a
    given seed.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be 2-D")
    if not 1 <= k <= X.shape[0]:
        raise ValueError(f"k={k} outside [1, {X.shape[0]}]")
    rng = np.random.default_rng(rng_seed)
    x_sq = (X * X).sum(axis=1)
    best_labels, best_inertia = None, np.inf
    for _ in range(n_init):
        labels, inertia = _lloyd(X, x_sq, k, rng, max_iter)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return Partition(labels=best_labels, k=k)


def cluster_graph(dataset: Dataset, graph: PatternGraph, k: int, rng_seed: int) -> Partition:
    """Features -> row normalization -> k-means, tagged with the length."""
    features = extract_features(dataset, graph)
    X = normalize_rows(features)
    partition = kmeans(X, k, rng_seed)
    return Partition(labels=partition.labels, k=k, length=graph.length)
