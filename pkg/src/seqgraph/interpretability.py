"""Cluster interpretation over a transition graph.

For a clustering partition, every node (and edge) gets a representativity
(fraction of the cluster's series that visit it) and an exclusivity
(fraction of its visitors that belong to the cluster). These stats feed
graphoids, the per-length quality scores, the selected length and the
per-cluster exemplar patterns.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import PatternGraph
from .graph_clustering import Partition
from .metrics import adjusted_rand_index


@dataclass(frozen=True)
class NodeClusterStats:
    """Representativity/exclusivity tables for nodes and edges.

    Arrays are indexed [cluster, node] (edges via ``edge_keys`` order).
    Membership is set-based: a series visiting a node ten times counts
    once. Exclusivity of a never-visited element is 0 by convention.
    """

    representativity: np.ndarray
    exclusivity: np.ndarray
    node_visitors: np.ndarray
    edge_keys: list[tuple[int, int]]
    edge_representativity: np.ndarray
    edge_exclusivity: np.ndarray
    edge_visitors: np.ndarray
    cluster_sizes: np.ndarray

    @property
    def k(self) -> int:
        return self.representativity.shape[0]


def _visit_matrix(n_entities: int, per_series_sets: list[np.ndarray], n_series: int) -> np.ndarray:
    visits = np.zeros((n_series, n_entities), dtype=bool)
    for i, idx in enumerate(per_series_sets):
        visits[i, idx] = True
    return visits


def node_stats(graph: PatternGraph, partition: Partition) -> NodeClusterStats:
    """Per-cluster representativity and exclusivity for nodes and edges."""
    n_series = len(graph.paths)
    if len(partition) != n_series:
        raise ValueError("partition does not cover the graph's dataset")
    sizes = np.bincount(partition.labels, minlength=partition.k)
    if np.any(sizes == 0):
        raise ValueError("every cluster must be nonempty")

    n_nodes = graph.n_nodes()
    node_sets = [np.unique(p) for p in graph.paths]
    edge_keys = graph.edge_list()
    # Sorted-by-(src, dst) keys encode to sorted integer codes, so a
    # searchsorted maps each series' unique pair codes to edge indices.
    edge_codes = np.array([a * n_nodes + b for a, b in edge_keys], dtype=np.int64)
    edge_sets = []
    for p in graph.paths:
        uniq = np.unique(p[:-1] * n_nodes + p[1:])
        edge_sets.append(np.searchsorted(edge_codes, uniq))

    node_visits = _visit_matrix(graph.n_nodes(), node_sets, n_series)
    edge_visits = _visit_matrix(len(edge_keys), edge_sets, n_series)

    def tables(visits: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        per_cluster = np.zeros((partition.k, visits.shape[1]), dtype=np.float64)
        for c in range(partition.k):
            per_cluster[c] = visits[partition.labels == c].sum(axis=0)
        visitors = visits.sum(axis=0).astype(np.float64)
        rep = per_cluster / sizes[:, None]
        exc = np.divide(
            per_cluster, visitors[None, :], out=np.zeros_like(per_cluster), where=visitors > 0
        )
        return rep, exc, visitors

    node_rep, node_exc, node_vis = tables(node_visits)
    edge_rep, edge_exc, edge_vis = tables(edge_visits)
    return NodeClusterStats(
        representativity=node_rep,
        exclusivity=node_exc,
        node_visitors=node_vis,
        edge_keys=edge_keys,
        edge_representativity=edge_rep,
        edge_exclusivity=edge_exc,
        edge_visitors=edge_vis,
        cluster_sizes=sizes,
    )


def graphoid(graph: PatternGraph, partition: Partition, cluster: int) -> tuple[set[int], set[tuple[int, int]]]:
    """Union of the paths of the cluster's members: visited nodes and edges."""
    if not 0 <= cluster < partition.k:
        raise ValueError("cluster index out of range")
    nodes: set[int] = set()
    edges: set[tuple[int, int]] = set()
    for i in np.flatnonzero(partition.labels == cluster):
        path = graph.paths[i]
        nodes.update(int(v) for v in np.unique(path))
        edges.update((int(a), int(b)) for a, b in zip(path[:-1], path[1:]))
    return nodes, edges


def _thresholded(stats: NodeClusterStats, cluster: int, table: str, threshold: float):
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    node_table = getattr(stats, table)
    edge_table = getattr(stats, "edge_" + table)
    nodes = {
        int(j)
        for j in np.flatnonzero((stats.node_visitors > 0) & (node_table[cluster] >= threshold))
    }
    edges = {
        stats.edge_keys[int(j)]
        for j in np.flatnonzero((stats.edge_visitors > 0) & (edge_table[cluster] >= threshold))
    }
    return nodes, edges


def lambda_graphoid(stats: NodeClusterStats, cluster: int, lam: float):
    """Visited elements whose exclusivity for the cluster is >= lambda."""
    return _thresholded(stats, cluster, "exclusivity", lam)


def gamma_graphoid(stats: NodeClusterStats, cluster: int, gamma: float):
    """Visited elements whose representativity for the cluster is >= gamma."""
    return _thresholded(stats, cluster, "representativity", gamma)


def consistency(final: Partition, per_length: Partition) -> float:
    """Agreement (ARI) between the final labels and one graph's labels."""
    if len(final) != len(per_length):
        raise ValueError("partitions cover different numbers of series")
    return adjusted_rand_index(final.labels, per_length.labels)


def interpretability_factor(stats: NodeClusterStats) -> float:
    """Mean over clusters of the best node exclusivity."""
    if not np.any(stats.node_visitors > 0):
        raise ValueError("graph has no visited nodes")
    return float(stats.exclusivity.max(axis=1).mean())


@dataclass(frozen=True)
class LengthScore:
    """Per-graph quality: consistency with final labels and best-case
    exclusivity, whose product drives length selection."""

    length: int
    replicate: int
    w_c: float
    w_e: float

    @property
    def score(self) -> float:
        return max(self.w_c, 0.0) * self.w_e


def select_length(scores: list[LengthScore]) -> LengthScore:
    """Entry maximizing W_e * max(W_c, 0); ties go to the smaller length."""
    if not scores:
        raise ValueError("no per-length scores")
    return min(scores, key=lambda s: (-s.score, s.length, s.replicate))


@dataclass(frozen=True)
class ExemplarNode:
    """The node that best tells one cluster apart, plus its pattern."""

    cluster: int
    node_id: int
    representativity: float
    exclusivity: float
    centroid: np.ndarray


def exemplar_nodes(graph: PatternGraph, stats: NodeClusterStats) -> list[ExemplarNode]:
    """Per cluster, the node maximizing representativity * exclusivity.

    Ties break toward the lowest node id; the centroid is the mean of
    every subsequence assigned to the node (its prototype).
    """
    out = []
    for c in range(stats.k):
        product = stats.representativity[c] * stats.exclusivity[c]
        node_id = int(product.argmax())
        out.append(
            ExemplarNode(
                cluster=c,
                node_id=node_id,
                representativity=float(stats.representativity[c, node_id]),
                exclusivity=float(stats.exclusivity[c, node_id]),
                centroid=graph.nodes[node_id].prototype.copy(),
            )
        )
    return out


@dataclass(frozen=True)
class GraphoidReport:
    """Everything the interpretation stage produces, JSON-serializable."""

    selected_length: int
    selected_replicate: int
    scores: list[LengthScore]
    exemplars: list[ExemplarNode]
    lambda_threshold: float | None = None
    gamma_threshold: float | None = None
    lambda_graphoids: list[dict] | None = None
    gamma_graphoids: list[dict] | None = None
    metrics: dict | None = None

    def to_dict(self) -> dict:
        payload: dict = {
            "selected_length": self.selected_length,
            "selected_replicate": self.selected_replicate,
            "per_length": [
                {
                    "length": s.length,
                    "replicate": s.replicate,
                    "w_c": s.w_c,
                    "w_e": s.w_e,
                }
                for s in self.scores
            ],
            "clusters": [
                {
                    "cluster": e.cluster,
                    "exemplar_node": e.node_id,
                    "representativity": e.representativity,
                    "exclusivity": e.exclusivity,
                    "centroid": [float(v) for v in e.centroid],
                }
                for e in self.exemplars
            ],
        }
        if self.lambda_graphoids is not None:
            payload["lambda"] = self.lambda_threshold
            payload["lambda_graphoids"] = self.lambda_graphoids
        if self.gamma_graphoids is not None:
            payload["gamma"] = self.gamma_threshold
            payload["gamma_graphoids"] = self.gamma_graphoids
        if self.metrics is not None:
            payload["metrics"] = self.metrics
        return payload
