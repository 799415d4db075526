"""Consensus over per-length partitions via spectral clustering.

The consensus matrix records, for every pair of series, the fraction of
per-length partitions that put them in the same cluster. Treated as a
graph affinity, its communities are the final clusters.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg

from .graph_clustering import Partition, kmeans

DENSE_EIG_MAX = 4000
_DEGREE_FLOOR = 1e-12


@dataclass(frozen=True)
class ConsensusMatrix:
    """Symmetric co-clustering frequency matrix with unit diagonal."""

    values: np.ndarray
    n_partitions: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError("consensus matrix must be square")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]


def consensus_matrix(partitions: list[Partition]) -> ConsensusMatrix:
    """Fraction of partitions in which each series pair shares a label."""
    if not partitions:
        raise ValueError("need at least one partition")
    n = len(partitions[0])
    counts = np.zeros((n, n), dtype=np.int64)
    for p in partitions:
        if len(p) != n:
            raise ValueError("partitions cover datasets of different sizes")
        same = p.labels[:, None] == p.labels[None, :]
        counts += same
    return ConsensusMatrix(values=counts / len(partitions), n_partitions=len(partitions))


def spectral_embedding(affinity: np.ndarray, k: int, dense_max: int = DENSE_EIG_MAX) -> np.ndarray:
    """Row-normalized eigenvectors of the k smallest L_sym eigenvalues.

    L_sym = I - D^{-1/2} A D^{-1/2}; rows whose degree underflows are
    guarded with a floor instead of erroring.
    """
    n = affinity.shape[0]
    degrees = np.maximum(affinity.sum(axis=1), _DEGREE_FLOOR)
    inv_sqrt = 1.0 / np.sqrt(degrees)
    lap = np.eye(n) - inv_sqrt[:, None] * affinity * inv_sqrt[None, :]
    lap = (lap + lap.T) / 2.0
    if n <= dense_max:
        _, vecs = np.linalg.eigh(lap)
        embedding = vecs[:, :k]
    else:
        _, embedding = scipy.sparse.linalg.eigsh(
            lap, k=k, which="SA", v0=np.full(n, 1.0 / np.sqrt(n))
        )
    norms = np.linalg.norm(embedding, axis=1, keepdims=True)
    safe = np.where(norms > 0, norms, 1.0)
    return embedding / safe


def spectral_clustering(
    consensus: ConsensusMatrix,
    k: int,
    rng_seed: int,
    dense_max: int = DENSE_EIG_MAX,
) -> Partition:
    """Normalized spectral clustering on the consensus affinity."""
    n = len(consensus)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    embedding = spectral_embedding(consensus.values, k, dense_max)
    clustered = kmeans(embedding, k, rng_seed)
    return Partition(labels=clustered.labels, k=k)
