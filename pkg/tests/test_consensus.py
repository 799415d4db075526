import numpy as np
import pytest
from hypothesis import given, strategies as st

from seqgraph.consensus import ConsensusMatrix, consensus_matrix, spectral_clustering
from seqgraph.graph_clustering import Partition
from seqgraph.metrics import adjusted_rand_index


def partitions_strategy(max_n=12, max_m=6, max_k=4):
    @st.composite
    def build(draw):
        n = draw(st.integers(2, max_n))
        m = draw(st.integers(1, max_m))
        parts = []
        for _ in range(m):
            k = draw(st.integers(1, max_k))
            labels = np.array([draw(st.integers(0, k - 1)) for _ in range(n)])
            parts.append(Partition(labels=labels, k=k))
        return parts

    return build()


def blocks_to_labels(sizes):
    labels = []
    for i, s in enumerate(sizes):
        labels.extend([i] * s)
    return np.array(labels)


def connected_components(adjacency):
    """Brute-force component search used as the block-recovery oracle."""
    n = adjacency.shape[0]
    seen = np.full(n, -1)
    comp = 0
    for start in range(n):
        if seen[start] >= 0:
            continue
        stack = [start]
        while stack:
            v = stack.pop()
            if seen[v] >= 0:
                continue
            seen[v] = comp
            stack.extend(int(w) for w in np.flatnonzero(adjacency[v] > 0))
        comp += 1
    return seen


class TestConsensusMatrix:
    def test_hand_example(self):
        parts = [
            Partition(labels=np.array([0, 0, 1]), k=2),
            Partition(labels=np.array([0, 1, 1]), k=2),
        ]
        mc = consensus_matrix(parts)
        expected = np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.5], [0.0, 0.5, 1.0]])
        np.testing.assert_allclose(mc.values, expected)

    def test_identical_partitions_binary(self):
        part = Partition(labels=np.array([0, 1, 0, 2]), k=3)
        mc = consensus_matrix([part] * 5)
        assert set(np.unique(mc.values)) <= {0.0, 1.0}

    def test_single_partition_co_membership(self):
        part = Partition(labels=np.array([0, 1, 0]), k=2)
        mc = consensus_matrix([part])
        expected = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0]])
        np.testing.assert_allclose(mc.values, expected)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            consensus_matrix(
                [
                    Partition(labels=np.array([0, 1]), k=2),
                    Partition(labels=np.array([0, 1, 1]), k=2),
                ]
            )

    @given(partitions_strategy())
    def test_lattice_symmetry_diagonal(self, parts):
        mc = consensus_matrix(parts)
        values = mc.values
        np.testing.assert_array_equal(values, values.T)
        np.testing.assert_array_equal(np.diag(values), 1.0)
        scaled = values * len(parts)
        np.testing.assert_allclose(scaled, np.round(scaled), atol=1e-9)
        assert values.min() >= 0.0 and values.max() <= 1.0

    @given(partitions_strategy())
    def test_invariant_under_label_renaming(self, parts):
        renamed = []
        for i, p in enumerate(parts):
            shift = (p.labels + i + 1) % max(p.k, 1) + 10
            # renaming via arbitrary injective map: offset into fresh ids
            renamed.append(Partition(labels=np.unique(shift, return_inverse=True)[1], k=p.k + 11))
        np.testing.assert_allclose(
            consensus_matrix(parts).values, consensus_matrix(renamed).values
        )


class TestSpectralClustering:
    def test_block_diagonal_recovery(self):
        rng = np.random.default_rng(0)
        for trial in range(20):
            k = int(rng.integers(2, 5))
            sizes = [int(rng.integers(2, 7)) for _ in range(k)]
            truth = blocks_to_labels(sizes)
            n = truth.size
            affinity = (truth[:, None] == truth[None, :]).astype(float)
            # oracle: brute-force connected components of the block matrix
            oracle = connected_components(affinity)
            assert adjusted_rand_index(oracle, truth) == 1.0
            mc = ConsensusMatrix(values=affinity, n_partitions=1)
            labels = spectral_clustering(mc, k, rng_seed=trial).labels
            assert adjusted_rand_index(labels, truth) == 1.0

    def test_k_equals_one(self):
        mc = ConsensusMatrix(values=np.eye(4), n_partitions=1)
        part = spectral_clustering(mc, 1, rng_seed=0)
        assert set(part.labels.tolist()) == {0}

    def test_k_too_large(self):
        mc = ConsensusMatrix(values=np.eye(3), n_partitions=1)
        with pytest.raises(ValueError):
            spectral_clustering(mc, 4, rng_seed=0)

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(1)
        truth = blocks_to_labels([5, 4, 6])
        affinity = (truth[:, None] == truth[None, :]).astype(float)
        noise = rng.uniform(0, 0.2, affinity.shape)
        noise = (noise + noise.T) / 2
        np.fill_diagonal(noise, 0.0)
        affinity = np.clip(affinity + noise, 0, 1)
        np.fill_diagonal(affinity, 1.0)
        mc = ConsensusMatrix(values=affinity, n_partitions=10)
        labels = spectral_clustering(mc, 3, rng_seed=5).labels

        perm = rng.permutation(truth.size)
        permuted = ConsensusMatrix(values=affinity[np.ix_(perm, perm)], n_partitions=10)
        labels_perm = spectral_clustering(permuted, 3, rng_seed=5).labels
        assert adjusted_rand_index(labels_perm, labels[perm]) == 1.0

    def test_all_zero_affinity_row_guarded(self):
        affinity = np.eye(5)
        affinity[2, 2] = 0.0  # fully isolated series with zero degree
        mc = ConsensusMatrix(values=affinity, n_partitions=1)
        part = spectral_clustering(mc, 2, rng_seed=0)
        assert part.labels.size == 5  # no error, labels well-formed

    def test_monotone_agreement(self):
        # series co-clustered in every partition end up together when k
        # matches the number of connected components
        rng = np.random.default_rng(2)
        for trial in range(20):
            base = blocks_to_labels([3, 4, 3])
            parts = []
            for _ in range(4):
                # random renaming keeps co-membership structure intact
                mapping = rng.permutation(3)
                parts.append(Partition(labels=mapping[base], k=3))
            mc = consensus_matrix(parts)
            labels = spectral_clustering(mc, 3, rng_seed=trial).labels
            for i in range(base.size):
                for j in range(base.size):
                    if base[i] == base[j]:
                        assert labels[i] == labels[j]

    def test_iterative_solver_matches_dense(self):
        truth = blocks_to_labels([6, 6, 6])
        affinity = (truth[:, None] == truth[None, :]).astype(float)
        mc = ConsensusMatrix(values=affinity, n_partitions=1)
        dense = spectral_clustering(mc, 3, rng_seed=0)
        iterative = spectral_clustering(mc, 3, rng_seed=0, dense_max=5)
        assert adjusted_rand_index(dense.labels, iterative.labels) == 1.0
