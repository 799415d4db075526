"""External clustering agreement metrics: RI, ARI, NMI, AMI.

All four are computed from the contingency table of the two labelings
and are invariant under relabeling of either argument. ARI and AMI are
chance-corrected under the permutation model.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln


@dataclass(frozen=True)
class ContingencyTable:
    """Joint counts n_ij of (label-in-a, label-in-b) pairs."""

    counts: np.ndarray
    row_totals: np.ndarray
    col_totals: np.ndarray
    n: int

    @classmethod
    def from_labels(cls, a, b) -> "ContingencyTable":
        a = np.asarray(a)
        b = np.asarray(b)
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("labelings must be equal-length vectors")
        if a.size < 2:
            raise ValueError("need at least 2 points")
        _, ai = np.unique(a, return_inverse=True)
        _, bi = np.unique(b, return_inverse=True)
        counts = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
        np.add.at(counts, (ai, bi), 1)
        return cls(
            counts=counts,
            row_totals=counts.sum(axis=1),
            col_totals=counts.sum(axis=0),
            n=a.size,
        )


def _comb2(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return x * (x - 1) / 2.0


def rand_index(a, b) -> float:
    """Fraction of point pairs on which the two labelings agree."""
    t = ContingencyTable.from_labels(a, b)
    same_both = _comb2(t.counts).sum()
    same_a = _comb2(t.row_totals).sum()
    same_b = _comb2(t.col_totals).sum()
    total = _comb2(np.array(t.n)).item()
    disagreements = same_a + same_b - 2.0 * same_both
    return float(1.0 - disagreements / total)


def adjusted_rand_index(a, b) -> float:
    """Rand index corrected for chance; 1 iff identical up to renaming."""
    t = ContingencyTable.from_labels(a, b)
    index = _comb2(t.counts).sum()
    sum_a = _comb2(t.row_totals).sum()
    sum_b = _comb2(t.col_totals).sum()
    total = _comb2(np.array(t.n)).item()
    expected = sum_a * sum_b / total
    maximum = (sum_a + sum_b) / 2.0
    if maximum == expected:
        # Both labelings are trivial in the same way (all-one-cluster or
        # all singletons): identical partitions.
        return 1.0
    return float((index - expected) / (maximum - expected))


def _entropy(totals: np.ndarray, n: int) -> float:
    p = totals[totals > 0] / n
    return float(-(p * np.log(p)).sum())


def _mutual_information(t: ContingencyTable) -> float:
    nz = t.counts > 0
    nij = t.counts[nz].astype(np.float64)
    outer = np.outer(t.row_totals, t.col_totals)[nz].astype(np.float64)
    return float((nij / t.n * (np.log(nij * t.n) - np.log(outer))).sum())


def _expected_mutual_information(t: ContingencyTable) -> float:
    """E[MI] under the permutation model, accumulated in log space."""
    n = t.n
    gln_n = gammaln(n + 1)
    emi = 0.0
    for ai in t.row_totals:
        for bj in t.col_totals:
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            if hi < lo:
                continue
            nij = np.arange(lo, hi + 1, dtype=np.float64)
            term = nij / n * (np.log(n * nij) - np.log(float(ai) * float(bj)))
            log_prob = (
                gammaln(ai + 1)
                + gammaln(bj + 1)
                + gammaln(n - ai + 1)
                + gammaln(n - bj + 1)
                - gln_n
                - gammaln(nij + 1)
                - gammaln(ai - nij + 1)
                - gammaln(bj - nij + 1)
                - gammaln(n - ai - bj + nij + 1)
            )
            emi += float((term * np.exp(log_prob)).sum())
    return emi


def _is_trivial_pair(t: ContingencyTable) -> bool:
    return t.counts.shape == (1, 1)


def nmi(a, b) -> float:
    """Mutual information normalized by the mean of the two entropies."""
    t = ContingencyTable.from_labels(a, b)
    if _is_trivial_pair(t):
        return 1.0
    mi = _mutual_information(t)
    normalizer = (_entropy(t.row_totals, t.n) + _entropy(t.col_totals, t.n)) / 2.0
    if normalizer <= 0 or mi <= 0:
        return 0.0
    return float(min(mi / normalizer, 1.0))


def ami(a, b) -> float:
    """Mutual information adjusted for chance, arithmetic-mean normalized."""
    t = ContingencyTable.from_labels(a, b)
    if _is_trivial_pair(t):
        return 1.0
    mi = _mutual_information(t)
    emi = _expected_mutual_information(t)
    normalizer = (_entropy(t.row_totals, t.n) + _entropy(t.col_totals, t.n)) / 2.0
    denominator = normalizer - emi
    if denominator < 0:
        denominator = min(denominator, -np.finfo(np.float64).eps)
    else:
        denominator = max(denominator, np.finfo(np.float64).eps)
    return float((mi - emi) / denominator)
