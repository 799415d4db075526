"""Subsequence-transition graph construction.

For one window length, every subsequence of the dataset is projected into
a 2-D "shape space" (3-component PCA followed by a rotation that sends the
offset direction onto the dropped third axis). Dense radial regions of
that space become graph nodes; consecutive-subsequence transitions become
weighted directed edges, and each series traces a node path.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, sliding_windows
from .errors import DegenerateProjectionError

ANGULAR_BINS = 60
KDE_GRID_POINTS = 200
MIN_BIN_POINTS = 3
DENSE_PCA_MAX_DIM = 256
_TINY = 1e-12


def derive_seed(master_seed: int, length: int, replicate: int = 0, tag: str = "") -> int:
    """Stable 63-bit sub-seed; independent of process and hash randomization."""
    key = f"{master_seed}:{length}:{replicate}:{tag}".encode()
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


def sample_lengths(dataset: Dataset, m: int, rml: float, rng_seed: int) -> list[int]:
    """Draw ``m`` window lengths uniformly from [5, floor(min|T| * rml)].

    Without replacement when the interval holds at least ``m`` integers,
    with replacement otherwise. Returned sorted for canonical scheduling.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 < rml <= 1:
        raise ValueError("rml must be in (0, 1]")
    upper = int(dataset.min_length() * rml)
    if upper < 5:
        raise ValueError(
            f"series too short for rml: floor(min|T| * rml) = {upper} < 5"
        )
    rng = np.random.default_rng(rng_seed)
    candidates = np.arange(5, upper + 1)
    replace = candidates.size < m
    drawn = rng.choice(candidates, size=m, replace=replace)
    return sorted(int(v) for v in drawn)


@dataclass(frozen=True)
class ShapeProjection:
    """2-D shape-space coordinates of every subsequence of one length.

    ``points2d`` rows are grouped by series (series_bounds gives slice
    offsets); ``sample_indices`` marks the rows the reduction was fitted
    on, which are also the only rows node creation looks at.
    """

    length: int
    points2d: np.ndarray
    series_bounds: np.ndarray
    sample_indices: np.ndarray
    components: np.ndarray
    mean: np.ndarray
    rotation: np.ndarray

    def n_points(self) -> int:
        return self.points2d.shape[0]

    def series_slice(self, i: int) -> slice:
        return slice(int(self.series_bounds[i]), int(self.series_bounds[i + 1]))


@dataclass
class PatternNode:
    """A dense shape-space region: one recurring pattern prototype."""

    id: int
    angular_bin: int
    radius: float
    prototype: np.ndarray | None = None
    member_count: int = 0

    def position2d(self, angular_bins: int = ANGULAR_BINS) -> np.ndarray:
        angle = (self.angular_bin + 0.5) * 2.0 * np.pi / angular_bins
        return np.array([self.radius * np.cos(angle), self.radius * np.sin(angle)])


@dataclass(frozen=True)
class PatternGraph:
    """Directed transition graph for one window length."""

    length: int
    nodes: list[PatternNode]
    edges: dict[tuple[int, int], int]
    paths: list[np.ndarray]
    projection: ShapeProjection

    def n_nodes(self) -> int:
        return len(self.nodes)

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def validate(self) -> None:
        ids = {n.id for n in self.nodes}
        assert ids == set(range(len(self.nodes)))
        for (src, dst), w in self.edges.items():
            assert src in ids and dst in ids and w >= 1
        total_pairs = 0
        for path in self.paths:
            assert path.size >= 1
            for a, b in zip(path[:-1], path[1:]):
                assert (int(a), int(b)) in self.edges
            total_pairs += path.size - 1
        assert sum(self.edges.values()) == total_pairs
        for node in self.nodes:
            assert node.member_count >= 1
            assert node.prototype is not None and node.prototype.size == self.length


def _pca_components(sample: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Top-3 principal axes of the mean-centered sample.

    Exact covariance eigendecomposition up to DENSE_PCA_MAX_DIM columns,
    randomized range-finder SVD above.
    """
    mean = sample.mean(axis=0)
    centered = sample - mean
    scale = max(1.0, float(np.abs(sample).max()))
    if float(np.abs(centered).max()) <= _TINY * scale:
        raise DegenerateProjectionError(
            "all sampled subsequences are identical; nothing to project"
        )
    dim = sample.shape[1]
    if dim <= DENSE_PCA_MAX_DIM:
        cov = centered.T @ centered / max(sample.shape[0] - 1, 1)
        eigvals, eigvecs = np.linalg.eigh(cov)
        components = eigvecs[:, ::-1][:, :3].T
    else:
        # Halko-style randomized SVD with power iterations; seeded for
        # reproducibility.
        sketch = centered @ rng.standard_normal((dim, 10))
        for _ in range(4):
            sketch = centered @ (centered.T @ sketch)
        q, _ = np.linalg.qr(sketch)
        _, _, vt = np.linalg.svd(q.T @ centered, full_matrices=False)
        components = vt[:3]
    if components.shape[0] < 3:  # pragma: no cover - dims are always >= 5
        raise DegenerateProjectionError("fewer than 3 principal components")
    return components, mean


def _rotation_onto_third_axis(direction: np.ndarray) -> np.ndarray:
    """Orthonormal 3x3 rotation sending ``direction`` to (0, 0, 1)."""
    norm = np.linalg.norm(direction)
    if norm < _TINY:
        return np.eye(3)
    a = direction / norm
    b = np.array([0.0, 0.0, 1.0])
    v = np.cross(a, b)
    s = np.linalg.norm(v)
    c = float(a @ b)
    if s < _TINY:
        if c > 0:
            return np.eye(3)
        # Antiparallel: rotate by pi around any axis orthogonal to a.
        helper = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        u = np.cross(a, helper)
        u /= np.linalg.norm(u)
        return 2.0 * np.outer(u, u) - np.eye(3)
    vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + vx + vx @ vx * ((1 - c) / (s * s))


def fit_projection(dataset: Dataset, length: int, smpl: int, rng_seed: int) -> ShapeProjection:
    """Project every subsequence of ``length`` into the 2-D shape space.

    The PCA is trained on floor(total/smpl) subsequences (at least 3)
    drawn uniformly without replacement; the rotation then aligns the
    image of the constant direction with the dropped third axis, so the
    kept two coordinates carry shape but not offset.
    """
    if smpl < 1:
        raise ValueError("smpl must be >= 1")
    per_series = [sliding_windows(t.values, length) for t in dataset.series]
    counts = np.array([w.shape[0] for w in per_series])
    bounds = np.concatenate([[0], np.cumsum(counts)])
    total = int(bounds[-1])
    if total < 3:
        raise DegenerateProjectionError("need at least 3 subsequences to project")

    rng = np.random.default_rng(rng_seed)
    n_sample = min(total, max(3, total // smpl))
    sample_indices = np.sort(rng.choice(total, size=n_sample, replace=False))

    stacked = np.concatenate(per_series, axis=0)
    components, mean = _pca_components(stacked[sample_indices], rng)
    offset_image = components @ (np.ones(length) / np.sqrt(length))
    rotation = _rotation_onto_third_axis(offset_image)

    reduced = (stacked - mean) @ components.T @ rotation.T
    return ShapeProjection(
        length=length,
        points2d=np.ascontiguousarray(reduced[:, :2]),
        series_bounds=bounds,
        sample_indices=sample_indices,
        components=components,
        mean=mean,
        rotation=rotation,
    )


def _polar(points: np.ndarray, angular_bins: int) -> tuple[np.ndarray, np.ndarray]:
    radii = np.hypot(points[:, 0], points[:, 1])
    angles = np.mod(np.arctan2(points[:, 1], points[:, 0]), 2.0 * np.pi)
    bins = np.minimum((angles / (2.0 * np.pi) * angular_bins).astype(np.int64), angular_bins - 1)
    return radii, bins


def _density_maxima(radii: np.ndarray) -> list[float]:
    """Radii of the Gaussian-KDE local maxima in one angular bin.

    Scott's-rule bandwidth, 200-point grid over [0, max radius]; a
    maximum must beat both neighbors strictly. Degenerate spreads
    collapse to a single node at the common radius.
    """
    spread = radii.std(ddof=1)
    if spread <= _TINY:
        return [float(radii.mean())]
    bandwidth = spread * radii.size ** (-0.2)
    grid = np.linspace(0.0, float(radii.max()), KDE_GRID_POINTS)
    z = (grid[:, None] - radii[None, :]) / bandwidth
    density = np.exp(-0.5 * z * z).sum(axis=1)
    interior = (density[1:-1] > density[:-2]) & (density[1:-1] > density[2:])
    idx = np.flatnonzero(interior) + 1
    if idx.size == 0:
        idx = np.array([int(np.argmax(density))])
    return [float(grid[i]) for i in idx]


def create_nodes(
    projection: ShapeProjection,
    angular_bins: int = ANGULAR_BINS,
    kde_bandwidth: str = "scott",
) -> list[PatternNode]:
    """Radial scan of the sampled shape-space points.

    Each of the ``angular_bins`` rays collects the radial distances of
    sampled points in its sector; every local maximum of their density
    becomes a node. Sectors with fewer than 3 points yield no node. If
    the sample is so small that no sector qualifies, each nonempty
    sector contributes one node at its mean radius instead, so a valid
    projection always produces at least one node.
    """
    if kde_bandwidth != "scott":
        raise ValueError(f"unsupported bandwidth rule: {kde_bandwidth!r}")
    points = projection.points2d[projection.sample_indices]
    if points.shape[0] < 3:
        raise ValueError("projection must carry at least 3 sampled points")
    radii, bins = _polar(points, angular_bins)
    if not np.any(radii > _TINY):
        raise DegenerateProjectionError("all sampled points sit at the origin")

    nodes: list[PatternNode] = []
    for b in range(angular_bins):
        in_bin = radii[bins == b]
        if in_bin.size < MIN_BIN_POINTS:
            continue
        for radius in _density_maxima(in_bin):
            nodes.append(PatternNode(id=len(nodes), angular_bin=b, radius=radius))
    if not nodes:
        for b in range(angular_bins):
            in_bin = radii[bins == b]
            if in_bin.size:
                nodes.append(
                    PatternNode(id=len(nodes), angular_bin=b, radius=float(in_bin.mean()))
                )
    return nodes


def assign_points(
    projection: ShapeProjection,
    nodes: list[PatternNode],
    angular_bins: int = ANGULAR_BINS,
) -> np.ndarray:
    """Node id for every projected point.

    Points pick the radially nearest node of their own angular sector;
    points whose sector has no node fall back to the globally nearest
    node position. Ties go to the lowest node id.
    """
    if not nodes:
        raise ValueError("no nodes to assign to")
    radii, bins = _polar(projection.points2d, angular_bins)
    assignment = np.empty(projection.n_points(), dtype=np.int64)

    by_bin: dict[int, list[PatternNode]] = {}
    for node in nodes:
        by_bin.setdefault(node.angular_bin, []).append(node)

    fallback_mask = np.ones(projection.n_points(), dtype=bool)
    for b, bin_nodes in by_bin.items():
        mask = bins == b
        if not np.any(mask):
            continue
        node_radii = np.array([n.radius for n in bin_nodes])
        node_ids = np.array([n.id for n in bin_nodes])
        nearest = np.abs(radii[mask][:, None] - node_radii[None, :]).argmin(axis=1)
        assignment[mask] = node_ids[nearest]
        fallback_mask[mask] = False

    if np.any(fallback_mask):
        positions = np.stack([n.position2d(angular_bins) for n in nodes])
        pts = projection.points2d[fallback_mask]
        d2 = ((pts[:, None, :] - positions[None, :, :]) ** 2).sum(axis=2)
        assignment[fallback_mask] = np.array([n.id for n in nodes])[d2.argmin(axis=1)]
    return assignment


def create_edges(
    projection: ShapeProjection,
    nodes: list[PatternNode],
    angular_bins: int = ANGULAR_BINS,
) -> tuple[dict[tuple[int, int], int], list[np.ndarray]]:
    """Per-series node paths and transition-count edges.

    Every consecutive subsequence pair inside a series increments the
    (from, to) edge weight; self-loops included, nothing crosses series
    boundaries.
    """
    assignment = assign_points(projection, nodes, angular_bins)
    n_series = projection.series_bounds.size - 1
    paths = [assignment[projection.series_slice(i)].copy() for i in range(n_series)]
    return _count_edges(paths, len(nodes)), paths


def _count_edges(paths: list[np.ndarray], n_nodes: int) -> dict[tuple[int, int], int]:
    codes = [p[:-1] * n_nodes + p[1:] for p in paths if p.size > 1]
    if not codes:
        return {}
    uniq, counts = np.unique(np.concatenate(codes), return_counts=True)
    return {
        (int(c // n_nodes), int(c % n_nodes)): int(w) for c, w in zip(uniq, counts)
    }


def build_graph(
    dataset: Dataset,
    length: int,
    smpl: int,
    rng_seed: int,
    angular_bins: int = ANGULAR_BINS,
) -> PatternGraph:
    """Projection, node creation and edge creation for one length.

    Nodes that end up with no assigned subsequence are dropped and ids
    compacted, so every node of the returned graph has members, a
    prototype (mean of all its member subsequences) and a count.
    """
    projection = fit_projection(dataset, length, smpl, rng_seed)
    raw_nodes = create_nodes(projection, angular_bins)
    assignment = assign_points(projection, raw_nodes, angular_bins)

    visited = np.unique(assignment)
    remap = np.full(len(raw_nodes), -1, dtype=np.int64)
    remap[visited] = np.arange(visited.size)
    assignment = remap[assignment]

    proto_sums = np.zeros((visited.size, length))
    member_counts = np.zeros(visited.size, dtype=np.int64)
    paths: list[np.ndarray] = []
    for i, t in enumerate(dataset.series):
        windows = sliding_windows(t.values, length)
        path = assignment[projection.series_slice(i)].copy()
        np.add.at(proto_sums, path, windows)
        np.add.at(member_counts, path, 1)
        paths.append(path)

    nodes = []
    for new_id, old_id in enumerate(visited):
        old = raw_nodes[int(old_id)]
        nodes.append(
            PatternNode(
                id=new_id,
                angular_bin=old.angular_bin,
                radius=old.radius,
                prototype=proto_sums[new_id] / member_counts[new_id],
                member_count=int(member_counts[new_id]),
            )
        )

    edges = _count_edges(paths, len(nodes))
    return PatternGraph(length=length, nodes=nodes, edges=edges, paths=paths, projection=projection)


def graph_to_dict(graph: PatternGraph, include_paths: bool = True) -> dict:
    """JSON-ready dict with nodes, edges and (optionally) series paths."""
    payload = {
        "length": graph.length,
        "nodes": [
            {
                "id": n.id,
                "angular_bin": n.angular_bin,
                "radius": n.radius,
                "prototype": [float(v) for v in n.prototype],
                "member_count": n.member_count,
            }
            for n in graph.nodes
        ],
        "edges": [
            {"src": src, "dst": dst, "weight": w}
            for (src, dst), w in sorted(graph.edges.items())
        ],
    }
    if include_paths:
        payload["paths"] = [[int(v) for v in p] for p in graph.paths]
    return payload
