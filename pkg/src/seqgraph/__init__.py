"""Interpretable time-series clustering via subsequence-transition graphs."""

from .consensus import ConsensusMatrix, consensus_matrix, spectral_clustering
from .dataset import (
    Dataset,
    Subsequence,
    TimeSeries,
    load_ucr_tsv,
    noise_ratio,
    sliding_windows,
    subsequences,
    write_ucr_tsv,
)
from .embedding import (
    PatternGraph,
    PatternNode,
    ShapeProjection,
    build_graph,
    create_edges,
    create_nodes,
    derive_seed,
    fit_projection,
    graph_to_dict,
    sample_lengths,
)
from .errors import DatasetError, DegenerateProjectionError, PipelineError
from .graph_clustering import (
    FeatureMatrix,
    Partition,
    cluster_graph,
    extract_features,
    kmeans,
    normalize_rows,
)
from .interpretability import (
    ExemplarNode,
    GraphoidReport,
    LengthScore,
    NodeClusterStats,
    consistency,
    exemplar_nodes,
    gamma_graphoid,
    graphoid,
    interpretability_factor,
    lambda_graphoid,
    node_stats,
    select_length,
)
from .metrics import (
    ContingencyTable,
    adjusted_rand_index,
    ami,
    nmi,
    rand_index,
)
from .pipeline import RunConfig, RunResult, bench, run

__version__ = "0.1.0"

__all__ = [
    "ConsensusMatrix",
    "ContingencyTable",
    "Dataset",
    "DatasetError",
    "DegenerateProjectionError",
    "ExemplarNode",
    "FeatureMatrix",
    "GraphoidReport",
    "LengthScore",
    "NodeClusterStats",
    "Partition",
    "PatternGraph",
    "PatternNode",
    "PipelineError",
    "RunConfig",
    "RunResult",
    "ShapeProjection",
    "Subsequence",
    "TimeSeries",
    "adjusted_rand_index",
    "ami",
    "bench",
    "build_graph",
    "cluster_graph",
    "consensus_matrix",
    "consistency",
    "create_edges",
    "create_nodes",
    "derive_seed",
    "exemplar_nodes",
    "extract_features",
    "fit_projection",
    "gamma_graphoid",
    "graph_to_dict",
    "graphoid",
    "interpretability_factor",
    "kmeans",
    "lambda_graphoid",
    "load_ucr_tsv",
    "nmi",
    "node_stats",
    "noise_ratio",
    "normalize_rows",
    "rand_index",
    "run",
    "sample_lengths",
    "select_length",
    "sliding_windows",
    "spectral_clustering",
    "subsequences",
    "write_ucr_tsv",
]
