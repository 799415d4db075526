"""End-to-end pipeline: lengths -> graphs -> partitions -> consensus ->
final labels -> interpretation, with deterministic seeding and optional
process parallelism over lengths."""
from __future__ import annotations

import csv
import json
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import metrics
from .consensus import ConsensusMatrix, consensus_matrix, spectral_clustering
from .dataset import Dataset, load_ucr_tsv, noise_ratio
from .embedding import (
    PatternGraph,
    build_graph,
    derive_seed,
    graph_to_dict,
    sample_lengths,
)
from .errors import DegenerateProjectionError, PipelineError
from .graph_clustering import Partition, cluster_graph, extract_features
from .interpretability import (
    GraphoidReport,
    LengthScore,
    consistency,
    exemplar_nodes,
    gamma_graphoid,
    interpretability_factor,
    lambda_graphoid,
    node_stats,
    select_length,
)

DEFAULT_M = 30
DEFAULT_SMPL = 10
DEFAULT_RML = 0.4


@dataclass
class RunConfig:
    """All knobs of one pipeline run; defaults mirror the CLI.

    ``dataset`` is a UCR TSV path, or an in-memory Dataset when driving
    the pipeline from Python.
    """

    dataset: str | Path | Dataset
    k: int
    m_lengths: int = DEFAULT_M
    smpl: int = DEFAULT_SMPL
    rml: float = DEFAULT_RML
    seed: int = 0
    workers: int = 1
    lengths: list[int] | None = None
    z_normalize: bool = False
    out_dir: str | Path | None = None
    export_graph: bool = False
    export_consensus: bool = False
    dump_features: bool = False
    graphoid_lambda: float | None = None
    graphoid_gamma: float | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0 < self.rml <= 1:
            raise ValueError("rml must be in (0, 1]")
        if self.m_lengths < 1:
            raise ValueError("m_lengths must be >= 1")


@dataclass
class RunResult:
    """In-memory outcome of a run; files are written only when out_dir is set."""

    final: Partition
    report: GraphoidReport
    consensus: ConsensusMatrix
    graphs: dict[tuple[int, int], PatternGraph]
    partitions: list[Partition]
    dataset: Dataset
    stage_seconds: dict[str, float] = field(default_factory=dict)


def _length_tasks(lengths: list[int]) -> list[tuple[int, int]]:
    """Canonical (length, replicate) pairs; replicate counts duplicates."""
    tasks: list[tuple[int, int]] = []
    seen: dict[int, int] = {}
    for ell in sorted(lengths):
        rep = seen.get(ell, 0)
        seen[ell] = rep + 1
        tasks.append((ell, rep))
    return tasks


def _build_one(args: tuple[Dataset, int, int, int, int, int]):
    dataset, ell, rep, smpl, k, master_seed = args
    graph_seed = derive_seed(master_seed, ell, rep, "graph")
    kmeans_seed = derive_seed(master_seed, ell, rep, "kmeans")
    try:
        graph = build_graph(dataset, ell, smpl, graph_seed)
    except DegenerateProjectionError as exc:
        return (ell, rep, None, None, str(exc))
    partition = cluster_graph(dataset, graph, k, kmeans_seed)
    partition = Partition(labels=partition.labels, k=k, length=ell, replicate=rep)
    return (ell, rep, graph, partition, None)


def _embed_and_cluster(dataset: Dataset, tasks, smpl: int, k: int, seed: int, workers: int):
    jobs = [(dataset, ell, rep, smpl, k, seed) for ell, rep in tasks]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_build_one, jobs))
    else:
        results = [_build_one(job) for job in jobs]
    results.sort(key=lambda r: (r[0], r[1]))

    graphs: dict[tuple[int, int], PatternGraph] = {}
    partitions: list[Partition] = []
    failures: list[str] = []
    for ell, rep, graph, partition, err in results:
        if err is not None:
            warnings.warn(f"length {ell} skipped: {err}", stacklevel=2)
            failures.append(f"length {ell}: {err}")
            continue
        graphs[(ell, rep)] = graph
        partitions.append(partition)
    if len(failures) > len(tasks) / 2:
        raise PipelineError(
            "embedding",
            f"{len(failures)} of {len(tasks)} lengths failed graph construction: "
            + "; ".join(failures[:3]),
        )
    return graphs, partitions


def run(config: RunConfig) -> RunResult:
    """Execute the full pipeline described by ``config``.

    Fails with a stage-tagged PipelineError; on success optionally writes
    labels, the report JSON and the requested exports under out_dir.
    """
    stage_seconds: dict[str, float] = {}
    t0 = time.perf_counter()
    try:
        if isinstance(config.dataset, Dataset):
            dataset = config.dataset
        else:
            dataset = load_ucr_tsv(config.dataset)
        if config.z_normalize:
            dataset = dataset.z_normalized()
    except Exception as exc:
        raise PipelineError("dataset", str(exc)) from exc
    stage_seconds["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        if config.lengths is not None:
            lengths = list(config.lengths)
            if not lengths:
                raise ValueError("explicit length list is empty")
        else:
            lengths = sample_lengths(
                dataset, config.m_lengths, config.rml, derive_seed(config.seed, 0, 0, "lengths")
            )
        tasks = _length_tasks(lengths)
        graphs, partitions = _embed_and_cluster(
            dataset, tasks, config.smpl, config.k, config.seed, config.workers
        )
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError("embedding", str(exc)) from exc
    stage_seconds["embed_cluster"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        consensus = consensus_matrix(partitions)
    except Exception as exc:
        raise PipelineError("consensus", str(exc)) from exc
    stage_seconds["consensus"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        final = spectral_clustering(consensus, config.k, derive_seed(config.seed, 0, 0, "spectral"))
    except Exception as exc:
        raise PipelineError("spectral", str(exc)) from exc
    stage_seconds["spectral"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        report = interpret(graphs, partitions, final, dataset, config)
    except Exception as exc:
        raise PipelineError("interpret", str(exc)) from exc
    stage_seconds["interpret"] = time.perf_counter() - t0

    result = RunResult(
        final=final,
        report=report,
        consensus=consensus,
        graphs=graphs,
        partitions=partitions,
        dataset=dataset,
        stage_seconds=stage_seconds,
    )
    if config.out_dir is not None:
        try:
            _write_artifacts(result, dataset, config)
        except Exception as exc:
            raise PipelineError("export", str(exc)) from exc
    return result


def interpret(
    graphs: dict[tuple[int, int], PatternGraph],
    partitions: list[Partition],
    final: Partition,
    dataset: Dataset,
    config: RunConfig,
) -> GraphoidReport:
    """Score every built length, pick the best graph, extract exemplars."""
    stats_cache = {}
    scores = []
    for partition in partitions:
        key = (partition.length, partition.replicate)
        stats = node_stats(graphs[key], final)
        stats_cache[key] = stats
        scores.append(
            LengthScore(
                length=partition.length,
                replicate=partition.replicate,
                w_c=consistency(final, partition),
                w_e=interpretability_factor(stats),
            )
        )
    best = select_length(scores)
    best_key = (best.length, best.replicate)
    best_graph = graphs[best_key]
    best_stats = stats_cache[best_key]
    exemplars = exemplar_nodes(best_graph, best_stats)

    lam_out = gam_out = None
    if config.graphoid_lambda is not None:
        lam_out = [
            {
                "cluster": c,
                "nodes": sorted(nodes),
                "edges": sorted(edges),
            }
            for c in range(final.k)
            for nodes, edges in [lambda_graphoid(best_stats, c, config.graphoid_lambda)]
        ]
    if config.graphoid_gamma is not None:
        gam_out = [
            {
                "cluster": c,
                "nodes": sorted(nodes),
                "edges": sorted(edges),
            }
            for c in range(final.k)
            for nodes, edges in [gamma_graphoid(best_stats, c, config.graphoid_gamma)]
        ]

    metric_block = None
    if dataset.labels is not None:
        metric_block = {
            "ri": metrics.rand_index(dataset.labels, final.labels),
            "ari": metrics.adjusted_rand_index(dataset.labels, final.labels),
            "ami": metrics.ami(dataset.labels, final.labels),
            "nmi": metrics.nmi(dataset.labels, final.labels),
        }
    return GraphoidReport(
        selected_length=best.length,
        selected_replicate=best.replicate,
        scores=scores,
        exemplars=exemplars,
        lambda_threshold=config.graphoid_lambda,
        gamma_threshold=config.graphoid_gamma,
        lambda_graphoids=lam_out,
        gamma_graphoids=gam_out,
        metrics=metric_block,
    )


def _write_artifacts(result: RunResult, dataset: Dataset, config: RunConfig) -> None:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    labels_path = out_dir / "labels.txt"
    labels_path.write_text("".join(f"{v}\n" for v in result.final.labels), encoding="utf-8")

    report_path = out_dir / "report.json"
    report_path.write_text(
        json.dumps(result.report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    if config.export_consensus:
        with (out_dir / "consensus.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            for row in result.consensus.values:
                writer.writerow([repr(float(v)) for v in row])

    best_key = (result.report.selected_length, result.report.selected_replicate)
    if config.export_graph:
        graph_path = out_dir / f"graph_len{best_key[0]}.json"
        graph_path.write_text(
            json.dumps(graph_to_dict(result.graphs[best_key]), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    if config.dump_features:
        features = extract_features(dataset, result.graphs[best_key])
        dense = features.dense()
        with (out_dir / f"features_len{best_key[0]}.csv").open(
            "w", newline="", encoding="utf-8"
        ) as fh:
            writer = csv.writer(fh)
            header = []
            for col in range(dense.shape[1]):
                kind, entity = features.column_kind(col)
                header.append(f"{kind}:{entity}")
            writer.writerow(header)
            for row in dense:
                writer.writerow([int(v) for v in row])


BENCH_FIELDS = [
    "dataset",
    "seed",
    "status",
    "n_series",
    "k",
    "ri",
    "ari",
    "ami",
    "nmi",
    "noise_ratio",
    "selected_length",
    "n_nodes",
    "n_edges",
    "t_load",
    "t_embed_cluster",
    "t_consensus",
    "t_spectral",
    "t_interpret",
    "t_total",
    "error",
]


def bench(configs: list[RunConfig], out_csv: str | Path) -> list[dict]:
    """Run every config, one CSV row each; failures become error rows."""
    rows = []
    for config in configs:
        name = Path(config.dataset).stem if not isinstance(config.dataset, Dataset) else (
            config.dataset.name or "dataset"
        )
        row = {f: "" for f in BENCH_FIELDS}
        row.update({"dataset": name, "seed": config.seed, "k": config.k})
        t_start = time.perf_counter()
        try:
            result = run(config)
        except Exception as exc:
            row["status"] = "error"
            row["error"] = str(exc)
            row["t_total"] = time.perf_counter() - t_start
            rows.append(row)
            continue
        total = time.perf_counter() - t_start
        data = result.dataset
        best_key = (result.report.selected_length, result.report.selected_replicate)
        best_graph = result.graphs[best_key]
        row.update(
            {
                "status": "ok",
                "n_series": len(data),
                "noise_ratio": float(np.mean([noise_ratio(t) for t in data.series])),
                "selected_length": result.report.selected_length,
                "n_nodes": best_graph.n_nodes(),
                "n_edges": len(best_graph.edges),
                "t_load": result.stage_seconds["load"],
                "t_embed_cluster": result.stage_seconds["embed_cluster"],
                "t_consensus": result.stage_seconds["consensus"],
                "t_spectral": result.stage_seconds["spectral"],
                "t_interpret": result.stage_seconds["interpret"],
                "t_total": total,
            }
        )
        if result.report.metrics is not None:
            row.update(
                {
                    "ri": result.report.metrics["ri"],
                    "ari": result.report.metrics["ari"],
                    "ami": result.report.metrics["ami"],
                    "nmi": result.report.metrics["nmi"],
                }
            )
        rows.append(row)

    out_csv = Path(out_csv)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    with out_csv.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    return rows
