"""Command-line entry points: run, bench, generate."""
from __future__ import annotations

import sys
from pathlib import Path

import click

from .dataset import write_ucr_tsv
from .errors import PipelineError
from .pipeline import DEFAULT_M, DEFAULT_RML, DEFAULT_SMPL, RunConfig, bench, run
from .synthetic import GENERATORS, load_benchmark


def _parse_int_list(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"expected a comma-separated integer list: {exc}")


@click.group()
def main():
    """Interpretable time-series clustering via subsequence graphs."""


@main.command("run")
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--k", required=True, type=int, help="Number of clusters.")
@click.option("--m-lengths", default=DEFAULT_M, show_default=True, type=int)
@click.option("--smpl", default=DEFAULT_SMPL, show_default=True, type=int)
@click.option("--rml", default=DEFAULT_RML, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--workers", default=1, show_default=True, type=int)
@click.option("--lengths", default=None, help="Comma list overriding length sampling.")
@click.option("--z-normalize", is_flag=True, help="Per-series z-normalization at load.")
@click.option("--export-graph", is_flag=True, help="Write the selected graph as JSON.")
@click.option("--export-consensus", is_flag=True, help="Write the consensus matrix as CSV.")
@click.option("--dump-features", is_flag=True, help="Write the selected raw feature matrix as CSV.")
@click.option("--graphoid-lambda", default=None, type=float)
@click.option("--graphoid-gamma", default=None, type=float)
@click.option("--out-dir", default=".", show_default=True, type=click.Path(file_okay=False))
def run_command(
    dataset,
    k,
    m_lengths,
    smpl,
    rml,
    seed,
    workers,
    lengths,
    z_normalize,
    export_graph,
    export_consensus,
    dump_features,
    graphoid_lambda,
    graphoid_gamma,
    out_dir,
):
    """Cluster one dataset and write labels plus the interpretation report."""
    config = RunConfig(
        dataset=dataset,
        k=k,
        m_lengths=m_lengths,
        smpl=smpl,
        rml=rml,
        seed=seed,
        workers=workers,
        lengths=_parse_int_list(lengths),
        z_normalize=z_normalize,
        out_dir=out_dir,
        export_graph=export_graph,
        export_consensus=export_consensus,
        dump_features=dump_features,
        graphoid_lambda=graphoid_lambda,
        graphoid_gamma=graphoid_gamma,
    )
    try:
        result = run(config)
    except PipelineError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    click.echo(f"selected length: {result.report.selected_length}")
    if result.report.metrics:
        line = ", ".join(f"{k_}={v:.4f}" for k_, v in sorted(result.report.metrics.items()))
        click.echo(f"metrics vs labels: {line}")
    click.echo(f"artifacts written to {Path(out_dir).resolve()}")


@main.command("bench")
@click.option(
    "--dataset",
    "datasets",
    multiple=True,
    required=True,
    help="PATH:K pair; repeat per dataset.",
)
@click.option("--seeds", default="0", show_default=True, help="Comma list of master seeds.")
@click.option("--m-lengths", default=DEFAULT_M, show_default=True, type=int)
@click.option("--smpl", default=DEFAULT_SMPL, show_default=True, type=int)
@click.option("--rml", default=DEFAULT_RML, show_default=True, type=float)
@click.option("--workers", default=1, show_default=True, type=int)
@click.option("--out", default="bench.csv", show_default=True, type=click.Path(dir_okay=False))
def bench_command(datasets, seeds, m_lengths, smpl, rml, workers, out):
    """Run several datasets x seeds and summarize one CSV row each."""
    configs = []
    for spec_item in datasets:
        path, sep, k_text = spec_item.rpartition(":")
        if not sep or not path:
            raise click.BadParameter(f"expected PATH:K, got {spec_item!r}")
        for seed_text in seeds.split(","):
            configs.append(
                RunConfig(
                    dataset=path,
                    k=int(k_text),
                    m_lengths=m_lengths,
                    smpl=smpl,
                    rml=rml,
                    seed=int(seed_text),
                    workers=workers,
                )
            )
    rows = bench(configs, out)
    failures = sum(1 for r in rows if r["status"] != "ok")
    click.echo(f"{len(rows)} runs, {failures} failures -> {out}")


@main.command("generate")
@click.option("--name", type=click.Choice(sorted(GENERATORS)), required=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def generate_command(name, seed, out):
    """Write a synthetic benchmark dataset as a UCR-layout TSV."""
    dataset, n_classes, source = load_benchmark(name, seed=seed)
    write_ucr_tsv(dataset, out)
    click.echo(f"{name} ({source}, {len(dataset)} series, {n_classes} classes) -> {out}")
