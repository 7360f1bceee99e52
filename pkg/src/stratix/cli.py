"""Command-line front door: validate inputs, run the pipeline, generate
synthetic cohorts, launch the service.

Exit codes: 0 ok, 1 module/internal error, 2 usage or config error.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import yaml

from . import cluster as _cluster
from .errors import StratixError, ValidationError
from .features import full_view, parse_feature_list, select_features
from .ingest import (
    align_cohort,
    normalize,
    parse_clinical_table,
    parse_expression_matrix,
)
from .pipeline import (
    ModalityParams,
    cluster_modality,
    load_config,
    run_pipeline,
    silhouette_csv,
)
from .synth import SyntheticCohortSpec, generate_synthetic
from .viewmodels import to_json_bytes


def _fail(exc: StratixError) -> None:
    click.echo(f"error [{exc.code}]: {exc.message}", err=True)
    if exc.detail:
        click.echo(f"detail: {exc.detail}", err=True)
    sys.exit(1)


@click.group()
def main() -> None:
    """Two-modality cohort stratification toolkit."""


@main.command("ingest-check")
@click.argument("matrix_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("matrix_b", type=click.Path(exists=True, dir_okay=False))
@click.argument("clinical", type=click.Path(exists=True, dir_okay=False))
def ingest_check(matrix_a: str, matrix_b: str, clinical: str) -> None:
    """Parse and align the three inputs; print the cohort summary."""
    try:
        ma = parse_expression_matrix(
            Path(matrix_a).read_text(encoding="utf-8"), "a")
        mb = parse_expression_matrix(
            Path(matrix_b).read_text(encoding="utf-8"), "b")
        clin = parse_clinical_table(Path(clinical).read_text(encoding="utf-8"))
        cohort = align_cohort(ma, mb, clin)
    except StratixError as exc:
        _fail(exc)
    summary = {
        "samples": len(cohort.sample_ids),
        "features_a": cohort.matrix_a.n_features,
        "features_b": cohort.matrix_b.n_features,
        "dropped": {k: list(v) for k, v in cohort.dropped.items()},
    }
    click.echo(to_json_bytes(summary).decode("utf-8"))


@main.command("cluster")
@click.argument("matrix", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(list(_cluster.METHODS)),
              default="kmeans", show_default=True)
@click.option("--k", type=int, default=None,
              help="cluster count (kmeans/spectral)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--metric", type=click.Choice(["pearson", "euclidean"]),
              default="euclidean", show_default=True)
@click.option("--threshold", type=float, default=0.0, show_default=True,
              help="similarity threshold for the graph (strict >)")
@click.option("--features", "features_path", type=click.Path(exists=True),
              default=None, help="feature-list file (comma/newline separated)")
@click.option("--log2", is_flag=True, help="apply log2(x+1) first")
@click.option("--zscore", is_flag=True, help="z-score features first")
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              required=True, help="output directory")
def cluster_cmd(matrix: str, method: str, k: int | None, seed: int,
                metric: str, threshold: float, features_path: str | None,
                log2: bool, zscore: bool, out_dir: str) -> None:
    """Cluster one expression matrix and write partition + silhouette files."""
    if method in ("kmeans", "spectral") and k is None:
        raise click.UsageError(f"--k is required for method {method}")
    try:
        source = parse_expression_matrix(
            Path(matrix).read_text(encoding="utf-8"), "a")
        if log2 or zscore:
            source = normalize(source, log_transform=log2, zscore=zscore)
        if features_path is None:
            view = full_view(source)
        else:
            requested = parse_feature_list(
                Path(features_path).read_text(encoding="utf-8"))
            _, view = select_features(source, requested)
        params = ModalityParams(method=method, k=k, seed=seed, metric=metric,
                                threshold=threshold)
        partition, _graph = cluster_modality(view, params)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "partition.csv").write_text(
            _cluster.partition_to_csv(partition), encoding="utf-8")
        (out / "partition.json").write_bytes(
            to_json_bytes(_cluster.partition_sidecar(partition)))
        if partition.k >= 2:
            report = _cluster.silhouette(view, partition)
            (out / "silhouette.csv").write_text(silhouette_csv(report),
                                                encoding="utf-8")
    except StratixError as exc:
        _fail(exc)
    click.echo(f"wrote partition (k={partition.k}) to {out_dir}")


@main.command("stratify")
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--output-dir", default=None,
              help="override output_dir from the config")
@click.option("--seed", type=int, default=None,
              help="override both modalities' clustering seeds")
@click.option("--set", "set_overrides", multiple=True, metavar="PATH=VALUE",
              help="override any config field by dotted path, "
                   "e.g. --set cluster.a.k=3")
def stratify(config_path: str, output_dir: str | None, seed: int | None,
             set_overrides: tuple[str, ...]) -> None:
    """Run the full pipeline from a YAML config."""
    overrides: dict = {}
    for item in set_overrides:
        if "=" not in item:
            raise click.UsageError(f"--set expects PATH=VALUE, got {item!r}")
        dotted, _, raw_value = item.partition("=")
        overrides[dotted] = yaml.safe_load(raw_value)
    if output_dir is not None:
        overrides["output_dir"] = output_dir
    if seed is not None:
        overrides["cluster.a.seed"] = seed
        overrides["cluster.b.seed"] = seed
    try:
        config = load_config(config_path, overrides)
    except ValidationError as exc:
        raise click.UsageError(f"[{exc.code}] {exc.message}") from exc
    for label, path in (("matrix_a", config.matrix_a),
                        ("matrix_b", config.matrix_b),
                        ("clinical", config.clinical)):
        if not Path(path).is_file():
            raise click.UsageError(f"input file not found: {label}={path}")
    try:
        artifacts = run_pipeline(config)
    except StratixError as exc:
        _fail(exc)
    for name in sorted(artifacts):
        click.echo(f"wrote {artifacts[name]}")


@main.command("synth")
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.option("--n-per", type=int, default=50, show_default=True,
              help="samples per combined (a, b) subgroup")
@click.option("--subgroups-a", type=int, default=2, show_default=True)
@click.option("--subgroups-b", type=int, default=2, show_default=True)
@click.option("--features-a", type=int, default=20, show_default=True)
@click.option("--features-b", type=int, default=20, show_default=True)
@click.option("--separation", type=float, default=6.0, show_default=True,
              help="mean shift between subgroups in within-sd units")
@click.option("--hazards", default=None, metavar="ROWS",
              help='per-cell hazards, rows ";"-separated, cells ","-separated,'
                   ' e.g. "1,1;1,4"; default all 1.0')
@click.option("--censoring", type=float, default=0.1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def synth(out_dir: str, n_per: int, subgroups_a: int, subgroups_b: int,
          features_a: int, features_b: int, separation: float,
          hazards: str | None, censoring: float, seed: int) -> None:
    """Generate a seeded synthetic cohort with planted structure."""
    if hazards is None:
        matrix = tuple((1.0,) * subgroups_b for _ in range(subgroups_a))
    else:
        try:
            matrix = tuple(
                tuple(float(cell) for cell in row.split(","))
                for row in hazards.split(";")
            )
        except ValueError as exc:
            raise click.UsageError(f"cannot parse --hazards {hazards!r}") from exc
    try:
        spec = SyntheticCohortSpec(
            n_per_subgroup=n_per,
            subgroups_a=subgroups_a,
            subgroups_b=subgroups_b,
            features_a=features_a,
            features_b=features_b,
            separation=separation,
            hazards=matrix,
            censoring_rate=censoring,
            seed=seed,
        )
    except ValidationError as exc:
        raise click.UsageError(f"[{exc.code}] {exc.message}") from exc
    try:
        generated = generate_synthetic(spec, out_dir)
    except StratixError as exc:
        _fail(exc)
    for name in sorted(generated.paths):
        click.echo(f"wrote {generated.paths[name]}")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True,
              envvar="STRATIX_PORT", help="port (env STRATIX_PORT)")
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("stratix.service:app", host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
