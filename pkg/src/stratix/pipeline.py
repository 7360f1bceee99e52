"""File-driven pipeline: config in, deterministic artifact files out.

The service and the CLI both route clustering through cluster_modality and
serialize through the same builders, so the three ways of running an
analysis (in-process, CLI, HTTP) produce identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import cluster as _cluster
from . import graph as _graph
from .errors import StratixError, ValidationError
from .features import FeatureView, full_view, parse_feature_list, select_features
from .ingest import (
    align_cohort,
    normalize,
    parse_clinical_table,
    parse_expression_matrix,
)
from .integrate import (
    Block,
    Ribbon,
    build_parallel_sets,
    compare_selections,
    cross_tab,
    make_selection,
)
from .survival import censor_times_csv, curves_to_csv
from .viewmodels import (
    graph_payload,
    parallel_sets_payload,
    to_json_bytes,
)

_DEFAULT_METRIC = "euclidean"
_DEFAULT_THRESHOLD = 0.0


@dataclass(frozen=True)
class ModalityParams:
    method: str = "kmeans"
    k: int | None = None
    seed: int = 0
    metric: str = _DEFAULT_METRIC
    threshold: float = _DEFAULT_THRESHOLD


@dataclass(frozen=True)
class PipelineConfig:
    matrix_a: str
    matrix_b: str
    clinical: str
    output_dir: str
    features_a: str | None = None  # feature-list file; None = all features
    features_b: str | None = None
    log2: bool = False
    zscore: bool = False
    params_a: ModalityParams = field(default_factory=ModalityParams)
    params_b: ModalityParams = field(default_factory=ModalityParams)
    selections: tuple = ()  # (name, atoms) pairs


def _require(mapping: dict, key: str, context: str):
    if key not in mapping or mapping[key] is None:
        raise ValidationError(f"config missing {context}.{key}")
    return mapping[key]


def _parse_atom(raw: dict):
    kind = raw.get("kind")
    if kind == "block":
        return Block(modality=str(_require(raw, "modality", "atom")),
                     cluster=int(_require(raw, "cluster", "atom")))
    if kind == "ribbon":
        return Ribbon(cluster_a=int(_require(raw, "a", "atom")),
                      cluster_b=int(_require(raw, "b", "atom")))
    raise ValidationError(f"unknown atom kind {kind!r}; expected block|ribbon")


def _parse_params(raw: dict, context: str) -> ModalityParams:
    known = {"method", "k", "seed", "metric", "threshold"}
    extra = set(raw) - known
    if extra:
        raise ValidationError(f"unknown keys in {context}: {sorted(extra)}")
    method = raw.get("method", "kmeans")
    if method not in _cluster.METHODS:
        raise ValidationError(
            f"{context}.method must be one of {_cluster.METHODS}, got {method!r}"
        )
    k = raw.get("k")
    if method in ("kmeans", "spectral") and k is None:
        raise ValidationError(f"{context}.k is required for method {method}")
    return ModalityParams(
        method=method,
        k=None if k is None else int(k),
        seed=int(raw.get("seed", 0)),
        metric=str(raw.get("metric", _DEFAULT_METRIC)),
        threshold=float(raw.get("threshold", _DEFAULT_THRESHOLD)),
    )


def load_config(path, overrides: dict | None = None) -> PipelineConfig:
    """Read the YAML config; dotted-path overrides win over file values."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ValidationError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValidationError("config root must be a mapping")
    for dotted, value in (overrides or {}).items():
        node = raw
        parts = dotted.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ValidationError(f"override path {dotted!r} crosses a leaf")
        node[parts[-1]] = value

    inputs = raw.get("inputs", {})
    features = raw.get("features", {}) or {}
    normalize_cfg = raw.get("normalize", {}) or {}
    cluster_cfg = raw.get("cluster", {}) or {}
    selections_cfg = raw.get("selections", []) or []
    selections = []
    for entry in selections_cfg:
        name = str(_require(entry, "name", "selection"))
        atoms = tuple(_parse_atom(a) for a in _require(entry, "atoms", name))
        selections.append((name, atoms))
    return PipelineConfig(
        matrix_a=str(_require(inputs, "matrix_a", "inputs")),
        matrix_b=str(_require(inputs, "matrix_b", "inputs")),
        clinical=str(_require(inputs, "clinical", "inputs")),
        output_dir=str(_require(raw, "output_dir", "config")),
        features_a=features.get("a"),
        features_b=features.get("b"),
        log2=bool(normalize_cfg.get("log2", False)),
        zscore=bool(normalize_cfg.get("zscore", False)),
        params_a=_parse_params(cluster_cfg.get("a", {}) or {}, "cluster.a"),
        params_b=_parse_params(cluster_cfg.get("b", {}) or {}, "cluster.b"),
        selections=tuple(selections),
    )


def cluster_modality(view: FeatureView, params: ModalityParams):
    """Run the configured method; returns (partition, thresholded graph)."""
    sims = _graph.similarity_matrix(view, params.metric)
    graph = _graph.sparsify(sims, params.threshold)
    if params.method == "kmeans":
        part = _cluster.kmeans(view, params.k, params.seed)
    elif params.method == "spectral":
        part = _cluster.spectral(view, params.k, params.metric, params.seed,
                                 threshold=params.threshold)
    elif params.method == "community":
        part = _cluster.community_detect(graph, params.seed)
    else:
        raise ValidationError(f"unknown method {params.method!r}")
    return part, graph


def silhouette_csv(report) -> str:
    lines = ["sample_id,cluster,s"]
    for c, member_order in enumerate(report.cluster_order):
        lines += [
            f"{report.sample_ids[i]},{c},{float(report.values[i])!r}"
            for i in member_order
        ]
    return "\n".join(lines) + "\n"


def _load_inputs(config: PipelineConfig):
    for label, path in (("matrix_a", config.matrix_a),
                        ("matrix_b", config.matrix_b),
                        ("clinical", config.clinical)):
        if not Path(path).is_file():
            raise ValidationError(f"input file not found: {label}={path}")
    matrix_a = parse_expression_matrix(Path(config.matrix_a).read_text(encoding="utf-8"),
                                       modality_name="a")
    matrix_b = parse_expression_matrix(Path(config.matrix_b).read_text(encoding="utf-8"),
                                       modality_name="b")
    clinical = parse_clinical_table(Path(config.clinical).read_text(encoding="utf-8"))
    if config.log2 or config.zscore:
        matrix_a = normalize(matrix_a, log_transform=config.log2,
                             zscore=config.zscore)
        matrix_b = normalize(matrix_b, log_transform=config.log2,
                             zscore=config.zscore)
    return align_cohort(matrix_a, matrix_b, clinical)


def _view_for(matrix, list_path: str | None) -> FeatureView:
    if list_path is None:
        return full_view(matrix)
    if not Path(list_path).is_file():
        raise ValidationError(f"feature list file not found: {list_path}")
    requested = parse_feature_list(Path(list_path).read_text(encoding="utf-8"))
    _, view = select_features(matrix, requested)
    return view


def run_pipeline(config: PipelineConfig) -> dict:
    """Compute every artifact in memory, then write them all.

    Returns {filename: absolute path}. On error nothing is left behind.
    """
    cohort = _load_inputs(config)
    view_a = _view_for(cohort.matrix_a, config.features_a)
    view_b = _view_for(cohort.matrix_b, config.features_b)

    part_a, graph_a = cluster_modality(view_a, config.params_a)
    part_b, graph_b = cluster_modality(view_b, config.params_b)
    sil_a = _cluster.silhouette(view_a, part_a)
    sil_b = _cluster.silhouette(view_b, part_b)
    table = cross_tab(part_a, part_b)
    model = build_parallel_sets(table)

    artifacts: dict[str, bytes] = {
        "partition_a.csv": _cluster.partition_to_csv(part_a).encode("utf-8"),
        "partition_b.csv": _cluster.partition_to_csv(part_b).encode("utf-8"),
        "partition_a.json": to_json_bytes(_cluster.partition_sidecar(part_a)),
        "partition_b.json": to_json_bytes(_cluster.partition_sidecar(part_b)),
        "silhouette_a.csv": silhouette_csv(sil_a).encode("utf-8"),
        "silhouette_b.csv": silhouette_csv(sil_b).encode("utf-8"),
        "graph_a.json": to_json_bytes(graph_payload(graph_a, part_a, "a")),
        "graph_b.json": to_json_bytes(graph_payload(graph_b, part_b, "b")),
        "parallel_sets.json": to_json_bytes(parallel_sets_payload(model)),
    }
    if config.selections:
        specs = [make_selection(name, atoms, table)
                 for name, atoms in config.selections]
        curves, result = compare_selections(specs, table, cohort.clinical)
        artifacts["survival_curves.csv"] = curves_to_csv(curves).encode("utf-8")
        artifacts["censor_times.csv"] = censor_times_csv(curves).encode("utf-8")
        if result is not None:
            artifacts["logrank.json"] = to_json_bytes(result.to_payload())

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for name, data in artifacts.items():
            target = out_dir / name
            target.write_bytes(data)
            written.append(target)
    except BaseException:
        for target in written:
            try:
                target.unlink()
            except OSError:
                pass
        raise
    return {name: str(out_dir / name) for name in artifacts}


def run_pipeline_from_file(config_path, overrides: dict | None = None) -> dict:
    return run_pipeline(load_config(config_path, overrides))


__all__ = [
    "ModalityParams",
    "PipelineConfig",
    "StratixError",
    "cluster_modality",
    "load_config",
    "run_pipeline",
    "run_pipeline_from_file",
    "silhouette_csv",
]
