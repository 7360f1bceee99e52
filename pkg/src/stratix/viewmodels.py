"""View-model payload builders shared by the service, the pipeline, and tests.

Every served view is built here from module outputs, so serving adds no
computation: a server response and an in-process composition produce the
same dict, and to_json_bytes renders both to identical bytes.
"""

from __future__ import annotations

import json

from .cluster import HeatmapLayout, Partition, SilhouetteReport
from .features import FeatureView
from .graph import SimilarityGraph, graph_to_json
from .integrate import (
    ParallelSetsModel,
    comparison_to_payload,
    model_to_payload,
    palette_color,
)


def to_json_bytes(payload) -> bytes:
    """Canonical JSON bytes: fixed separators, insertion order, UTF-8."""
    return json.dumps(
        payload, separators=(",", ":"), ensure_ascii=False, allow_nan=False
    ).encode("utf-8")


def heatmap_payload(view: FeatureView, partition: Partition,
                    layout: HeatmapLayout, modality: str) -> dict:
    values = view.values  # features x samples
    ordered = values[:, list(layout.column_order)]
    return {
        "modality": modality,
        "feature_ids": list(layout.feature_ids),
        "sample_order": [view.sample_ids[i] for i in layout.column_order],
        "blocks": [
            {
                "cluster": c,
                "start": start,
                "size": size,
                "color": palette_color(modality, c),
            }
            for c, start, size in layout.blocks
        ],
        "values": [[float(v) for v in row] for row in ordered],
    }


def silhouette_payload(report: SilhouetteReport, modality: str) -> dict:
    clusters = []
    for c, member_order in enumerate(report.cluster_order):
        clusters.append({
            "cluster": c,
            "color": palette_color(modality, c),
            "mean": float(report.cluster_means[c]),
            "members": [
                {"id": report.sample_ids[i], "s": float(report.values[i])}
                for i in member_order
            ],
        })
    return {
        "modality": modality,
        "mean": float(report.mean),
        "clusters": clusters,
    }


def graph_payload(graph: SimilarityGraph, partition: Partition | None,
                  modality: str) -> dict:
    if partition is None:
        return graph_to_json(graph)
    labels = partition.labels
    colors = [palette_color(modality, int(lab)) for lab in labels]
    return graph_to_json(graph, labels=labels, colors=colors)


def parallel_sets_payload(model: ParallelSetsModel) -> dict:
    return model_to_payload(model)


def survival_payload(curves, result) -> dict:
    return comparison_to_payload(curves, result)
