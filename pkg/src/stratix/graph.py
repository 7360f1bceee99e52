"""Sample-similarity matrices and their thresholded population graphs.

Similarities are oriented so that higher always means more similar: Pearson
correlation is used as-is, Euclidean distance d is mapped to 1/(1+d). A
single global threshold then keeps only strictly-exceeding edges, so one
slider semantic covers both metrics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ValidationError
from .features import FeatureView

METRICS = ("pearson", "euclidean")


@dataclass(frozen=True)
class SimilarityMatrix:
    sample_ids: tuple[str, ...]
    metric: str
    values: np.ndarray

    def __post_init__(self):
        n = len(self.sample_ids)
        if self.values.shape != (n, n):
            raise ValidationError("similarity matrix shape mismatch")
        self.values.setflags(write=False)


@dataclass(frozen=True)
class SimilarityGraph:
    """Vertices are all samples; edges are the pairs above the threshold."""

    sample_ids: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]
    threshold: float
    metric: str

    @property
    def n_vertices(self) -> int:
        return len(self.sample_ids)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class GraphSummary:
    n_vertices: int
    n_edges: int
    n_components: int
    component_sizes: tuple[int, ...]
    degree_histogram: dict


def similarity_matrix(view: FeatureView, metric: str) -> SimilarityMatrix:
    """Pairwise sample similarity in the view's feature space.

    pearson: correlation of the samples' feature vectors (every sample must
    have nonzero variance across the selected features). euclidean: distance
    mapped through 1/(1+d), giving entries in (0, 1].
    """
    if metric not in METRICS:
        raise ValidationError(f"unknown metric {metric!r}; expected one of {METRICS}")
    n = view.n_samples
    if n < 2:
        raise ValidationError("similarity needs at least 2 samples")
    points = view.sample_coordinates()
    if metric == "pearson":
        flat = points.std(axis=1) == 0
        if np.any(flat):
            bad = [view.sample_ids[i] for i in np.flatnonzero(flat)]
            raise ValidationError(
                "zero-variance sample(s) under pearson metric",
                detail={"sample_ids": bad},
            )
        sims = np.corrcoef(points)
        sims = np.clip(sims, -1.0, 1.0)
    else:
        d = np.sqrt(np.maximum(_kernels.pairwise_sq_dists(points), 0.0))
        sims = 1.0 / (1.0 + d)
    sims = (sims + sims.T) / 2.0
    np.fill_diagonal(sims, 1.0)
    return SimilarityMatrix(sample_ids=view.sample_ids, metric=metric, values=sims)


def sparsify(matrix: SimilarityMatrix, threshold: float) -> SimilarityGraph:
    """Keep exactly the off-diagonal pairs with similarity strictly above the
    threshold. Vertices always include every sample; isolated vertices are fine.
    """
    n = len(matrix.sample_ids)
    edges = []
    vals = matrix.values
    for i in range(n):
        for j in range(i + 1, n):
            w = float(vals[i, j])
            if w > threshold:
                edges.append((i, j, w))
    return SimilarityGraph(
        sample_ids=matrix.sample_ids,
        edges=tuple(edges),
        threshold=float(threshold),
        metric=matrix.metric,
    )


def adjacency(graph: SimilarityGraph) -> np.ndarray:
    """Dense symmetric weight matrix of the graph (zero diagonal)."""
    n = graph.n_vertices
    w = np.zeros((n, n))
    for i, j, weight in graph.edges:
        w[i, j] = weight
        w[j, i] = weight
    return w


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def connected_components(graph: SimilarityGraph) -> list[list[int]]:
    """Vertex index lists, one per component, ordered by smallest member."""
    uf = _UnionFind(graph.n_vertices)
    for i, j, _ in graph.edges:
        uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for v in range(graph.n_vertices):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values(), key=lambda g: g[0])


def graph_summary(graph: SimilarityGraph) -> GraphSummary:
    degrees = [0] * graph.n_vertices
    for i, j, _ in graph.edges:
        degrees[i] += 1
        degrees[j] += 1
    hist: dict[int, int] = {}
    for d in degrees:
        hist[d] = hist.get(d, 0) + 1
    comps = connected_components(graph)
    return GraphSummary(
        n_vertices=graph.n_vertices,
        n_edges=graph.n_edges,
        n_components=len(comps),
        component_sizes=tuple(sorted((len(c) for c in comps), reverse=True)),
        degree_histogram=dict(sorted(hist.items())),
    )


def graph_to_json(graph: SimilarityGraph, labels=None, colors=None) -> dict:
    """The node/link shape consumed by the UI force layout.

    ``labels`` (per-vertex cluster index) and ``colors`` (per-vertex hex
    string) are optional; absent values serialize as null.
    """
    nodes = []
    for idx, sid in enumerate(graph.sample_ids):
        node = {
            "id": sid,
            "cluster": int(labels[idx]) if labels is not None else None,
        }
        if colors is not None:
            node["color"] = colors[idx]
        nodes.append(node)
    links = [
        {
            "source": graph.sample_ids[i],
            "target": graph.sample_ids[j],
            "weight": w,
        }
        for i, j, w in graph.edges
    ]
    return {
        "metric": graph.metric,
        "threshold": graph.threshold,
        "nodes": nodes,
        "links": links,
    }
