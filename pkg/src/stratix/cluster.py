"""Cohort stratification within one feature view, plus scoring and layout.

Three algorithms: k-means (k-means++ seeding, Lloyd iterations), spectral
clustering (symmetric normalized Laplacian, row-normalized embedding), and
greedy modularity community detection on the thresholded similarity graph.
Every routine is deterministic given its inputs and seed; ties resolve to
the lowest index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ValidationError
from .features import FeatureView
from .graph import SimilarityGraph, adjacency, similarity_matrix, sparsify

METHODS = ("kmeans", "spectral", "community")

_LLOYD_MAX_ITER = 300
_LLOYD_REL_TOL = 1e-6
_KMEANS_RESTARTS = 16
_MOVE_GAIN_TOL = 1e-12
_MODULARITY_GAIN_TOL = 1e-12


@dataclass(frozen=True)
class Partition:
    """Assignment of every sample to exactly one of k non-empty clusters."""

    modality_name: str
    sample_ids: tuple[str, ...]
    labels: np.ndarray
    k: int
    method: str
    params: dict
    wcss: float | None = None

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", labels)
        if len(labels) != len(self.sample_ids):
            raise ValidationError("labels and sample_ids length mismatch")
        if len(labels) and (labels.min() < 0 or labels.max() >= self.k):
            raise ValidationError("labels out of range for k")
        counts = np.bincount(labels, minlength=self.k)
        if len(counts) != self.k or np.any(counts == 0):
            raise ValidationError("labels must cover every cluster 0..k-1")
        labels.setflags(write=False)

    def cluster_sizes(self) -> tuple[int, ...]:
        return tuple(int(c) for c in np.bincount(self.labels, minlength=self.k))

    def members(self, cluster: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.labels == cluster))


@dataclass(frozen=True)
class SilhouetteReport:
    sample_ids: tuple[str, ...]
    labels: np.ndarray
    values: np.ndarray
    cluster_order: tuple[tuple[int, ...], ...]
    cluster_means: tuple[float, ...]
    mean: float


@dataclass(frozen=True)
class HeatmapLayout:
    """Column permutation grouping samples into per-cluster blocks."""

    sample_ids: tuple[str, ...]
    feature_ids: tuple[str, ...]
    column_order: tuple[int, ...]
    blocks: tuple[tuple[int, int, int], ...]  # (cluster, start, size)


# ---------------------------------------------------------------------------
# k-means
# ---------------------------------------------------------------------------

def _plus_plus_init(points: np.ndarray, k: int,
                    rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    first = int(rng.integers(n))
    centroids[0] = points[first]
    if k == 1:
        return centroids
    d2 = np.einsum("ij,ij->i", points - centroids[0], points - centroids[0])
    for c in range(1, k):
        total = d2.sum()
        probs = d2 / total
        idx = int(rng.choice(n, p=probs))
        centroids[c] = points[idx]
        cand = np.einsum("ij,ij->i", points - centroids[c],
                         points - centroids[c])
        d2 = np.minimum(d2, cand)
    return centroids


def _repair_empty_clusters(points, centroids, labels, dists, k):
    # A cluster that lost all members is reseeded with the point currently
    # farthest from its assigned centroid; sole members of other clusters
    # are not eligible donors.
    counts = np.bincount(labels, minlength=k)
    for c in range(k):
        if counts[c] > 0:
            continue
        eligible = counts[labels] > 1
        candidates = np.where(eligible, dists, -np.inf)
        donor = int(np.argmax(candidates))
        counts[labels[donor]] -= 1
        labels[donor] = c
        counts[c] = 1
        centroids[c] = points[donor]
        dists[donor] = 0.0
    return labels, dists


def _random_partition(points: np.ndarray, k: int,
                      rng: np.random.Generator):
    # random k-way assignment with every cluster non-empty; refining it
    # in place reaches basins no choice of k seed points reaches
    n = points.shape[0]
    labels = rng.integers(0, k, size=n)
    labels[rng.permutation(n)[:k]] = np.arange(k)
    labels = labels.astype(np.int64)
    sums, counts = _kernels.centroid_sums(points, labels, k)
    return labels, sums / counts[:, None]


def _lloyd_iterate(points: np.ndarray, k: int, centroids: np.ndarray):
    n = points.shape[0]
    prev = np.inf
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(_LLOYD_MAX_ITER):
        labels, dists = _kernels.nearest_centroids(points, centroids)
        labels, dists = _repair_empty_clusters(points, centroids, labels,
                                               dists, k)
        sums, counts = _kernels.centroid_sums(points, labels, k)
        centroids = sums / counts[:, None]
        wcss = float(np.einsum("ij,ij->", points - centroids[labels],
                               points - centroids[labels]))
        assert wcss <= prev * (1 + 1e-9) + 1e-12, "WCSS increased"
        if wcss == 0.0 or (np.isfinite(prev) and prev - wcss < _LLOYD_REL_TOL * prev):
            break
        prev = wcss
    return labels, centroids, wcss


def _hartigan_polish(points: np.ndarray, labels: np.ndarray,
                     centroids: np.ndarray, k: int):
    """Single-point moves with the exact WCSS delta until none improves.

    A Lloyd fixed point can still admit an improving single-point move
    because the exact delta accounts for the centroid shift the move causes,
    so this strictly extends what Lloyd alone converges to. Moves that would
    empty a cluster are skipped to keep exactly k clusters.
    """
    counts = np.bincount(labels, minlength=k).astype(np.float64)
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    centroids = np.ascontiguousarray(centroids)
    _kernels.hartigan_sweeps(points, labels, centroids, counts,
                             _LLOYD_MAX_ITER, _MOVE_GAIN_TOL)
    # exact recompute clears the incremental-update float drift
    sums, cts = _kernels.centroid_sums(points, labels, k)
    centroids = sums / cts[:, None]
    wcss = float(np.einsum("ij,ij->", points - centroids[labels],
                           points - centroids[labels]))
    return labels, centroids, wcss


def lloyd(points: np.ndarray, k: int, seed: int):
    """Best of several seeded Lloyd runs, each refined by single-point moves.

    Even restarts run Lloyd from a k-means++ init and then polish the fixed
    point; odd restarts polish a random k-way partition directly, which
    reaches optima whose basins contain no point-seeded init. Every Lloyd
    run stops when the relative WCSS improvement drops below 1e-6 or after
    300 iterations, and the lowest-WCSS result wins (first found on ties).
    One RNG stream seeds every restart, so the output is bit-identical for
    identical (points, k, seed). Returns (labels, centroids, wcss).
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValidationError(f"k={k} out of range 1..{n}")
    n_distinct = np.unique(points, axis=0).shape[0]
    if n_distinct < k:
        raise ValidationError(
            f"only {n_distinct} distinct points available for k={k}"
        )
    rng = np.random.default_rng(seed)
    best = None
    for idx in range(_KMEANS_RESTARTS):
        if idx % 2 == 0:
            init = _plus_plus_init(points, k, rng)
            labels, centroids, wcss = _lloyd_iterate(points, k, init)
        else:
            labels, centroids = _random_partition(points, k, rng)
        if k > 1:
            labels, centroids, wcss = _hartigan_polish(points, labels,
                                                       centroids, k)
        else:
            wcss = float(np.einsum("ij,ij->", points - centroids[labels],
                                   points - centroids[labels]))
        if best is None or wcss < best[2]:
            best = (labels, centroids, wcss)
        if best[2] == 0.0 or k == 1:
            break
    return best


def kmeans(view: FeatureView, k: int, seed: int) -> Partition:
    """Cluster the view's samples (points = samples, coordinates = features)."""
    labels, _, wcss = lloyd(view.sample_coordinates(), k, seed)
    return Partition(
        modality_name=view.modality_name,
        sample_ids=view.sample_ids,
        labels=labels,
        k=k,
        method="kmeans",
        params={"k": k, "seed": seed},
        wcss=wcss,
    )


# ---------------------------------------------------------------------------
# spectral
# ---------------------------------------------------------------------------

def spectral_embedding(weights: np.ndarray, k: int) -> np.ndarray:
    """Row-normalized eigenvectors of the k smallest eigenvalues of
    L = I - D^(-1/2) W D^(-1/2). Zero-degree rows get a tiny degree guard;
    zero embedding rows are left as zero.
    """
    n = weights.shape[0]
    degrees = weights.sum(axis=1)
    degrees = np.where(degrees > 1e-12, degrees, 1e-12)
    inv_sqrt = 1.0 / np.sqrt(degrees)
    lap = -inv_sqrt[:, None] * weights * inv_sqrt[None, :]
    lap[np.diag_indices(n)] += 1.0
    lap = (lap + lap.T) / 2.0
    try:
        _, vecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError as exc:
        raise ValidationError(f"eigen-solver failed: {exc}") from exc
    emb = vecs[:, :k]
    norms = np.linalg.norm(emb, axis=1, keepdims=True)
    norms = np.where(norms == 0, 1.0, norms)
    return emb / norms


def spectral(view: FeatureView, k: int, metric: str, seed: int,
             threshold: float | None = None) -> Partition:
    """Spectral clustering of the samples.

    The weight matrix is the sample-similarity matrix (self-similarities
    excluded); with ``threshold`` set, it is first sparsified exactly like
    the population-graph view, so the algorithm sees the same graph the
    analyst does.
    """
    n = view.n_samples
    if not 2 <= k <= n:
        raise ValidationError(f"k={k} out of range 2..{n}")
    sims = similarity_matrix(view, metric)
    if threshold is None:
        weights = np.array(sims.values)
        np.fill_diagonal(weights, 0.0)
    else:
        weights = adjacency(sparsify(sims, threshold))
    embedding = spectral_embedding(weights, k)
    labels, _, _ = lloyd(embedding, k, seed)
    params = {"k": k, "seed": seed, "metric": metric}
    if threshold is not None:
        params["threshold"] = threshold
    return Partition(
        modality_name=view.modality_name,
        sample_ids=view.sample_ids,
        labels=labels,
        k=k,
        method="spectral",
        params=params,
    )


# ---------------------------------------------------------------------------
# community detection
# ---------------------------------------------------------------------------

def modularity(graph: SimilarityGraph, labels) -> float:
    """Newman modularity of a vertex partition of the weighted graph."""
    labels = np.asarray(labels)
    two_m = 2.0 * sum(w for _, _, w in graph.edges)
    if two_m == 0:
        raise ValidationError("modularity undefined for an edgeless graph")
    strength = np.zeros(graph.n_vertices)
    internal = 0.0
    for i, j, w in graph.edges:
        strength[i] += w
        strength[j] += w
        if labels[i] == labels[j]:
            internal += 2.0 * w
    q = internal / two_m
    for c in np.unique(labels):
        tot = strength[labels == c].sum()
        q -= (tot / two_m) ** 2
    return float(q)


def _louvain_level(adj: list[dict], m: float, order: list[int],
                   init: list[int] | None = None):
    """One Louvain level: repeated local moves until no positive gain.

    ``adj`` holds full matrix entries: adj[i][j] is the i-j weight, stored in
    both directions, and adj[i][i] is the whole diagonal entry (twice the
    collapsed internal weight of an aggregated node). ``init`` warm-starts
    the moves from an existing assignment instead of singletons; a spare
    empty community is kept available so any node can still go solo.
    Returns the community id per node (not renumbered).
    """
    n = len(adj)
    strength = [sum(nbrs.values()) for nbrs in adj]
    community = list(range(n)) if init is None else list(init)
    spare = max(community) + 1
    comm_total = [0.0] * (spare + 1)
    for node, c in enumerate(community):
        comm_total[c] += strength[node]
    improved_any = False
    moved = True
    while moved:
        moved = False
        for node in order:
            old = community[node]
            k_i = strength[node]
            comm_total[old] -= k_i
            community[node] = -1
            # weight from node to each adjacent community (self-loop excluded)
            link: dict[int, float] = {}
            for nbr, w in adj[node].items():
                if nbr == node:
                    continue
                c = community[nbr]
                link[c] = link.get(c, 0.0) + w
            best_comm, best_gain = old, link.get(old, 0.0) - comm_total[old] * k_i / (2.0 * m)
            for c in sorted(link):
                gain = link[c] - comm_total[c] * k_i / (2.0 * m)
                if gain > best_gain + _MODULARITY_GAIN_TOL:
                    best_comm, best_gain = c, gain
            if 0.0 > best_gain + _MODULARITY_GAIN_TOL:  # spare is always empty
                best_comm = spare
            community[node] = best_comm
            comm_total[best_comm] += k_i
            if best_comm == spare:
                spare = len(comm_total)
                comm_total.append(0.0)
            if best_comm != old:
                moved = True
                improved_any = True
    return community, improved_any


def _aggregate(adj: list[dict], community: list[int]):
    """Collapse communities into super-nodes, keeping total matrix weight.

    Every directed entry is accumulated, so internal i-j edges land twice on
    the new diagonal, matching the full-matrix diagonal convention.
    """
    ids = sorted(set(community))
    remap = {c: i for i, c in enumerate(ids)}
    new_adj: list[dict] = [dict() for _ in ids]
    for node, nbrs in enumerate(adj):
        cn = remap[community[node]]
        for nbr, w in nbrs.items():
            cm = remap[community[nbr]]
            new_adj[cn][cm] = new_adj[cn].get(cm, 0.0) + w
    return new_adj, remap


def _louvain(graph: SimilarityGraph, order_rng: np.random.Generator,
             init: list[int] | None = None):
    n = graph.n_vertices
    adj: list[dict] = [dict() for _ in range(n)]
    for i, j, w in graph.edges:
        adj[i][j] = adj[i].get(j, 0.0) + w
        adj[j][i] = adj[j].get(i, 0.0) + w
    m = sum(w for _, _, w in graph.edges)
    membership = list(range(n))  # original node -> current super-node
    warm = init is not None
    while True:
        order = list(range(len(adj)))
        order_rng.shuffle(order)
        community, improved = _louvain_level(adj, m, order,
                                             init if warm else None)
        # a warm level that moved nothing still defines the aggregation
        if not improved and not warm:
            break
        warm = False
        adj, remap = _aggregate(adj, community)
        membership = [remap[community[node]] for node in membership]
        if len(adj) == 1:
            break
    return membership


def community_detect(graph: SimilarityGraph, seed: int,
                     restarts: int = 16) -> Partition:
    """Greedy modularity maximization on the thresholded similarity graph.

    Runs Louvain-style local moves + aggregation under ``restarts`` seeded
    tries and keeps the highest-modularity result (first wins ties).
    Alternate tries warm-start from a random partition instead of
    singletons: some optima are unreachable from singletons under any visit
    order, so order shuffling alone plateaus below the maximum on small
    graphs. The number of communities is emergent. Isolated vertices become
    singleton communities.
    """
    if graph.n_edges == 0:
        raise ValidationError("community detection needs at least one edge")
    n = graph.n_vertices
    seeds = np.random.SeedSequence(seed).spawn(max(1, restarts))
    best_labels = None
    best_q = -np.inf
    for idx, sub in enumerate(seeds):
        rng = np.random.default_rng(sub)
        init = None
        if idx % 2 == 1:
            groups = int(rng.integers(1, n + 1))
            init = [int(c) for c in rng.integers(0, groups, size=n)]
        membership = _louvain(graph, rng, init=init)
        labels = _canonical_labels(membership)
        q = modularity(graph, labels)
        if q > best_q + _MODULARITY_GAIN_TOL:
            best_q = q
            best_labels = labels
    k = int(best_labels.max()) + 1
    return Partition(
        modality_name="",
        sample_ids=graph.sample_ids,
        labels=best_labels,
        k=k,
        method="community",
        params={"seed": seed, "threshold": graph.threshold,
                "metric": graph.metric, "restarts": restarts},
    )


def _canonical_labels(membership) -> np.ndarray:
    """Renumber community ids to 0..k-1 by first appearance."""
    remap: dict[int, int] = {}
    out = np.empty(len(membership), dtype=np.int64)
    for idx, c in enumerate(membership):
        if c not in remap:
            remap[c] = len(remap)
        out[idx] = remap[c]
    return out


# ---------------------------------------------------------------------------
# scoring and layout
# ---------------------------------------------------------------------------

def silhouette(view: FeatureView, partition: Partition) -> SilhouetteReport:
    """Per-sample silhouette widths under squared Euclidean dissimilarity.

    a(i) = mean dissimilarity to the other members of i's cluster; b(i) =
    the smallest mean dissimilarity to any other cluster; s(i) =
    (b - a) / max(a, b), with s(i) = 0 for singletons and for a = b = 0.
    """
    _check_cover(view, partition)
    if partition.k < 2:
        raise ValidationError("silhouette needs k >= 2")
    points = view.sample_coordinates()
    n = points.shape[0]
    labels = partition.labels
    k = partition.k
    d2 = _kernels.pairwise_sq_dists(points)
    sums = _kernels.cluster_dist_sums(d2, labels, k)
    counts = np.bincount(labels, minlength=k)
    values = np.zeros(n)
    for i in range(n):
        own = labels[i]
        if counts[own] == 1:
            continue  # singleton convention: s = 0
        a = sums[i, own] / (counts[own] - 1)
        b = np.inf
        for c in range(k):
            if c == own:
                continue
            b = min(b, sums[i, c] / counts[c])
        top = b - a
        bottom = max(a, b)
        values[i] = 0.0 if bottom == 0.0 else top / bottom
    cluster_order = []
    cluster_means = []
    for c in range(k):
        members = np.flatnonzero(labels == c)
        # descending s within the cluster; ties keep sample order
        ranked = members[np.argsort(-values[members], kind="stable")]
        cluster_order.append(tuple(int(i) for i in ranked))
        cluster_means.append(float(values[members].mean()))
    return SilhouetteReport(
        sample_ids=view.sample_ids,
        labels=labels,
        values=values,
        cluster_order=tuple(cluster_order),
        cluster_means=tuple(cluster_means),
        mean=float(values.mean()),
    )


def heatmap_order(view: FeatureView, partition: Partition) -> HeatmapLayout:
    """Column order for the blocked heatmap: clusters in label order, members
    by ascending Euclidean distance to their cluster centroid, ties by
    sample id.
    """
    _check_cover(view, partition)
    points = view.sample_coordinates()
    labels = partition.labels
    order: list[int] = []
    blocks: list[tuple[int, int, int]] = []
    for c in range(partition.k):
        members = np.flatnonzero(labels == c)
        centroid = points[members].mean(axis=0)
        dists = np.linalg.norm(points[members] - centroid, axis=1)
        ranked = sorted(
            range(len(members)),
            key=lambda idx: (dists[idx], view.sample_ids[members[idx]]),
        )
        blocks.append((c, len(order), len(members)))
        order.extend(int(members[idx]) for idx in ranked)
    return HeatmapLayout(
        sample_ids=view.sample_ids,
        feature_ids=view.feature_ids,
        column_order=tuple(order),
        blocks=tuple(blocks),
    )


def _check_cover(view: FeatureView, partition: Partition) -> None:
    if partition.sample_ids != view.sample_ids:
        raise ValidationError("partition does not cover the view's samples")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def partition_to_csv(partition: Partition) -> str:
    lines = ["sample_id,label"]
    lines += [f"{sid},{int(lab)}" for sid, lab in
              zip(partition.sample_ids, partition.labels)]
    return "\n".join(lines) + "\n"


def partition_sidecar(partition: Partition) -> dict:
    return {
        "modality_name": partition.modality_name,
        "method": partition.method,
        "params": partition.params,
        "k": partition.k,
        "wcss": partition.wcss,
        "cluster_sizes": list(partition.cluster_sizes()),
    }
