"""Hot numeric kernels: pairwise distances, Lloyd steps, silhouette sums.

Each kernel has a numba ``@njit`` build and a pure-numpy build. The numba
build is used when numba imports cleanly and the environment variable
``STRATIX_NO_NUMBA`` is unset/falsy; otherwise the numpy build is selected.
Both builds compute the same quantities (identical up to floating-point
summation order). ``benchmarks/bench_kernels.py`` times the two side by side.
"""

from __future__ import annotations

import os

import numpy as np


def _flag_set(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


# ---------------------------------------------------------------------------
# pure-numpy builds
# ---------------------------------------------------------------------------

def pairwise_sq_dists_np(points: np.ndarray) -> np.ndarray:
    """All-pairs squared Euclidean distances for an (n, p) point array."""
    diff = points[:, None, :] - points[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def nearest_centroids_np(points: np.ndarray, centroids: np.ndarray):
    """Assign each point to its nearest centroid (ties -> lowest index).

    Returns (labels (n,), squared distance to the assigned centroid (n,)).
    """
    diff = points[:, None, :] - centroids[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    labels = np.argmin(d2, axis=1)
    return labels.astype(np.int64), d2[np.arange(points.shape[0]), labels]


def centroid_sums_np(points: np.ndarray, labels: np.ndarray, k: int):
    """Per-cluster coordinate sums and member counts."""
    n, p = points.shape
    sums = np.zeros((k, p))
    np.add.at(sums, labels, points)
    counts = np.bincount(labels, minlength=k).astype(np.int64)
    return sums, counts


def cluster_dist_sums_np(sq_dists: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    """sums[i, c] = sum of sq_dists[i, j] over points j in cluster c."""
    n = sq_dists.shape[0]
    sums = np.zeros((n, k))
    for c in range(k):
        sums[:, c] = sq_dists[:, labels == c].sum(axis=1)
    return sums


def hartigan_sweeps_np(points: np.ndarray, labels: np.ndarray,
                       centroids: np.ndarray, counts: np.ndarray,
                       max_sweeps: int, gain_tol: float) -> int:
    """Greedy single-point cluster moves with exact WCSS deltas.

    Sweeps points in index order; a point moves to the cluster with the
    cheapest insertion whenever removal gain minus that cost exceeds
    ``gain_tol``. Mutates labels, centroids, and counts in place and stops
    after a sweep with no move. Donors of size one are skipped so no
    cluster empties. Returns the total number of moves.
    """
    n = points.shape[0]
    moves = 0
    for _ in range(max_sweeps):
        moved = False
        for i in range(n):
            a = int(labels[i])
            if counts[a] <= 1.0:
                continue
            x = points[i]
            d2 = ((centroids - x) ** 2).sum(axis=1)
            removal = counts[a] / (counts[a] - 1.0) * d2[a]
            cost = counts / (counts + 1.0) * d2
            cost[a] = np.inf
            c = int(np.argmin(cost))
            if removal - cost[c] > gain_tol:
                centroids[a] = (counts[a] * centroids[a] - x) / (counts[a] - 1.0)
                centroids[c] = (counts[c] * centroids[c] + x) / (counts[c] + 1.0)
                counts[a] -= 1.0
                counts[c] += 1.0
                labels[i] = c
                moved = True
                moves += 1
        if not moved:
            break
    return moves


# ---------------------------------------------------------------------------
# numba builds
# ---------------------------------------------------------------------------

USING_NUMBA = False

if not _flag_set("STRATIX_NO_NUMBA"):
    try:
        from numba import njit

        USING_NUMBA = True
    except ImportError:
        USING_NUMBA = False

if USING_NUMBA:

    @njit(cache=True)
    def pairwise_sq_dists_nb(points):  # pragma: no cover - exercised via alias
        n, p = points.shape
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                s = 0.0
                for f in range(p):
                    d = points[i, f] - points[j, f]
                    s += d * d
                out[i, j] = s
                out[j, i] = s
        return out

    @njit(cache=True)
    def nearest_centroids_nb(points, centroids):  # pragma: no cover
        n, p = points.shape
        k = centroids.shape[0]
        labels = np.zeros(n, dtype=np.int64)
        dists = np.zeros(n)
        for i in range(n):
            best = np.inf
            best_c = 0
            for c in range(k):
                s = 0.0
                for f in range(p):
                    d = points[i, f] - centroids[c, f]
                    s += d * d
                if s < best:
                    best = s
                    best_c = c
            labels[i] = best_c
            dists[i] = best
        return labels, dists

    @njit(cache=True)
    def centroid_sums_nb(points, labels, k):  # pragma: no cover
        n, p = points.shape
        sums = np.zeros((k, p))
        counts = np.zeros(k, dtype=np.int64)
        for i in range(n):
            c = labels[i]
            counts[c] += 1
            for f in range(p):
                sums[c, f] += points[i, f]
        return sums, counts

    @njit(cache=True)
    def cluster_dist_sums_nb(sq_dists, labels, k):  # pragma: no cover
        n = sq_dists.shape[0]
        sums = np.zeros((n, k))
        for i in range(n):
            for j in range(n):
                sums[i, labels[j]] += sq_dists[i, j]
        return sums

    @njit(cache=True)
    def hartigan_sweeps_nb(points, labels, centroids, counts,
                           max_sweeps, gain_tol):  # pragma: no cover
        n, p = points.shape
        k = centroids.shape[0]
        moves = 0
        for _ in range(max_sweeps):
            moved = False
            for i in range(n):
                a = labels[i]
                if counts[a] <= 1.0:
                    continue
                s_a = 0.0
                for f in range(p):
                    d = points[i, f] - centroids[a, f]
                    s_a += d * d
                removal = counts[a] / (counts[a] - 1.0) * s_a
                best_cost = np.inf
                best_c = -1
                for c in range(k):
                    if c == a:
                        continue
                    s = 0.0
                    for f in range(p):
                        d = points[i, f] - centroids[c, f]
                        s += d * d
                    cost = counts[c] / (counts[c] + 1.0) * s
                    if cost < best_cost:
                        best_cost = cost
                        best_c = c
                if removal - best_cost > gain_tol:
                    for f in range(p):
                        centroids[a, f] = ((counts[a] * centroids[a, f]
                                            - points[i, f])
                                           / (counts[a] - 1.0))
                        centroids[best_c, f] = ((counts[best_c]
                                                 * centroids[best_c, f]
                                                 + points[i, f])
                                                / (counts[best_c] + 1.0))
                    counts[a] -= 1.0
                    counts[best_c] += 1.0
                    labels[i] = best_c
                    moved = True
                    moves += 1
            if not moved:
                break
        return moves

    pairwise_sq_dists = pairwise_sq_dists_nb
    nearest_centroids = nearest_centroids_nb
    centroid_sums = centroid_sums_nb
    cluster_dist_sums = cluster_dist_sums_nb
    hartigan_sweeps = hartigan_sweeps_nb
else:
    pairwise_sq_dists = pairwise_sq_dists_np
    nearest_centroids = nearest_centroids_np
    centroid_sums = centroid_sums_np
    cluster_dist_sums = cluster_dist_sums_np
    hartigan_sweeps = hartigan_sweeps_np
