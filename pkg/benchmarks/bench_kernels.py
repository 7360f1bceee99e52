"""Time the numba kernel builds against the numpy fallbacks.

Run with the package importable (pip install -e .):

    python3 benchmarks/bench_kernels.py --reps 5

The numba builds compile on first call; a warm-up call is excluded from
every measurement so the table compares steady-state throughput.
"""

import argparse
import time

import numpy as np

from stratix import _kernels
from stratix._kernels import (
    centroid_sums_np,
    cluster_dist_sums_np,
    hartigan_sweeps_np,
    nearest_centroids_np,
    pairwise_sq_dists_np,
)


def _time(fn, reps):
    fn()  # warm-up: triggers jit compilation on the numba build
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(n, p, k, seed=0):
    rng = np.random.default_rng(seed)
    points = rng.normal(size=(n, p))
    centroids = rng.normal(size=(k, p))
    labels = rng.integers(0, k, size=n).astype(np.int64)
    labels[:k] = np.arange(k)
    sq = pairwise_sq_dists_np(points)
    sums, cts = centroid_sums_np(points, labels, k)
    cents_of = sums / cts[:, None]

    def hartigan(fn):
        def run():
            fn(points.copy(), labels.copy(), cents_of.copy(),
               cts.astype(np.float64), 300, 1e-12)
        return run

    cases = [
        ("pairwise_sq_dists", lambda: pairwise_sq_dists_np(points),
         lambda: _kernels.pairwise_sq_dists_nb(points)),
        ("nearest_centroids", lambda: nearest_centroids_np(points, centroids),
         lambda: _kernels.nearest_centroids_nb(points, centroids)),
        ("centroid_sums", lambda: centroid_sums_np(points, labels, k),
         lambda: _kernels.centroid_sums_nb(points, labels, k)),
        ("cluster_dist_sums", lambda: cluster_dist_sums_np(sq, labels, k),
         lambda: _kernels.cluster_dist_sums_nb(sq, labels, k)),
        ("hartigan_sweeps", hartigan(hartigan_sweeps_np),
         hartigan(_kernels.hartigan_sweeps_nb)),
    ]
    return cases


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=5,
                        help="timed repetitions per kernel (best is kept)")
    parser.add_argument("--sizes", default="200x20x4,1000x50x8",
                        help="comma list of NxPxK problem sizes")
    args = parser.parse_args()

    if not _kernels.USING_NUMBA:
        raise SystemExit(
            "numba build inactive (STRATIX_NO_NUMBA set or numba missing); "
            "nothing to compare")

    print(f"{'kernel':<20} {'size':<14} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for spec_str in args.sizes.split(","):
        n, p, k = (int(v) for v in spec_str.strip().split("x"))
        for name, np_fn, nb_fn in _cases(n, p, k):
            t_np = _time(np_fn, args.reps)
            t_nb = _time(nb_fn, args.reps)
            print(f"{name:<20} {spec_str.strip():<14} "
                  f"{t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms "
                  f"{t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
