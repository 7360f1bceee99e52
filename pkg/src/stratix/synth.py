"""Seeded synthetic two-modality cohorts with planted cluster and survival
structure, plus the adjusted Rand index used to score recovery.

Samples are laid out per combined subgroup (one cell per (a, b) subgroup
pair, n_per_subgroup samples each). Features are unit-variance Gaussians
whose per-feature mean is subgroup_index * separation, so "separation" is
the mean shift in units of the within-cluster sd. Survival times are
exponential with the cell's hazard; censoring is an independent exponential
whose rate is chosen so the expected censored fraction equals
censoring_rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .ingest import ExpressionMatrix, serialize_expression_matrix


@dataclass(frozen=True)
class SyntheticCohortSpec:
    n_per_subgroup: int
    subgroups_a: int
    subgroups_b: int
    features_a: int
    features_b: int
    separation: float
    hazards: tuple  # subgroups_a x subgroups_b, all > 0
    censoring_rate: float
    seed: int

    def __post_init__(self):
        if self.n_per_subgroup < 1:
            raise ValidationError("n_per_subgroup must be >= 1")
        if self.subgroups_a < 1 or self.subgroups_b < 1:
            raise ValidationError("subgroup counts must be >= 1")
        if self.features_a < 1 or self.features_b < 1:
            raise ValidationError("feature counts must be >= 1")
        if not math.isfinite(self.separation) or self.separation < 0:
            raise ValidationError("separation must be finite and >= 0")
        rows = tuple(tuple(float(h) for h in row) for row in self.hazards)
        object.__setattr__(self, "hazards", rows)
        if len(rows) != self.subgroups_a or any(
            len(row) != self.subgroups_b for row in rows
        ):
            raise ValidationError("hazards must be subgroups_a x subgroups_b")
        if any(h <= 0 or not math.isfinite(h) for row in rows for h in row):
            raise ValidationError("hazards must be > 0")
        if not 0.0 <= self.censoring_rate < 1.0:
            raise ValidationError("censoring_rate must be in [0, 1)")


@dataclass(frozen=True)
class GeneratedCohort:
    paths: dict
    sample_ids: tuple[str, ...]
    planted_a: np.ndarray
    planted_b: np.ndarray


def _blob_matrix(rng, modality: str, n_features: int, planted: np.ndarray,
                 separation: float, sample_ids) -> ExpressionMatrix:
    n = len(planted)
    values = rng.standard_normal((n_features, n))
    values += planted[np.newaxis, :] * separation
    feature_ids = tuple(f"{modality}_f{i:03d}" for i in range(n_features))
    return ExpressionMatrix(
        modality_name=modality,
        feature_ids=feature_ids,
        sample_ids=tuple(sample_ids),
        values=values,
    )


def generate_synthetic(spec: SyntheticCohortSpec, out_dir) -> GeneratedCohort:
    """Write matrix_a.csv, matrix_b.csv, clinical.csv, planted_labels.csv.

    Bit-deterministic per seed: one RNG stream, fixed draw order (features A,
    features B, survival, censoring).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(spec.seed)

    cells = [(ga, gb) for ga in range(spec.subgroups_a)
             for gb in range(spec.subgroups_b)]
    n = spec.n_per_subgroup * len(cells)
    planted_a = np.repeat([ga for ga, _ in cells], spec.n_per_subgroup)
    planted_b = np.repeat([gb for _, gb in cells], spec.n_per_subgroup)
    sample_ids = tuple(f"s{i:04d}" for i in range(n))

    matrix_a = _blob_matrix(rng, "a", spec.features_a, planted_a,
                            spec.separation, sample_ids)
    matrix_b = _blob_matrix(rng, "b", spec.features_b, planted_b,
                            spec.separation, sample_ids)

    hazard = np.array([spec.hazards[ga][gb]
                       for ga, gb in zip(planted_a, planted_b)])
    event_times = rng.exponential(1.0 / hazard)
    if spec.censoring_rate > 0:
        c_rate = hazard * spec.censoring_rate / (1.0 - spec.censoring_rate)
        censor_times = rng.exponential(1.0 / c_rate)
    else:
        censor_times = np.full(n, np.inf)
    observed = np.minimum(event_times, censor_times)
    status = (event_times <= censor_times).astype(int)

    paths = {
        "matrix_a": out / "matrix_a.csv",
        "matrix_b": out / "matrix_b.csv",
        "clinical": out / "clinical.csv",
        "planted_labels": out / "planted_labels.csv",
    }
    paths["matrix_a"].write_text(serialize_expression_matrix(matrix_a),
                                 encoding="utf-8")
    paths["matrix_b"].write_text(serialize_expression_matrix(matrix_b),
                                 encoding="utf-8")
    clinical_lines = ["sample_id,survival_time,survival_status"]
    clinical_lines += [
        f"{sid},{float(t)!r},{int(s)}"
        for sid, t, s in zip(sample_ids, observed, status)
    ]
    paths["clinical"].write_text("\n".join(clinical_lines) + "\n",
                                 encoding="utf-8")
    planted_lines = ["sample_id,subgroup_a,subgroup_b"]
    planted_lines += [
        f"{sid},{ga},{gb}"
        for sid, ga, gb in zip(sample_ids, planted_a, planted_b)
    ]
    paths["planted_labels"].write_text("\n".join(planted_lines) + "\n",
                                       encoding="utf-8")
    return GeneratedCohort(
        paths={k: str(v) for k, v in paths.items()},
        sample_ids=sample_ids,
        planted_a=planted_a,
        planted_b=planted_b,
    )


def adjusted_rand_index(labels_x, labels_y) -> float:
    """Chance-corrected pair-counting agreement between two labelings."""
    x = np.asarray(labels_x)
    y = np.asarray(labels_y)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError("labelings must be 1-D and equal length")
    n = len(x)
    if n < 2:
        raise ValidationError("need at least 2 samples")
    xs = {v: i for i, v in enumerate(sorted(set(x.tolist())))}
    ys = {v: i for i, v in enumerate(sorted(set(y.tolist())))}
    table = np.zeros((len(xs), len(ys)), dtype=np.int64)
    for xi, yi in zip(x.tolist(), y.tolist()):
        table[xs[xi], ys[yi]] += 1
    sum_cells = sum(math.comb(int(c), 2) for c in table.ravel())
    sum_rows = sum(math.comb(int(c), 2) for c in table.sum(axis=1))
    sum_cols = sum(math.comb(int(c), 2) for c in table.sum(axis=0))
    pairs = math.comb(n, 2)
    expected = sum_rows * sum_cols / pairs
    maximum = (sum_rows + sum_cols) / 2.0
    if maximum == expected:
        return 1.0  # both labelings trivial (single cluster or all singletons)
    return (sum_cells - expected) / (maximum - expected)
