"""Parsing, validation, normalization, and alignment of the cohort inputs.

Two expression matrices (features x samples, CSV or TSV) and one clinical
table are parsed independently, then aligned onto the sorted intersection of
their sample ids. All resulting objects are immutable.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError


def _detect_delimiter(header_line: str) -> str:
    # Tab wins if present anywhere in the header; otherwise comma.
    return "\t" if "\t" in header_line else ","


def _find_duplicate(ids) -> str | None:
    seen = set()
    for x in ids:
        if x in seen:
            return x
        seen.add(x)
    return None


@dataclass(frozen=True)
class ExpressionMatrix:
    """One modality's features-x-samples value matrix plus transform flags."""

    modality_name: str
    feature_ids: tuple[str, ...]
    sample_ids: tuple[str, ...]
    values: np.ndarray
    transform_log: bool = False
    transform_zscore: bool = False

    def __post_init__(self):
        if not self.feature_ids:
            raise ValidationError("expression matrix has no features")
        if not self.sample_ids:
            raise ValidationError("expression matrix has no samples")
        dup = _find_duplicate(self.feature_ids)
        if dup is not None:
            raise ValidationError(f"duplicate feature id {dup!r}")
        dup = _find_duplicate(self.sample_ids)
        if dup is not None:
            raise ValidationError(f"duplicate sample id {dup!r}")
        if self.values.shape != (len(self.feature_ids), len(self.sample_ids)):
            raise ValidationError(
                f"value shape {self.values.shape} does not match "
                f"{len(self.feature_ids)} features x {len(self.sample_ids)} samples"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("expression matrix contains non-finite values")
        self.values.setflags(write=False)

    @property
    def n_features(self) -> int:
        return len(self.feature_ids)

    @property
    def n_samples(self) -> int:
        return len(self.sample_ids)

    def column_index(self, sample_id: str) -> int:
        try:
            return self.sample_ids.index(sample_id)
        except ValueError:
            raise ValidationError(f"unknown sample id {sample_id!r}") from None


@dataclass(frozen=True)
class ClinicalRecord:
    sample_id: str
    survival_time: float
    survival_status: int
    age: float | None = None
    tumor_grade: int | None = None


@dataclass(frozen=True)
class ClinicalTable:
    """Per-sample clinical records, keyed and iterable in insertion order."""

    records: tuple[ClinicalRecord, ...]
    _by_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_id = {}
        for rec in self.records:
            if rec.sample_id in by_id:
                raise ValidationError(f"duplicate sample id {rec.sample_id!r}")
            if rec.survival_time < 0:
                raise ValidationError(
                    f"negative survival_time for {rec.sample_id!r}"
                )
            if rec.survival_status not in (0, 1):
                raise ValidationError(
                    f"survival_status must be 0 or 1 for {rec.sample_id!r}"
                )
            by_id[rec.sample_id] = rec
        object.__setattr__(self, "_by_id", by_id)

    @property
    def sample_ids(self) -> tuple[str, ...]:
        return tuple(r.sample_id for r in self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __contains__(self, sample_id: str) -> bool:
        return sample_id in self._by_id

    def __getitem__(self, sample_id: str) -> ClinicalRecord:
        try:
            return self._by_id[sample_id]
        except KeyError:
            raise ValidationError(f"unknown sample id {sample_id!r}") from None

    def subset(self, sample_ids) -> "ClinicalTable":
        return ClinicalTable(tuple(self[s] for s in sample_ids))


@dataclass(frozen=True)
class Cohort:
    """The aligned triple: both matrices and clinical over one ordered id list."""

    matrix_a: ExpressionMatrix
    matrix_b: ExpressionMatrix
    clinical: ClinicalTable
    sample_ids: tuple[str, ...]
    dropped: dict

    def __post_init__(self):
        if len(self.sample_ids) < 2:
            raise ValidationError("cohort needs at least 2 samples")
        for view in (self.matrix_a.sample_ids, self.matrix_b.sample_ids,
                     self.clinical.sample_ids):
            if view != self.sample_ids:
                raise ValidationError("cohort views disagree on sample order")


def parse_expression_matrix(text: str, modality_name: str) -> ExpressionMatrix:
    """Parse a delimiter-separated features-x-samples table.

    First header cell names the feature-id column; the remaining header cells
    are sample ids; each body row is one feature. Delimiter is auto-detected
    (tab if the header contains one, else comma). Any unparseable or
    non-finite cell is an error.
    """
    stream = io.StringIO(text)
    first_line = stream.readline()
    if not first_line.strip():
        raise ParseError("empty input: no header row")
    delim = _detect_delimiter(first_line)
    reader = csv.reader(io.StringIO(text), delimiter=delim)
    header = next(reader)
    sample_ids = [c.strip() for c in header[1:]]
    if not sample_ids or any(s == "" for s in sample_ids):
        raise ParseError("header must list at least one non-empty sample id")
    dup = _find_duplicate(sample_ids)
    if dup is not None:
        raise ParseError(f"duplicate sample id {dup!r} in header")

    feature_ids: list[str] = []
    rows: list[list[float]] = []
    width = len(header)
    for line_no, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and row[0].strip() == ""):
            continue  # ignore blank lines
        if len(row) != width:
            raise ParseError(
                f"line {line_no}: expected {width} cells, got {len(row)}"
            )
        fid = row[0].strip()
        if fid == "":
            raise ParseError(f"line {line_no}: empty feature id")
        values = []
        for col, cell in enumerate(row[1:], start=2):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(
                    f"line {line_no}, column {col}: non-numeric cell {cell!r}"
                ) from None
            if not math.isfinite(v):
                raise ParseError(
                    f"line {line_no}, column {col}: non-finite cell {cell!r}"
                )
            values.append(v)
        feature_ids.append(fid)
        rows.append(values)
    if not rows:
        raise ParseError("empty body: no feature rows")
    dup = _find_duplicate(feature_ids)
    if dup is not None:
        raise ParseError(f"duplicate feature id {dup!r}")
    return ExpressionMatrix(
        modality_name=modality_name,
        feature_ids=tuple(feature_ids),
        sample_ids=tuple(sample_ids),
        values=np.array(rows, dtype=np.float64),
    )


def serialize_expression_matrix(matrix: ExpressionMatrix, delimiter: str = ",",
                                id_column: str = "id") -> str:
    """Inverse of :func:`parse_expression_matrix`; cell-exact round trip."""
    lines = [delimiter.join([id_column, *matrix.sample_ids])]
    for i, fid in enumerate(matrix.feature_ids):
        cells = [repr(float(v)) for v in matrix.values[i]]
        lines.append(delimiter.join([fid, *cells]))
    return "\n".join(lines) + "\n"


def _parse_optional_float(cell: str, what: str, line_no: int) -> float | None:
    cell = cell.strip()
    if cell == "" or cell.upper() in ("NA", "NAN", "NULL", "NONE"):
        return None
    try:
        return float(cell)
    except ValueError:
        raise ParseError(f"line {line_no}: non-numeric {what} {cell!r}") from None


def parse_clinical_table(text: str) -> ClinicalTable:
    """Parse the clinical CSV/TSV.

    Required columns: sample_id, survival_time, survival_status.
    Optional: age, tumor_grade (blank/NA cells stored as absent).
    """
    stream = io.StringIO(text)
    first_line = stream.readline()
    if not first_line.strip():
        raise ParseError("empty input: no header row")
    delim = _detect_delimiter(first_line)
    reader = csv.reader(io.StringIO(text), delimiter=delim)
    header = [c.strip() for c in next(reader)]
    col = {name: i for i, name in enumerate(header)}
    for required in ("sample_id", "survival_time", "survival_status"):
        if required not in col:
            raise ParseError(f"missing required column {required!r}")

    records: list[ClinicalRecord] = []
    seen: set[str] = set()
    for line_no, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and row[0].strip() == ""):
            continue
        if len(row) != len(header):
            raise ParseError(
                f"line {line_no}: expected {len(header)} cells, got {len(row)}"
            )
        sid = row[col["sample_id"]].strip()
        if sid == "":
            raise ParseError(f"line {line_no}: empty sample_id")
        if sid in seen:
            raise ParseError(f"duplicate sample_id {sid!r}")
        seen.add(sid)
        try:
            time = float(row[col["survival_time"]])
        except ValueError:
            raise ParseError(
                f"line {line_no}: non-numeric survival_time"
            ) from None
        if not math.isfinite(time) or time < 0:
            raise ParseError(f"line {line_no}: negative survival_time")
        status_cell = row[col["survival_status"]].strip()
        if status_cell not in ("0", "1"):
            raise ParseError(
                f"line {line_no}: survival_status must be 0 or 1, got {status_cell!r}"
            )
        age = (_parse_optional_float(row[col["age"]], "age", line_no)
               if "age" in col else None)
        if age is not None and age < 0:
            raise ParseError(f"line {line_no}: negative age")
        grade = None
        if "tumor_grade" in col:
            raw = _parse_optional_float(row[col["tumor_grade"]], "tumor_grade",
                                        line_no)
            if raw is not None:
                if raw != int(raw):
                    raise ParseError(f"line {line_no}: non-integer tumor_grade")
                grade = int(raw)
        records.append(ClinicalRecord(sid, time, int(status_cell), age, grade))
    if not records:
        raise ParseError("empty body: no clinical rows")
    return ClinicalTable(tuple(records))


def normalize(matrix: ExpressionMatrix, log_transform: bool,
              zscore: bool) -> ExpressionMatrix:
    """Apply log2(x+1) and/or per-feature standardization.

    z-scoring uses the sample standard deviation (ddof=1); zero-variance rows
    become all-zero rows instead of erroring. With both flags false the input
    is returned unchanged.
    """
    if not log_transform and not zscore:
        return matrix
    values = np.array(matrix.values, dtype=np.float64)
    if log_transform:
        if np.any(values < 0):
            raise ValidationError(
                "log transform requires non-negative values"
            )
        values = np.log2(values + 1.0)
    if zscore:
        means = values.mean(axis=1, keepdims=True)
        if values.shape[1] > 1:
            sds = values.std(axis=1, ddof=1, keepdims=True)
        else:
            sds = np.zeros((values.shape[0], 1))
        out = np.zeros_like(values)
        nonconst = (sds > 0).ravel()
        out[nonconst] = (values[nonconst] - means[nonconst]) / sds[nonconst]
        values = out
    return ExpressionMatrix(
        modality_name=matrix.modality_name,
        feature_ids=matrix.feature_ids,
        sample_ids=matrix.sample_ids,
        values=values,
        transform_log=matrix.transform_log or log_transform,
        transform_zscore=matrix.transform_zscore or zscore,
    )


def _subset_columns(matrix: ExpressionMatrix, sample_ids) -> ExpressionMatrix:
    index = {s: i for i, s in enumerate(matrix.sample_ids)}
    cols = [index[s] for s in sample_ids]
    return ExpressionMatrix(
        modality_name=matrix.modality_name,
        feature_ids=matrix.feature_ids,
        sample_ids=tuple(sample_ids),
        values=matrix.values[:, cols].copy(),
        transform_log=matrix.transform_log,
        transform_zscore=matrix.transform_zscore,
    )


def align_cohort(matrix_a: ExpressionMatrix, matrix_b: ExpressionMatrix,
                 clinical: ClinicalTable) -> Cohort:
    """Restrict all three sources to their common samples, sorted by id.

    The drop report maps source name -> ids present there but not shared.
    """
    ids_a = set(matrix_a.sample_ids)
    ids_b = set(matrix_b.sample_ids)
    ids_c = set(clinical.sample_ids)
    common = sorted(ids_a & ids_b & ids_c)
    if len(common) < 2:
        raise ValidationError(
            f"only {len(common)} samples shared by all three inputs; need >= 2"
        )
    dropped = {
        "matrix_a": tuple(sorted(ids_a - set(common))),
        "matrix_b": tuple(sorted(ids_b - set(common))),
        "clinical": tuple(sorted(ids_c - set(common))),
    }
    return Cohort(
        matrix_a=_subset_columns(matrix_a, common),
        matrix_b=_subset_columns(matrix_b, common),
        clinical=clinical.subset(common),
        sample_ids=tuple(common),
        dropped=dropped,
    )
