"""Per-modality feature lists and the row views they induce.

Feature choice is user-driven; matching is exact, case-sensitive string
equality. Unmatched ids are reported, not fatal, as long as at least one id
matches.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .ingest import ExpressionMatrix

_SPLIT = re.compile(r"[,\r\n]+")


@dataclass(frozen=True)
class FeatureSelection:
    modality_name: str
    requested: tuple[str, ...]
    matched: tuple[str, ...]
    unmatched: tuple[str, ...]


@dataclass(frozen=True)
class FeatureView:
    """Rows of a source matrix restricted to the matched features.

    Row order follows the requested order (restricted to matched ids);
    columns keep the source sample order.
    """

    matrix: ExpressionMatrix
    feature_ids: tuple[str, ...]
    row_indices: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def modality_name(self) -> str:
        return self.matrix.modality_name

    @property
    def sample_ids(self) -> tuple[str, ...]:
        return self.matrix.sample_ids

    @property
    def n_samples(self) -> int:
        return len(self.matrix.sample_ids)

    def sample_coordinates(self) -> np.ndarray:
        """Samples as points: (n_samples, n_features) array."""
        return np.ascontiguousarray(self.values.T)


def parse_feature_list(text: str) -> list[str]:
    """Split on commas and line breaks, trim, drop empties, dedupe (first wins)."""
    out: list[str] = []
    seen: set[str] = set()
    for token in _SPLIT.split(text):
        fid = token.strip()
        if fid and fid not in seen:
            seen.add(fid)
            out.append(fid)
    return out


def select_features(matrix: ExpressionMatrix,
                    requested) -> tuple[FeatureSelection, FeatureView]:
    """Build the selection report and the value view over the matched rows."""
    requested = list(dict.fromkeys(requested))
    if not requested:
        raise ValidationError("requested feature list is empty")
    index = {fid: i for i, fid in enumerate(matrix.feature_ids)}
    matched = [fid for fid in requested if fid in index]
    unmatched = [fid for fid in requested if fid not in index]
    if not matched:
        raise ValidationError(
            "none of the requested features are present in the matrix",
            detail={"unmatched": unmatched},
        )
    rows = [index[fid] for fid in matched]
    selection = FeatureSelection(
        modality_name=matrix.modality_name,
        requested=tuple(requested),
        matched=tuple(matched),
        unmatched=tuple(unmatched),
    )
    view = FeatureView(
        matrix=matrix,
        feature_ids=tuple(matched),
        row_indices=tuple(rows),
        values=matrix.values[rows, :].copy(),
    )
    return selection, view


def full_view(matrix: ExpressionMatrix) -> FeatureView:
    """View over every feature of the matrix, in matrix order."""
    _, view = select_features(matrix, list(matrix.feature_ids))
    return view
