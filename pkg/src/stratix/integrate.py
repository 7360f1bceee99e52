"""Parallel-sets algebra over two partitions of the same cohort.

Cross-tabulates the modality partitions, orders blocks and ribbons for
display, resolves block/ribbon selections to patient sets, and hands
disjoint selections to the survival module for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cluster import Partition
from .errors import ValidationError
from .ingest import ClinicalTable
from .survival import LogRankResult, km_curve, logrank

# fixed palettes keyed by cluster index; block colors in the UI must match
# graph node colors, so both sides key into the same tables
PALETTE_A = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a",
             "#66a61e", "#e6ab02", "#a6761d", "#666666")
PALETTE_B = ("#386cb0", "#f0027f", "#fdc086", "#beaed4",
             "#7fc97f", "#bf5b17", "#ffff99", "#f781bf")


def palette_color(modality: str, cluster: int) -> str:
    table = PALETTE_A if modality == "a" else PALETTE_B
    return table[cluster % len(table)]


@dataclass(frozen=True)
class ContingencyTable:
    partition_a: Partition
    partition_b: Partition
    counts: np.ndarray  # k_a x k_b, C[a][b] = |cluster a of A ∩ cluster b of B|
    cells: tuple  # same shape, tuple-of-tuples of sample-id tuples
    sample_ids: tuple[str, ...]

    @property
    def k_a(self) -> int:
        return self.counts.shape[0]

    @property
    def k_b(self) -> int:
        return self.counts.shape[1]

    @property
    def n(self) -> int:
        return len(self.sample_ids)

    def row_members(self, a: int) -> tuple[str, ...]:
        self._check_a(a)
        return tuple(sid for cell in self.cells[a] for sid in cell)

    def col_members(self, b: int) -> tuple[str, ...]:
        self._check_b(b)
        return tuple(sid for row in self.cells for sid in row[b])

    def cell_members(self, a: int, b: int) -> tuple[str, ...]:
        self._check_a(a)
        self._check_b(b)
        return self.cells[a][b]

    def _check_a(self, a: int) -> None:
        if not 0 <= a < self.k_a:
            raise ValidationError(f"cluster index {a} out of range for modality a")

    def _check_b(self, b: int) -> None:
        if not 0 <= b < self.k_b:
            raise ValidationError(f"cluster index {b} out of range for modality b")


@dataclass(frozen=True)
class Block:
    modality: str  # "a" or "b"
    cluster: int

    def __post_init__(self):
        if self.modality not in ("a", "b"):
            raise ValidationError(f"unknown modality {self.modality!r}")
        if self.cluster < 0:
            raise ValidationError("cluster index must be >= 0")


@dataclass(frozen=True)
class Ribbon:
    cluster_a: int
    cluster_b: int

    def __post_init__(self):
        if self.cluster_a < 0 or self.cluster_b < 0:
            raise ValidationError("cluster indices must be >= 0")


@dataclass(frozen=True)
class SelectionSpec:
    name: str
    atoms: tuple
    resolved: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class ParallelSetsModel:
    blocks_a: tuple  # (cluster, size, color), display order
    blocks_b: tuple
    ribbons: tuple  # (cluster_a, cluster_b, size), display order
    n: int


def cross_tab(pa: Partition, pb: Partition) -> ContingencyTable:
    """Exact intersection counts and per-cell membership lists."""
    if pa.sample_ids != pb.sample_ids:
        raise ValidationError("partitions cover different sample sets or orders")
    k_a, k_b = pa.k, pb.k
    counts = np.zeros((k_a, k_b), dtype=np.int64)
    members: list[list[list[str]]] = [
        [[] for _ in range(k_b)] for _ in range(k_a)
    ]
    for sid, la, lb in zip(pa.sample_ids, pa.labels, pb.labels):
        counts[la, lb] += 1
        members[la][lb].append(sid)
    counts.setflags(write=False)
    cells = tuple(tuple(tuple(cell) for cell in row) for row in members)
    return ContingencyTable(
        partition_a=pa, partition_b=pb, counts=counts, cells=cells,
        sample_ids=pa.sample_ids,
    )


def _block_order(sizes) -> list[int]:
    # descending size, ties by cluster index
    return sorted(range(len(sizes)), key=lambda c: (-sizes[c], c))


def build_parallel_sets(table: ContingencyTable) -> ParallelSetsModel:
    """Geometry-free block/ribbon model with display ordering and colors."""
    sizes_a = table.counts.sum(axis=1)
    sizes_b = table.counts.sum(axis=0)
    order_a = _block_order(sizes_a)
    order_b = _block_order(sizes_b)
    blocks_a = tuple((c, int(sizes_a[c]), palette_color("a", c)) for c in order_a)
    blocks_b = tuple((c, int(sizes_b[c]), palette_color("b", c)) for c in order_b)
    pos_b = {c: i for i, c in enumerate(order_b)}
    ribbons = []
    for a in order_a:
        row = [(pos_b[b], a, b) for b in range(table.k_b) if table.counts[a, b] > 0]
        row.sort()
        ribbons += [(a, b, int(table.counts[a, b])) for _, a, b in row]
    return ParallelSetsModel(
        blocks_a=blocks_a, blocks_b=blocks_b, ribbons=tuple(ribbons), n=table.n,
    )


def resolve_selection(atoms, table: ContingencyTable) -> frozenset:
    """Union of atom memberships; duplicates collapse."""
    out: set[str] = set()
    for atom in atoms:
        if isinstance(atom, Block):
            if atom.modality == "a":
                out.update(table.row_members(atom.cluster))
            else:
                out.update(table.col_members(atom.cluster))
        elif isinstance(atom, Ribbon):
            out.update(table.cell_members(atom.cluster_a, atom.cluster_b))
        else:
            raise ValidationError(f"unknown selection atom {atom!r}")
    return frozenset(out)


def make_selection(name: str, atoms, table: ContingencyTable) -> SelectionSpec:
    if not name:
        raise ValidationError("selection name must be non-empty")
    if not atoms:
        raise ValidationError("selection needs at least one atom")
    resolved = resolve_selection(atoms, table)
    return SelectionSpec(name=name, atoms=tuple(atoms), resolved=resolved)


def compare_selections(specs, table: ContingencyTable, clinical: ClinicalTable):
    """KM curve per selection; log-rank across them when there are >= 2.

    Returns (curves, result) with result None for a single selection.
    Selections must be non-empty and pairwise disjoint.
    """
    if not specs:
        raise ValidationError("no selections to compare")
    for spec in specs:
        if not spec.resolved:
            raise ValidationError(f"selection {spec.name!r} is empty")
    owner: dict[str, str] = {}
    shared: set[str] = set()
    for spec in specs:
        for sid in spec.resolved:
            if sid in owner:
                shared.add(sid)
            else:
                owner[sid] = spec.name
    if shared:
        raise ValidationError(
            "overlapping selections", detail={"sample_ids": sorted(shared)}
        )
    # deterministic member order: cohort order within each selection
    groups = []
    for spec in specs:
        ids = [sid for sid in table.sample_ids if sid in spec.resolved]
        groups.append((spec.name, ids))
    curves = tuple(km_curve(ids, clinical, label=name) for name, ids in groups)
    result = logrank(groups, clinical) if len(groups) >= 2 else None
    return curves, result


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def model_to_payload(model: ParallelSetsModel) -> dict:
    return {
        "n": model.n,
        "blocks_a": [
            {"cluster": c, "size": s, "color": color}
            for c, s, color in model.blocks_a
        ],
        "blocks_b": [
            {"cluster": c, "size": s, "color": color}
            for c, s, color in model.blocks_b
        ],
        "ribbons": [
            {"a": a, "b": b, "size": s} for a, b, s in model.ribbons
        ],
    }


def comparison_to_payload(curves, result: LogRankResult | None) -> dict:
    from .survival import curve_to_payload

    payload: dict = {"curves": [curve_to_payload(c) for c in curves]}
    payload["logrank"] = result.to_payload() if result is not None else None
    return payload
