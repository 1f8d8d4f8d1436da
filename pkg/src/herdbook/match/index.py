"""Descriptor index over confirmed individuals.

Immutable after build. Entries keep their insertion order (individuals in
gallery order, descriptors in extraction order) so that exact distance ties
resolve the same way on every run and after every rebuild. The generation
counter increases on each rebuild so services can tell stale results apart.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from ..contour.descriptors import Descriptor, DescriptorSet
from ..errors import EmptyGallery, ValidationError

SNAPSHOT_FORMAT = "herdbook-index/1"


@dataclass(eq=False)
class DescriptorIndex:
    """Flat exact-search index: (n, dim) vectors plus per-entry labels."""

    vectors: np.ndarray  # (n, dim) float64, C-contiguous
    owners: tuple[str, ...]  # individual id per entry
    sides: tuple[str, ...]  # "left" / "right" per entry
    scales: np.ndarray  # (n,) float64
    generation: int

    @property
    def size(self) -> int:
        return len(self.owners)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def individuals(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for owner in self.owners:
            seen.setdefault(owner, None)
        return tuple(seen)

    def side_mask(self, side: str) -> np.ndarray:
        return np.array([s == side for s in self.sides], dtype=bool)


def build_index(
    gallery: Mapping[str, Iterable[DescriptorSet]],
    previous: DescriptorIndex | None = None,
) -> DescriptorIndex:
    """Build a fresh index from each individual's descriptor sets.

    The new generation is previous.generation + 1 (or 1 for a first build),
    so rebuilding after any change yields a strictly larger generation.
    """
    vectors: list[np.ndarray] = []
    owners: list[str] = []
    sides: list[str] = []
    scales: list[float] = []
    for individual_id, sets in gallery.items():
        for ds in sets:
            for d in ds.descriptors:
                vectors.append(np.asarray(d.vector, dtype=np.float64))
                owners.append(individual_id)
                sides.append(ds.side.value)
                scales.append(float(d.scale))
    if not vectors:
        raise EmptyGallery("no descriptors to index")
    mat = np.ascontiguousarray(np.stack(vectors, axis=0))
    return DescriptorIndex(
        vectors=mat,
        owners=tuple(owners),
        sides=tuple(sides),
        scales=np.asarray(scales, dtype=np.float64),
        generation=(previous.generation + 1) if previous is not None else 1,
    )


def index_from_descriptors(
    labeled: Iterable[tuple[str, Descriptor]],
    previous: DescriptorIndex | None = None,
) -> DescriptorIndex:
    """Lower-level build from (individual id, descriptor) pairs."""
    vectors, owners, sides, scales = [], [], [], []
    for individual_id, d in labeled:
        vectors.append(np.asarray(d.vector, dtype=np.float64))
        owners.append(individual_id)
        sides.append(d.owner[1])
        scales.append(float(d.scale))
    if not vectors:
        raise EmptyGallery("no descriptors to index")
    return DescriptorIndex(
        vectors=np.ascontiguousarray(np.stack(vectors, axis=0)),
        owners=tuple(owners),
        sides=tuple(sides),
        scales=np.asarray(scales, dtype=np.float64),
        generation=(previous.generation + 1) if previous is not None else 1,
    )


def save_index(idx: DescriptorIndex, path) -> None:
    """Snapshot to a single .npz (path or binary file object)."""
    if isinstance(path, (str, Path)):
        path = Path(path)
    np.savez_compressed(
        path,
        format=np.array(SNAPSHOT_FORMAT),
        generation=np.array(idx.generation, dtype=np.int64),
        dim=np.array(idx.dim, dtype=np.int64),
        vectors=idx.vectors,
        owners=np.array(idx.owners),
        sides=np.array(idx.sides),
        scales=idx.scales,
    )


def load_index(path) -> DescriptorIndex:
    if isinstance(path, (str, Path)):
        path = Path(path)
    with np.load(path) as data:
        fmt = str(data["format"])
        if fmt != SNAPSHOT_FORMAT:
            raise ValidationError(f"unsupported index snapshot format {fmt!r}")
        vectors = np.ascontiguousarray(data["vectors"], dtype=np.float64)
        dim = int(data["dim"])
        if vectors.ndim != 2 or vectors.shape[1] != dim:
            raise ValidationError("snapshot vector block does not match header")
        return DescriptorIndex(
            vectors=vectors,
            owners=tuple(str(o) for o in data["owners"]),
            sides=tuple(str(s) for s in data["sides"]),
            scales=np.asarray(data["scales"], dtype=np.float64),
            generation=int(data["generation"]),
        )
