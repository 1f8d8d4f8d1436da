"""Local naive Bayes nearest-neighbor scoring.

Per query descriptor, the k+1 exact nearest gallery descriptors are found by
Euclidean distance. Every distinct individual owning one of the first k
contributes d(k+1)^2 - d(c)^2 to its score, where d(c) is that individual's
best distance inside the top k. Individuals never appearing stay at 0.
Higher scores mean stronger evidence.

Distances tie-break by gallery insertion order (stable sort), which makes
results reproducible across runs and identical rebuilds.
"""
from __future__ import annotations

import numpy as np

from ..contour.descriptors import Descriptor
from ..errors import IndexTooSmall
from .index import DescriptorIndex


def _nearest_squared(
    vectors: np.ndarray, q: np.ndarray, k_plus_1: int
) -> tuple[np.ndarray, np.ndarray]:
    """Indices and squared distances of the k+1 nearest rows, stable ties.

    Selection avoids sorting the whole gallery: everything at or below the
    (k+1)-th smallest distance is a candidate, and a stable sort of just the
    candidates reproduces the full stable argsort's leading block exactly,
    ties included (flatnonzero yields candidates in index order).
    """
    d2 = ((vectors - q) ** 2).sum(axis=1)
    kth = min(k_plus_1 - 1, d2.shape[0] - 1)
    boundary = np.partition(d2, kth)[kth]
    candidates = np.flatnonzero(d2 <= boundary)
    order = candidates[np.argsort(d2[candidates], kind="stable")][:k_plus_1]
    return order, d2[order]


def lnbnn_score(
    query: list[Descriptor],
    idx: DescriptorIndex,
    k: int,
    side_policy: str = "merged",
) -> dict[str, float]:
    """Score every indexed individual against the query descriptors.

    side_policy "merged" searches one shared space; "per_side" restricts each
    query descriptor to gallery entries of its own side and sums the
    resulting evidence per individual. The index must hold more than k
    entries (per side, when split).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    scores = {owner: 0.0 for owner in idx.individuals()}

    if side_policy == "merged":
        groups = [(np.arange(idx.size), query)]
    elif side_policy == "per_side":
        groups = []
        for side in ("left", "right"):
            subset = np.flatnonzero(idx.side_mask(side))
            qs = [d for d in query if d.owner[1] == side]
            groups.append((subset, qs))
    else:
        raise ValueError(f"unknown side policy {side_policy!r}")

    for subset, qs in groups:
        if not qs:
            continue
        if len(subset) == 0:
            # no gallery evidence exists for this side at all
            continue
        if len(subset) <= k:
            raise IndexTooSmall(
                f"need more than k={k} indexed descriptors, have {len(subset)}"
            )
        vectors = idx.vectors[subset]
        for d in qs:
            order, d2 = _nearest_squared(vectors, d.vector, k + 1)
            boundary = d2[k]
            seen: set[str] = set()
            for pos in range(k):
                owner = idx.owners[subset[order[pos]]]
                if owner in seen:
                    continue
                seen.add(owner)
                scores[owner] += boundary - d2[pos]
    return scores
