"""Weighted wildcard-aware distance between two codes, plus annotator agreement.

Per slot the difference is 0 for an exact non-wildcard match, 1 for a
non-wildcard mismatch, and a fixed partial penalty (default 0.6) whenever
either side is a wildcard. Slot differences are weighted (age is down-weighted
to 0.4 by default because aging is unreliable) and averaged.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import EmptyInput, SchemaMismatch
from .code import SeekCode
from .schema import DEFAULT_SCHEMA, WILDCARD, SeekSchema

DEFAULT_AGE_WEIGHT = 0.4
DEFAULT_WILDCARD_PENALTY = 0.6


@dataclass(frozen=True)
class SeekWeights:
    """Per-slot weights and the wildcard penalty.

    normalize: "slots" divides the weighted sum by the slot count (default);
    "weights" divides by the total weight instead.
    """

    slot_weights: dict[str, float] = field(default_factory=dict)
    wildcard_penalty: float = DEFAULT_WILDCARD_PENALTY
    normalize: str = "slots"

    def __post_init__(self):
        if any(w < 0 for w in self.slot_weights.values()):
            raise ValueError("slot weights must be nonnegative")
        if not 0.0 <= self.wildcard_penalty <= 1.0:
            raise ValueError("wildcard penalty must be in [0, 1]")
        if self.normalize not in ("slots", "weights"):
            raise ValueError("normalize must be 'slots' or 'weights'")

    @classmethod
    def default(cls, schema: SeekSchema = DEFAULT_SCHEMA) -> "SeekWeights":
        weights = {name: 1.0 for name in schema.slot_names}
        weights["age"] = DEFAULT_AGE_WEIGHT
        return cls(slot_weights=weights)

    def weight_vector(self, schema: SeekSchema) -> list[float]:
        return [self.slot_weights.get(name, 1.0) for name in schema.slot_names]


def slot_difference(a: str, b: str, wildcard_penalty: float) -> float:
    """Difference of one slot pair: 0 match, 1 mismatch, penalty if either wild."""
    if a == WILDCARD or b == WILDCARD:
        return wildcard_penalty
    return 0.0 if a == b else 1.0


def seek_distance(
    a: SeekCode,
    b: SeekCode,
    weights: SeekWeights | None = None,
    schema: SeekSchema = DEFAULT_SCHEMA,
) -> float:
    """Weighted mean slot difference between two codes, in [0, 1].

    Symmetric in (a, b); 0 for identical wildcard-free codes. Raises
    SchemaMismatch when the codes come from different schema versions.
    """
    if a.schema_version != b.schema_version:
        raise SchemaMismatch(
            f"cannot compare codes from schemas "
            f"{a.schema_version!r} and {b.schema_version!r}"
        )
    if a.schema_version != schema.version:
        raise SchemaMismatch(
            f"codes built under {a.schema_version!r}, "
            f"active schema is {schema.version!r}"
        )
    if weights is None:
        weights = SeekWeights.default(schema)
    wvec = weights.weight_vector(schema)
    total = 0.0
    for w, sa, sb in zip(wvec, a.values, b.values):
        total += w * slot_difference(sa, sb, weights.wildcard_penalty)
    denom = len(schema.slots) if weights.normalize == "slots" else sum(wvec)
    return total / denom


def slots_agree(a: str, b: str) -> bool:
    """Agreement rule for annotator comparison.

    Wildcard agrees with wildcard and disagrees with any concrete symbol.
    """
    return a == b


def attribute_agreement(
    groups: list[list[SeekCode]],
    schema: SeekSchema = DEFAULT_SCHEMA,
) -> dict[str, float]:
    """Per-slot fraction of agreeing within-group code pairs.

    Each group holds the codes independently assigned to one individual;
    all unordered pairs inside every group are pooled.
    """
    if not groups:
        raise EmptyInput("no code groups given")
    n_slots = len(schema.slots)
    agree = [0] * n_slots
    pairs = 0
    for group in groups:
        if len(group) < 2:
            raise EmptyInput("every group needs at least two codes")
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                pairs += 1
                for s in range(n_slots):
                    if slots_agree(group[i].values[s], group[j].values[s]):
                        agree[s] += 1
    return {
        name: agree[s] / pairs for s, name in enumerate(schema.slot_names)
    }
