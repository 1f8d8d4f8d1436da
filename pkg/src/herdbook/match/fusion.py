"""Score fusion and candidate ranking.

The fused score is the attribute-code distance minus a small multiple of the
contour evidence: fused = seek_d - curv_coefficient * contour_score, sorted
ascending. Strong contour evidence can push a fused score negative; only the
ordering matters. Ties resolve by higher contour score, then lower code
distance, then individual id, so rankings are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from ..contour.descriptors import Descriptor
from ..errors import EmptyGallery
from ..seek.code import SeekCode
from ..seek.distance import SeekWeights, seek_distance
from ..seek.schema import DEFAULT_SCHEMA, SeekSchema
from .index import DescriptorIndex
from .lnbnn import lnbnn_score


class SidePolicy(str, Enum):
    MERGED = "merged"
    PER_SIDE = "per_side"


@dataclass(frozen=True)
class FusionConfig:
    curv_coefficient: float = 0.1
    lnbnn_k: int = 5
    side_policy: SidePolicy = SidePolicy.MERGED

    def __post_init__(self):
        if self.curv_coefficient < 0.0:
            raise ValueError("curv_coefficient must be non-negative")
        if self.lnbnn_k < 1:
            raise ValueError("lnbnn_k must be positive")


@dataclass(frozen=True)
class RankedMatch:
    individual_id: str
    seek_distance: float
    contour_score: float
    fused_score: float
    rank: int


@dataclass
class MatchQuery:
    """One query sighting: its attribute code plus any contour descriptors."""

    code: SeekCode
    descriptors: list[Descriptor] = field(default_factory=list)


def fuse(seek_d: float, curv: float, cfg: FusionConfig) -> float:
    """Lower is better; contour evidence subtracts from the code distance."""
    return seek_d - cfg.curv_coefficient * curv


def rank_candidates(
    query: MatchQuery,
    gallery_codes: Mapping[str, SeekCode],
    idx: DescriptorIndex | None,
    cfg: FusionConfig = FusionConfig(),
    weights: SeekWeights | None = None,
    schema: SeekSchema = DEFAULT_SCHEMA,
) -> list[RankedMatch]:
    """Rank every known individual against the query, best first.

    Covers the whole gallery so a reviewer can always decide "none of
    these". Individuals absent from the descriptor index, or queries
    without contours, take contour score 0 and are ranked on code distance
    alone.
    """
    if not gallery_codes:
        raise EmptyGallery("no individuals to rank")
    weights = weights if weights is not None else SeekWeights.default()

    contour_scores: dict[str, float] = {}
    if idx is not None and query.descriptors:
        contour_scores = lnbnn_score(
            query.descriptors, idx, cfg.lnbnn_k, side_policy=cfg.side_policy.value
        )

    seek_distances = {
        individual_id: seek_distance(query.code, code, weights, schema)
        for individual_id, code in gallery_codes.items()
    }
    return rank_from_scores(seek_distances, contour_scores, cfg)


def rank_from_scores(
    seek_distances: Mapping[str, float],
    contour_scores: Mapping[str, float],
    cfg: FusionConfig = FusionConfig(),
) -> list[RankedMatch]:
    """Fuse per-individual score maps into the final ordered list.

    Missing contour entries count as 0. Ties in the fused score fall back to
    higher contour score, then lower code distance, then individual id.
    """
    if not seek_distances:
        raise EmptyGallery("no individuals to rank")
    rows: list[tuple[float, float, float, str]] = []
    for individual_id, seek_d in seek_distances.items():
        curv = contour_scores.get(individual_id, 0.0)
        fused = fuse(seek_d, curv, cfg)
        rows.append((fused, -curv, seek_d, individual_id))
    rows.sort()

    return [
        RankedMatch(
            individual_id=individual_id,
            seek_distance=seek_d,
            contour_score=-neg_curv + 0.0,
            fused_score=fused,
            rank=position + 1,
        )
        for position, (fused, neg_curv, seek_d, individual_id) in enumerate(rows)
    ]
