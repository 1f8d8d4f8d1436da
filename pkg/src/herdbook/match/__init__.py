"""Descriptor indexing, LNBNN scoring, and fused candidate ranking."""
from .fusion import (
    FusionConfig,
    MatchQuery,
    RankedMatch,
    SidePolicy,
    fuse,
    rank_candidates,
    rank_from_scores,
)
from .gallery import gallery_descriptor_sets, index_from_registry, query_descriptors
from .index import (
    SNAPSHOT_FORMAT,
    DescriptorIndex,
    build_index,
    index_from_descriptors,
    load_index,
    save_index,
)
from .lnbnn import lnbnn_score

__all__ = [
    "DescriptorIndex",
    "FusionConfig",
    "MatchQuery",
    "RankedMatch",
    "SNAPSHOT_FORMAT",
    "SidePolicy",
    "build_index",
    "fuse",
    "gallery_descriptor_sets",
    "index_from_descriptors",
    "index_from_registry",
    "lnbnn_score",
    "load_index",
    "query_descriptors",
    "rank_candidates",
    "rank_from_scores",
    "save_index",
]
