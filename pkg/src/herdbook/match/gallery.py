"""Build descriptor indexes straight from registry contents.

Iteration order is fixed (individuals by id, history oldest first, contours
by id), so two builds over equal registry content produce byte-identical
indexes. That is what lets offline scoring reproduce service scores exactly.
"""
from __future__ import annotations

import logging

import numpy as np

from ..contour import Contour, ContourPipelineConfig, DescriptorSet, describe_contour
from ..errors import DegenerateContour, EmptyGallery
from .index import DescriptorIndex, build_index

log = logging.getLogger("herdbook.match")


def gallery_descriptor_sets(
    registry, config: ContourPipelineConfig = ContourPipelineConfig()
) -> dict[str, list[DescriptorSet]]:
    """Descriptor sets per confirmed individual, from all assigned contours.

    Contours too short or too degenerate to normalize are skipped with a log
    line; identification falls back to attribute codes for those sightings.
    """
    gallery: dict[str, list[DescriptorSet]] = {}
    for individual in registry.list_individuals():
        sets: list[DescriptorSet] = []
        for sighting in registry.individual_history(individual.id):
            for rec in registry.contours_of(sighting.id):
                contour = Contour(
                    points=np.asarray(rec.points, dtype=np.float64),
                    side=rec.side,
                    source_sighting=sighting.id,
                )
                try:
                    sets.append(
                        describe_contour(contour, config, owner_tag=individual.id)
                    )
                except DegenerateContour as exc:
                    log.warning("skipping contour %s: %s", rec.id, exc)
        if sets:
            gallery[individual.id] = sets
    return gallery


def index_from_registry(
    registry,
    config: ContourPipelineConfig = ContourPipelineConfig(),
    previous: DescriptorIndex | None = None,
) -> DescriptorIndex | None:
    """Fresh index over the registry's contours, or None when there are none."""
    gallery = gallery_descriptor_sets(registry, config)
    try:
        return build_index(gallery, previous=previous)
    except EmptyGallery:
        return None


def query_descriptors(
    registry,
    sighting_id: str,
    config: ContourPipelineConfig = ContourPipelineConfig(),
) -> list:
    """Descriptors for one sighting's own contours (a match query)."""
    descriptors = []
    for rec in registry.contours_of(sighting_id):
        contour = Contour(
            points=np.asarray(rec.points, dtype=np.float64),
            side=rec.side,
            source_sighting=sighting_id,
        )
        try:
            described = describe_contour(contour, config, owner_tag=sighting_id)
        except DegenerateContour as exc:
            log.warning("skipping query contour %s: %s", rec.id, exc)
            continue
        descriptors.extend(described.descriptors)
    return descriptors
