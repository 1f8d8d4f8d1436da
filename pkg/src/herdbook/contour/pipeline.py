"""End-to-end contour pipeline: raw points to a DescriptorSet."""
from __future__ import annotations

from dataclasses import dataclass

from .curvature import DEFAULT_SCALES, integral_curvature
from .descriptors import (
    DEFAULT_DESCRIPTOR_DIM,
    DEFAULT_MIN_SPAN,
    DescriptorSet,
    extract_descriptors,
)
from .geometry import DEFAULT_RESAMPLE_POINTS, Contour, normalize_contour
from .keypoints import (
    DEFAULT_ENDPOINT_MARGIN,
    DEFAULT_MIN_PROMINENCE,
    DEFAULT_SMOOTH_WINDOW,
    extract_keypoints,
)


@dataclass(frozen=True)
class ContourPipelineConfig:
    """All knobs of the contour-to-descriptors pipeline in one place."""

    resample_points: int = DEFAULT_RESAMPLE_POINTS
    scales: tuple[float, ...] = DEFAULT_SCALES
    descriptor_dim: int = DEFAULT_DESCRIPTOR_DIM
    smooth_window: int = DEFAULT_SMOOTH_WINDOW
    min_span: int = DEFAULT_MIN_SPAN
    endpoint_margin: int = DEFAULT_ENDPOINT_MARGIN
    min_prominence: float = DEFAULT_MIN_PROMINENCE

    def to_dict(self) -> dict:
        return {
            "resample_points": self.resample_points,
            "scales": list(self.scales),
            "descriptor_dim": self.descriptor_dim,
            "smooth_window": self.smooth_window,
            "min_span": self.min_span,
            "endpoint_margin": self.endpoint_margin,
            "min_prominence": self.min_prominence,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ContourPipelineConfig":
        known = {f for f in cls.__dataclass_fields__}
        kwargs = {k: v for k, v in raw.items() if k in known}
        if "scales" in kwargs:
            kwargs["scales"] = tuple(kwargs["scales"])
        return cls(**kwargs)


def describe_contour(
    contour: Contour,
    config: ContourPipelineConfig = ContourPipelineConfig(),
    owner_tag: str | None = None,
) -> DescriptorSet:
    """Normalize, measure curvature, pick keypoints, emit descriptors."""
    normalized = (
        contour
        if contour.normalized
        else normalize_contour(contour, config.resample_points)
    )
    profile = integral_curvature(normalized, config.scales)
    keypoints = extract_keypoints(
        profile,
        config.smooth_window,
        config.endpoint_margin,
        min_prominence=config.min_prominence,
    )
    descriptors = extract_descriptors(
        profile,
        keypoints,
        dim=config.descriptor_dim,
        min_span=config.min_span,
        owner_tag=owner_tag,
    )
    tag = owner_tag if owner_tag is not None else contour.source_sighting
    return DescriptorSet(owner=tag, side=normalized.side, descriptors=descriptors)
