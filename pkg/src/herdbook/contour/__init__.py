"""Ear-contour processing: normalization, integral curvature, descriptors."""
from .curvature import (
    DEFAULT_SCALES,
    CurvatureProfile,
    curvature_at,
    integral_curvature,
)
from .descriptors import (
    Descriptor,
    DescriptorSet,
    extract_descriptors,
)
from .geometry import (
    Contour,
    Side,
    arc_length,
    normalize_contour,
    resample_polyline,
)
from .io import read_contours, write_contours
from .keypoints import (
    ExtremumKind,
    Keypoint,
    extract_keypoints,
    moving_average,
    prominence,
)
from .pipeline import ContourPipelineConfig, describe_contour

__all__ = [
    "Contour",
    "ContourPipelineConfig",
    "CurvatureProfile",
    "DEFAULT_SCALES",
    "Descriptor",
    "DescriptorSet",
    "ExtremumKind",
    "Keypoint",
    "Side",
    "arc_length",
    "curvature_at",
    "describe_contour",
    "extract_descriptors",
    "extract_keypoints",
    "prominence",
    "integral_curvature",
    "moving_average",
    "normalize_contour",
    "read_contours",
    "resample_polyline",
    "write_contours",
]
