"""Fixed-length descriptors over the curvature spans between keypoint pairs.

For every pair of same-scale keypoints far enough apart, the raw curvature
values across the span are resampled to the descriptor dimension and
L2-normalized. The resulting set is a densely overlapping multi-scale
representation of the whole contour.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .curvature import CurvatureProfile
from .geometry import Side
from .keypoints import Keypoint

DEFAULT_DESCRIPTOR_DIM = 32
DEFAULT_MIN_SPAN = 8


@dataclass(eq=False)
class Descriptor:
    """One unit-norm curvature descriptor and where it came from."""

    vector: np.ndarray
    scale: float
    span: tuple[int, int]
    owner: tuple[str, str]  # (individual id or query tag, side)

    def relabeled(self, owner_tag: str) -> "Descriptor":
        return replace(self, owner=(owner_tag, self.owner[1]))


@dataclass(eq=False)
class DescriptorSet:
    """All descriptors of one contour, the unit stored in the match index."""

    owner: str
    side: Side
    descriptors: list[Descriptor]

    def relabeled(self, owner_tag: str) -> "DescriptorSet":
        return DescriptorSet(
            owner=owner_tag,
            side=self.side,
            descriptors=[d.relabeled(owner_tag) for d in self.descriptors],
        )


def extract_descriptors(
    profile: CurvatureProfile,
    keypoints: list[Keypoint],
    dim: int = DEFAULT_DESCRIPTOR_DIM,
    min_span: int = DEFAULT_MIN_SPAN,
    owner_tag: str | None = None,
) -> list[Descriptor]:
    """One descriptor per qualifying same-scale keypoint pair.

    Spans shorter than min_span resampled points are skipped, as are the
    (degenerate) all-zero spans that cannot be normalized. Fewer than two
    keypoints at a scale yields no descriptors for that scale.
    """
    tag = owner_tag if owner_tag is not None else profile.source_sighting
    out: list[Descriptor] = []
    for si, scale in enumerate(profile.scales):
        indices = sorted({kp.index for kp in keypoints if kp.scale == scale})
        values = profile.values[si]
        for ai in range(len(indices)):
            for bi in range(ai + 1, len(indices)):
                a, b = indices[ai], indices[bi]
                if b - a < min_span:
                    continue
                span_values = values[a : b + 1]
                resampled = np.interp(
                    np.linspace(a, b, dim), np.arange(a, b + 1), span_values
                )
                norm = float(np.linalg.norm(resampled))
                if norm < 1e-12:
                    continue
                out.append(
                    Descriptor(
                        vector=resampled / norm,
                        scale=scale,
                        span=(a, b),
                        owner=(tag, profile.side.value),
                    )
                )
    return out
