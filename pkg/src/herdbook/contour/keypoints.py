"""Keypoints: local extrema of the smoothed curvature sequences.

Each scale is smoothed with a centered moving average to suppress sampling
noise, then strict local extrema are kept. The two sequence endpoints are
always included so that end regions stay describable; extrema falling inside
the endpoint margin (where tangent-extension artifacts live) are dropped.

Smoothing alone cannot clean a near-constant sequence: the disk clipping
leaves ~1e-3 wiggles that stay strict extrema at any window. Extrema can
therefore additionally be filtered by topographic prominence; real contour
features measure 0.05+ against that noise floor.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .curvature import CurvatureProfile

DEFAULT_SMOOTH_WINDOW = 5
DEFAULT_ENDPOINT_MARGIN = 4
DEFAULT_MIN_PROMINENCE = 0.01


class ExtremumKind(str, Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class Keypoint:
    index: int
    scale: float
    kind: ExtremumKind


def moving_average(values: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average with edge replication; window must be odd."""
    if window <= 1:
        return values.astype(np.float64)
    if window % 2 == 0:
        raise ValueError("smoothing window must be odd")
    half = window // 2
    padded = np.pad(values, half, mode="edge")
    kernel = np.full(window, 1.0 / window)
    return np.convolve(padded, kernel, mode="valid")


def prominence(values: np.ndarray, index: int, kind: ExtremumKind) -> float:
    """Topographic prominence of the extremum at index.

    For a maximum: walk outward on both sides until a higher value appears,
    tracking the lowest value passed; prominence is the drop from the peak to
    the higher of the two tracked floors. Sides that reach a sequence end
    without finding a higher value use the floor of the whole walk. Minima are
    measured on the negated sequence.
    """
    seq = values if kind is ExtremumKind.MAX else -values
    peak = seq[index]
    floors = []
    for side in (seq[:index][::-1], seq[index + 1:]):
        floor = peak
        for x in side:
            if x > peak:
                break
            floor = min(floor, x)
        floors.append(floor)
    return float(peak - max(floors))


def extract_keypoints(
    profile: CurvatureProfile,
    smooth_window: int = DEFAULT_SMOOTH_WINDOW,
    endpoint_margin: int = DEFAULT_ENDPOINT_MARGIN,
    min_prominence: float = 0.0,
) -> list[Keypoint]:
    """Strict extrema per scale plus both endpoints, sorted by scale, index.

    With min_prominence 0 every strict extremum qualifies. A positive value
    drops extrema whose prominence falls below it; endpoints are exempt.
    Endpoints get their kind from a one-sided comparison with the adjacent
    sample (ties count as MIN). A constant sequence yields endpoints only.
    """
    keypoints: list[Keypoint] = []
    n = profile.n_points
    lo = max(1, endpoint_margin)
    hi = min(n - 2, n - 1 - endpoint_margin)
    for si, scale in enumerate(profile.scales):
        smoothed = moving_average(profile.values[si], smooth_window)

        start_kind = (
            ExtremumKind.MAX if smoothed[0] > smoothed[1] else ExtremumKind.MIN
        )
        keypoints.append(Keypoint(0, scale, start_kind))

        for i in range(lo, hi + 1):
            if smoothed[i] > smoothed[i - 1] and smoothed[i] > smoothed[i + 1]:
                kind = ExtremumKind.MAX
            elif smoothed[i] < smoothed[i - 1] and smoothed[i] < smoothed[i + 1]:
                kind = ExtremumKind.MIN
            else:
                continue
            if min_prominence > 0.0 and prominence(smoothed, i, kind) < min_prominence:
                continue
            keypoints.append(Keypoint(i, scale, kind))

        end_kind = (
            ExtremumKind.MAX if smoothed[-1] > smoothed[-2] else ExtremumKind.MIN
        )
        keypoints.append(Keypoint(n - 1, scale, end_kind))
    keypoints.sort(key=lambda kp: (kp.scale, kp.index))
    return keypoints
