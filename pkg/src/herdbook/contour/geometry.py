"""Contours and their canonical form.

A contour is an ordered open sequence of (x, y) points tracing one ear edge.
Normalization maps every contour into a shared pose so that descriptors are
comparable: resampled uniformly by arc length, centroid at the origin, total
arc length 1, endpoint-to-endpoint chord along +x, and left ears mirrored so
both sides live in one descriptor space.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import DegenerateContour

MIN_INPUT_POINTS = 32
DEFAULT_RESAMPLE_POINTS = 256


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(eq=False)
class Contour:
    """Ordered open point sequence for one ear."""

    points: np.ndarray
    side: Side
    source_sighting: str = ""
    normalized: bool = False
    # which traversal side (left of travel direction) faces the ear interior;
    # set during normalization so mirrored left ears stay consistent
    interior_left: bool | None = field(default=None)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.float64)
        if self.points.ndim != 2 or self.points.shape[1] != 2:
            raise DegenerateContour("points must be an (n, 2) array")
        self.side = Side(self.side)


def dedupe_consecutive(points: np.ndarray) -> np.ndarray:
    """Drop points identical to their predecessor."""
    if len(points) == 0:
        return points
    d = np.linalg.norm(np.diff(points, axis=0), axis=1)
    keep = np.concatenate([[True], d > 0.0])
    return points[keep]


def arc_length(points: np.ndarray) -> float:
    return float(np.linalg.norm(np.diff(points, axis=0), axis=1).sum())


def resample_polyline(points: np.ndarray, n: int) -> np.ndarray:
    """Resample to exactly n points uniformly spaced by arc length."""
    seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    if total <= 0.0:
        raise DegenerateContour("contour has zero total length")
    t = np.linspace(0.0, total, n)
    x = np.interp(t, s, points[:, 0])
    y = np.interp(t, s, points[:, 1])
    return np.column_stack([x, y])


def side_of_segments(segments: np.ndarray, q: np.ndarray) -> float:
    """Sign of the side of q relative to a set of directed segments.

    segments: (m, 2, 2) array of (start, end) pairs. Classification is by the
    segment nearest to q: the straight line from q to its nearest point on the
    set cannot cross the set, so the nearest segment's cross-product sign is
    the true local side. Returns >0 for left of travel, <0 for right, 0 on.
    """
    a = segments[:, 0, :]
    b = segments[:, 1, :]
    d = b - a
    seg_len2 = np.einsum("ij,ij->i", d, d)
    seg_len2 = np.where(seg_len2 == 0.0, 1.0, seg_len2)
    t = np.clip(np.einsum("ij,ij->i", q - a, d) / seg_len2, 0.0, 1.0)
    proj = a + t[:, None] * d
    dist2 = np.einsum("ij,ij->i", q - proj, q - proj)
    i = int(np.argmin(dist2))
    cross = d[i, 0] * (q[1] - a[i, 1]) - d[i, 1] * (q[0] - a[i, 0])
    return float(np.sign(cross))


def polyline_segments(points: np.ndarray) -> np.ndarray:
    return np.stack([points[:-1], points[1:]], axis=1)


def normalize_contour(
    c: Contour, n_points: int = DEFAULT_RESAMPLE_POINTS
) -> Contour:
    """Map a contour to canonical pose.

    Output: exactly n_points samples uniform in arc length, centroid at the
    origin, total polyline length 1 (within 1e-9), endpoint chord rotated
    onto +x, left-ear contours mirrored horizontally first. Raises
    DegenerateContour for fewer than 32 distinct input points, zero length,
    or (effectively) closed curves.
    """
    pts = dedupe_consecutive(np.asarray(c.points, dtype=np.float64))
    if len(pts) < MIN_INPUT_POINTS:
        raise DegenerateContour(
            f"need at least {MIN_INPUT_POINTS} distinct points, got {len(pts)}"
        )
    pts = resample_polyline(pts, n_points)

    if c.side == Side.LEFT:
        pts = pts * np.array([-1.0, 1.0])

    pts = pts - pts.mean(axis=0)
    total = arc_length(pts)
    if total <= 0.0:
        raise DegenerateContour("contour has zero total length")
    pts = pts / total

    chord = pts[-1] - pts[0]
    chord_len = float(np.hypot(*chord))
    if chord_len < 1e-6:
        raise DegenerateContour("contour endpoints coincide (closed curve)")
    ang = np.arctan2(chord[1], chord[0])
    rot = np.array(
        [[np.cos(-ang), -np.sin(-ang)], [np.sin(-ang), np.cos(-ang)]]
    )
    pts = pts @ rot.T
    pts = pts - pts.mean(axis=0)

    sign = side_of_segments(polyline_segments(pts), np.zeros(2))
    return Contour(
        points=pts,
        side=c.side,
        source_sighting=c.source_sighting,
        normalized=True,
        interior_left=(sign >= 0.0),
    )
