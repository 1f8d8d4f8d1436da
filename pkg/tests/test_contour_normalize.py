"""Normalization must erase pose: same ear, any photo, same coordinates."""
import numpy as np
import pytest

from herdbook.contour import (
    Contour,
    Side,
    arc_length,
    normalize_contour,
)
from herdbook.errors import DegenerateContour
from herdbook.synth import make_ear_contour, random_notch_pattern


def rot(angle):
    return np.array(
        [[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]]
    )


class TestNormalizeBasics:
    def test_output_shape_and_flags(self):
        rng = np.random.default_rng(7)
        c = make_ear_contour(rng, sighting_id="s1")
        n = normalize_contour(c)
        assert n.points.shape == (256, 2)
        assert n.normalized
        assert n.side == c.side
        assert n.source_sighting == "s1"
        assert n.interior_left in (True, False)

    def test_unit_arc_length(self):
        rng = np.random.default_rng(8)
        n = normalize_contour(make_ear_contour(rng))
        assert abs(arc_length(n.points) - 1.0) < 1e-9

    def test_centered(self):
        rng = np.random.default_rng(9)
        n = normalize_contour(make_ear_contour(rng))
        assert np.allclose(n.points.mean(axis=0), 0.0, atol=1e-9)

    def test_chord_along_x(self):
        rng = np.random.default_rng(10)
        n = normalize_contour(make_ear_contour(rng))
        chord = n.points[-1] - n.points[0]
        assert abs(chord[1]) < 1e-9
        assert chord[0] > 0

    def test_consecutive_duplicates_dropped(self):
        t = np.linspace(0, 1, 50)
        pts = np.stack([t, t**2], axis=1)
        dup = np.repeat(pts, 2, axis=0)
        a = normalize_contour(Contour(points=pts, side=Side.RIGHT))
        b = normalize_contour(Contour(points=dup, side=Side.RIGHT))
        assert np.allclose(a.points, b.points, atol=1e-12)

    def test_custom_point_count(self):
        rng = np.random.default_rng(11)
        n = normalize_contour(make_ear_contour(rng), n_points=64)
        assert n.points.shape == (64, 2)


class TestNormalizeDegenerate:
    def test_too_few_points(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        with pytest.raises(DegenerateContour):
            normalize_contour(Contour(points=pts, side=Side.RIGHT))

    def test_all_points_identical(self):
        pts = np.zeros((40, 2))
        with pytest.raises(DegenerateContour):
            normalize_contour(Contour(points=pts, side=Side.RIGHT))

    def test_closed_loop_rejected(self):
        # zero chord leaves the orientation step undefined
        t = np.linspace(0, 2 * np.pi, 100)
        pts = np.stack([np.cos(t), np.sin(t)], axis=1)
        with pytest.raises(DegenerateContour):
            normalize_contour(Contour(points=pts, side=Side.RIGHT))


class TestPoseInvariance:
    def test_similarity_transform_invariance(self):
        rng = np.random.default_rng(12)
        pattern = random_notch_pattern(rng, 2)
        base = make_ear_contour(rng, pattern=pattern)
        ref = normalize_contour(base)
        for angle, scale, shift in [
            (0.7, 3.7, (5.0, -2.0)),
            (-2.1, 0.25, (0.0, 100.0)),
            (3.0, 12.0, (-40.0, 7.5)),
        ]:
            moved = base.points @ rot(angle).T * scale + np.asarray(shift)
            n = normalize_contour(Contour(points=moved, side=Side.RIGHT))
            assert np.max(np.abs(n.points - ref.points)) < 1e-6

    def test_pure_scaling(self):
        rng = np.random.default_rng(13)
        base = make_ear_contour(rng)
        ref = normalize_contour(base)
        scaled = normalize_contour(
            Contour(points=base.points * 3.7, side=Side.RIGHT)
        )
        assert np.max(np.abs(scaled.points - ref.points)) < 1e-6

    def test_left_side_mirrors_onto_right(self):
        rng = np.random.default_rng(14)
        pattern = random_notch_pattern(rng, 2)
        state = rng.bit_generator.state
        right = make_ear_contour(rng, pattern=pattern, side=Side.RIGHT)
        rng.bit_generator.state = state
        left = make_ear_contour(rng, pattern=pattern, side=Side.LEFT)
        nr = normalize_contour(right)
        nl = normalize_contour(left)
        assert np.max(np.abs(nr.points - nl.points)) < 1e-9

    def test_interior_consistent_under_transform(self):
        rng = np.random.default_rng(15)
        base = make_ear_contour(rng)
        ref = normalize_contour(base)
        moved = base.points @ rot(1.3).T * 2.0 + np.array([9.0, -4.0])
        n = normalize_contour(Contour(points=moved, side=Side.RIGHT))
        assert n.interior_left == ref.interior_left
