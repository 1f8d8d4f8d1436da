"""Keypoint picking and descriptor extraction on hand-built profiles."""
import numpy as np
import pytest

from herdbook.contour import (
    Contour,
    ContourPipelineConfig,
    CurvatureProfile,
    Descriptor,
    ExtremumKind,
    Keypoint,
    Side,
    describe_contour,
    extract_descriptors,
    extract_keypoints,
    moving_average,
    prominence,
    read_contours,
    write_contours,
)
from herdbook.errors import ValidationError
from herdbook.synth import make_ear_contour, random_notch_pattern


def profile_of(values, scales=(0.02,)):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    return CurvatureProfile(
        scales=scales, values=arr, side=Side.RIGHT, source_sighting="t"
    )


class TestMovingAverage:
    def test_window_one_is_identity(self):
        v = np.array([3.0, 1.0, 4.0])
        assert np.array_equal(moving_average(v, 1), v)

    def test_known_values_window_three(self):
        v = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
        got = moving_average(v, 3)
        expected = np.array([1.0 / 3.0, 1.0, 2.0, 3.0, 11.0 / 3.0])
        assert np.allclose(got, expected)

    def test_even_window_rejected(self):
        with pytest.raises(ValueError):
            moving_average(np.ones(10), 4)

    def test_length_preserved(self):
        v = np.linspace(0, 1, 37)
        assert len(moving_average(v, 5)) == 37


class TestKeypoints:
    def test_constant_profile_endpoints_only(self):
        prof = profile_of(np.full(64, 0.5))
        kps = extract_keypoints(prof)
        assert [kp.index for kp in kps] == [0, 63]
        assert all(kp.kind == ExtremumKind.MIN for kp in kps)

    def test_single_bump_gives_apex_max(self):
        i = np.arange(64)
        prof = profile_of(np.exp(-((i - 32.0) ** 2) / 30.0))
        kps = extract_keypoints(prof)
        maxima = [kp for kp in kps if kp.kind == ExtremumKind.MAX]
        assert len(maxima) == 1
        assert maxima[0].index == 32
        assert {kp.index for kp in kps} == {0, 32, 63}

    def test_endpoint_kinds_follow_adjacent_sample(self):
        ramp_up = profile_of(np.linspace(0.0, 1.0, 32))
        kps = extract_keypoints(ramp_up, smooth_window=1)
        by_index = {kp.index: kp.kind for kp in kps}
        assert by_index[0] == ExtremumKind.MIN
        assert by_index[31] == ExtremumKind.MAX

    def test_extrema_match_brute_force(self):
        rng = np.random.default_rng(31)
        i = np.arange(200, dtype=float)
        values = np.zeros(200)
        for center in (40, 95, 160):
            values += rng.uniform(0.5, 1.0) * np.exp(
                -((i - center) ** 2) / rng.uniform(20, 60)
            )
        prof = profile_of(values)
        window, margin = 5, 4
        kps = extract_keypoints(prof, smooth_window=window, endpoint_margin=margin)

        smoothed = moving_average(values, window)
        expected = {0, 199}
        for j in range(max(1, margin), min(198, 199 - margin) + 1):
            if smoothed[j] > smoothed[j - 1] and smoothed[j] > smoothed[j + 1]:
                expected.add(j)
            elif smoothed[j] < smoothed[j - 1] and smoothed[j] < smoothed[j + 1]:
                expected.add(j)
        assert {kp.index for kp in kps} == expected
        maxima = sorted(kp.index for kp in kps if kp.kind == ExtremumKind.MAX)
        assert len(maxima) == 3

    def test_margin_drops_near_end_extrema(self):
        values = np.full(64, 0.5)
        values[2] = 0.9
        values[61] = 0.1
        with_margin = extract_keypoints(
            profile_of(values), smooth_window=1, endpoint_margin=4
        )
        assert {kp.index for kp in with_margin} == {0, 63}
        without = extract_keypoints(
            profile_of(values), smooth_window=1, endpoint_margin=0
        )
        assert {2, 61}.issubset({kp.index for kp in without})

    def test_sorted_by_scale_then_index(self):
        values = np.zeros((2, 64))
        i = np.arange(64, dtype=float)
        values[0] = np.exp(-((i - 20.0) ** 2) / 10.0)
        values[1] = np.exp(-((i - 44.0) ** 2) / 10.0)
        prof = profile_of(values, scales=(0.02, 0.04))
        kps = extract_keypoints(prof)
        keys = [(kp.scale, kp.index) for kp in kps]
        assert keys == sorted(keys)


class TestProminence:
    def test_isolated_peak_measured_to_base(self):
        values = np.array([0.5, 0.5, 0.5, 0.9, 0.5, 0.5, 0.5])
        assert prominence(values, 3, ExtremumKind.MAX) == pytest.approx(0.4)

    def test_shoulder_peak_measured_to_saddle(self):
        # lesser peak at 5 is cut off from the base by the higher peak at 2;
        # its prominence is the climb from the saddle at index 4
        values = np.array([0.0, 0.5, 1.0, 0.5, 0.3, 0.6, 0.2, 0.0])
        assert prominence(values, 5, ExtremumKind.MAX) == pytest.approx(0.3)
        assert prominence(values, 2, ExtremumKind.MAX) == pytest.approx(1.0)

    def test_minimum_mirrors_maximum(self):
        values = np.array([0.5, 0.5, 0.5, 0.1, 0.5, 0.5, 0.5])
        assert prominence(values, 3, ExtremumKind.MIN) == pytest.approx(0.4)

    def test_zero_threshold_keeps_all_strict_extrema(self):
        rng = np.random.default_rng(36)
        values = 0.5 + 0.001 * rng.standard_normal(128)
        prof = profile_of(values)
        assert extract_keypoints(prof, min_prominence=0.0) == extract_keypoints(prof)

    def test_threshold_drops_noise_keeps_endpoints(self):
        rng = np.random.default_rng(37)
        values = 0.5 + 0.002 * rng.standard_normal(200)
        prof = profile_of(values)
        noisy = extract_keypoints(prof)
        assert len(noisy) > 10
        clean = extract_keypoints(prof, min_prominence=0.01)
        assert [kp.index for kp in clean] == [0, 199]

    def test_real_feature_survives_threshold(self):
        rng = np.random.default_rng(38)
        i = np.arange(200, dtype=float)
        values = 0.5 + 0.002 * rng.standard_normal(200)
        values += 0.2 * np.exp(-((i - 80.0) ** 2) / 12.0)
        kps = extract_keypoints(profile_of(values), min_prominence=0.05)
        maxima = [kp for kp in kps if kp.kind == ExtremumKind.MAX and kp.index not in (0, 199)]
        assert len(maxima) == 1
        assert abs(maxima[0].index - 80) <= 2

    def test_featureless_contour_yields_few_descriptors(self):
        # a smooth arc has a near-constant curvature profile; clipping noise
        # must not inflate it into hundreds of keypoint pairs
        plain = describe_contour(make_ear_contour(np.random.default_rng(39)))
        notched = describe_contour(
            make_ear_contour(
                np.random.default_rng(39),
                pattern=random_notch_pattern(np.random.default_rng(40), 3),
            )
        )
        assert len(plain.descriptors) < 30
        assert len(notched.descriptors) > 3 * len(plain.descriptors)


class TestDescriptors:
    def test_pair_count_all_spans_qualify(self):
        values = np.linspace(0.3, 0.7, 100)
        prof = profile_of(values)
        kps = [Keypoint(i, 0.02, ExtremumKind.MIN) for i in (0, 20, 40, 60, 99)]
        descs = extract_descriptors(prof, kps, min_span=8)
        assert len(descs) == 10  # C(5, 2)

    def test_short_spans_skipped(self):
        prof = profile_of(np.linspace(0.3, 0.7, 100))
        kps = [Keypoint(i, 0.02, ExtremumKind.MIN) for i in (0, 4, 99)]
        descs = extract_descriptors(prof, kps, min_span=8)
        assert {d.span for d in descs} == {(0, 99), (4, 99)}

    def test_no_cross_scale_pairs(self):
        values = np.stack([np.linspace(0.2, 0.8, 64), np.linspace(0.8, 0.2, 64)])
        prof = profile_of(values, scales=(0.02, 0.04))
        kps = [
            Keypoint(0, 0.02, ExtremumKind.MIN),
            Keypoint(63, 0.04, ExtremumKind.MAX),
        ]
        assert extract_descriptors(prof, kps) == []

    def test_unit_norm_and_dim(self):
        rng = np.random.default_rng(32)
        prof = profile_of(rng.uniform(0.1, 0.9, size=128))
        kps = [Keypoint(i, 0.02, ExtremumKind.MIN) for i in (0, 50, 127)]
        descs = extract_descriptors(prof, kps, dim=32)
        assert len(descs) == 3
        for d in descs:
            assert d.vector.shape == (32,)
            assert abs(np.linalg.norm(d.vector) - 1.0) < 1e-12

    def test_linear_span_resamples_linearly(self):
        values = np.linspace(0.0, 1.0, 101)
        prof = profile_of(values)
        kps = [
            Keypoint(10, 0.02, ExtremumKind.MIN),
            Keypoint(90, 0.02, ExtremumKind.MAX),
        ]
        (d,) = extract_descriptors(prof, kps, dim=16)
        raw = np.linspace(values[10], values[90], 16)
        assert np.allclose(d.vector, raw / np.linalg.norm(raw), atol=1e-12)

    def test_zero_span_not_normalizable(self):
        prof = profile_of(np.zeros(64))
        kps = [
            Keypoint(0, 0.02, ExtremumKind.MIN),
            Keypoint(63, 0.02, ExtremumKind.MIN),
        ]
        assert extract_descriptors(prof, kps) == []

    def test_owner_tagging_and_relabel(self):
        prof = profile_of(np.linspace(0.2, 0.8, 64))
        kps = [
            Keypoint(0, 0.02, ExtremumKind.MIN),
            Keypoint(63, 0.02, ExtremumKind.MAX),
        ]
        (d,) = extract_descriptors(prof, kps, owner_tag="query-1")
        assert d.owner == ("query-1", "right")
        r = d.relabeled("IND7")
        assert r.owner == ("IND7", "right")
        assert d.owner == ("query-1", "right")

    def test_deterministic(self):
        rng = np.random.default_rng(33)
        n = make_ear_contour(rng, pattern=random_notch_pattern(rng, 2), jitter=0.01)
        a = describe_contour(n, owner_tag="a")
        b = describe_contour(n, owner_tag="a")
        assert len(a.descriptors) == len(b.descriptors)
        for da, db in zip(a.descriptors, b.descriptors):
            assert np.array_equal(da.vector, db.vector)
            assert da.span == db.span and da.scale == db.scale


class TestPipeline:
    def test_end_to_end_produces_descriptors(self):
        rng = np.random.default_rng(34)
        c = make_ear_contour(
            rng, pattern=random_notch_pattern(rng, 2), sighting_id="s9"
        )
        ds = describe_contour(c)
        assert ds.owner == "s9"
        assert ds.side == Side.RIGHT
        assert len(ds.descriptors) > 0
        scales = {d.scale for d in ds.descriptors}
        assert scales.issubset(set(ContourPipelineConfig().scales))

    def test_config_round_trip(self):
        cfg = ContourPipelineConfig(scales=(0.01, 0.03), descriptor_dim=16)
        again = ContourPipelineConfig.from_dict(cfg.to_dict())
        assert again == cfg


class TestContourFiles:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(35)
        contours = [
            make_ear_contour(rng, sighting_id="a1"),
            make_ear_contour(rng, side=Side.LEFT, sighting_id="b2"),
        ]
        path = tmp_path / "contours.txt"
        write_contours(contours, path)
        back = read_contours(path)
        assert [c.source_sighting for c in back] == ["a1", "b2"]
        assert [c.side for c in back] == [Side.RIGHT, Side.LEFT]
        for orig, rt in zip(contours, back):
            assert np.allclose(orig.points, rt.points, atol=1e-9)

    def test_comments_and_blank_lines(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text(
            "# heading\n\ns1 right 3\n0 0\n1 0\n\n# note\n2 1\n"
        )
        (c,) = read_contours(path)
        assert c.points.shape == (3, 2)

    def test_crlf(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_bytes(b"s1 left 2\r\n0 0\r\n1 1\r\n")
        (c,) = read_contours(path)
        assert c.side == Side.LEFT

    def test_truncated_file_rejected(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("s1 right 5\n0 0\n1 1\n")
        with pytest.raises(ValidationError):
            read_contours(path)

    def test_bad_side_rejected(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("s1 up 2\n0 0\n1 1\n")
        with pytest.raises(ValidationError):
            read_contours(path)

    def test_bad_coordinate_rejected(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("s1 right 2\n0 zero\n1 1\n")
        with pytest.raises(ValidationError):
            read_contours(path)
