"""Index building, LNBNN scoring against the exhaustive oracle, fusion."""
import numpy as np
import pytest

from herdbook.contour import Descriptor, DescriptorSet, Side
from herdbook.errors import EmptyGallery, IndexTooSmall, ValidationError
from herdbook.match import (
    FusionConfig,
    MatchQuery,
    SidePolicy,
    build_index,
    fuse,
    lnbnn_score,
    load_index,
    rank_candidates,
    rank_from_scores,
    save_index,
)
from herdbook.seek.code import parse_code
from herdbook.seek.schema import DEFAULT_SCHEMA

from oracles import lnbnn_reference


def unit(v):
    v = np.asarray(v, dtype=np.float64)
    return v / np.linalg.norm(v)


def desc(vector, owner="q", side="right", scale=0.02):
    return Descriptor(
        vector=np.asarray(vector, dtype=np.float64),
        scale=scale,
        span=(0, 50),
        owner=(owner, side),
    )


def random_gallery(rng, n_individuals, n_descriptors, dim=8, side=Side.RIGHT):
    """Round-robin descriptor ownership across individuals."""
    gallery = {}
    vectors = [unit(rng.normal(size=dim)) for _ in range(n_descriptors)]
    for i in range(n_individuals):
        owner = f"IND{i}"
        own = [
            desc(v, owner=owner, side=side.value)
            for j, v in enumerate(vectors)
            if j % n_individuals == i
        ]
        gallery[owner] = [DescriptorSet(owner=owner, side=side, descriptors=own)]
    return gallery


class TestBuildIndex:
    def test_size_and_generation(self, simple_gallery):
        idx = build_index(simple_gallery)
        assert idx.size == 12
        assert idx.generation == 1
        assert set(idx.individuals()) == {"IND0", "IND1", "IND2"}

    def test_rebuild_bumps_generation(self, simple_gallery):
        first = build_index(simple_gallery)
        second = build_index(simple_gallery, previous=first)
        assert second.generation > first.generation

    def test_empty_gallery_rejected(self):
        with pytest.raises(EmptyGallery):
            build_index({})
        empty_set = DescriptorSet(owner="A", side=Side.RIGHT, descriptors=[])
        with pytest.raises(EmptyGallery):
            build_index({"A": [empty_set]})

    def test_rebuild_is_deterministic(self, simple_gallery):
        rng = np.random.default_rng(41)
        q = [desc(unit(rng.normal(size=8)))]
        a = lnbnn_score(q, build_index(simple_gallery), k=3)
        b = lnbnn_score(q, build_index(simple_gallery), k=3)
        assert a == b


@pytest.fixture
def simple_gallery():
    rng = np.random.default_rng(40)
    return random_gallery(rng, 3, 12)


class TestLnbnn:
    def test_exact_hit_dominates(self):
        rng = np.random.default_rng(42)
        target = unit(rng.normal(size=8))
        gallery = {
            "A": [
                DescriptorSet(
                    owner="A",
                    side=Side.RIGHT,
                    descriptors=[desc(target, owner="A")],
                )
            ],
            "B": [
                DescriptorSet(
                    owner="B",
                    side=Side.RIGHT,
                    descriptors=[
                        desc(unit(target + rng.normal(size=8) * 3.0), owner="B")
                        for _ in range(6)
                    ],
                )
            ],
        }
        scores = lnbnn_score([desc(target)], build_index(gallery), k=2)
        assert scores["A"] > 0.0
        assert scores["A"] == max(scores.values())

    def test_empty_query_scores_zero(self, simple_gallery):
        scores = lnbnn_score([], build_index(simple_gallery), k=3)
        assert set(scores) == {"IND0", "IND1", "IND2"}
        assert all(v == 0.0 for v in scores.values())

    def test_matches_exhaustive_oracle_exactly(self):
        rng = np.random.default_rng(43)
        gallery = random_gallery(rng, 5, 40)
        idx = build_index(gallery)
        query = [desc(unit(rng.normal(size=8))) for _ in range(7)]
        got = lnbnn_score(query, idx, k=3)

        owners = [idx.owners[i] for i in range(idx.size)]
        vectors = [idx.vectors[i] for i in range(idx.size)]
        expected = lnbnn_reference([d.vector for d in query], vectors, owners, k=3)
        assert got == expected

    def test_oracle_agreement_across_seeds_and_k(self):
        for seed in (1, 2, 3):
            rng = np.random.default_rng(seed)
            gallery = random_gallery(rng, 4, 30, dim=5)
            idx = build_index(gallery)
            query = [desc(unit(rng.normal(size=5))) for _ in range(5)]
            for k in (1, 2, 5):
                got = lnbnn_score(query, idx, k=k)
                expected = lnbnn_reference(
                    [d.vector for d in query],
                    [idx.vectors[i] for i in range(idx.size)],
                    list(idx.owners),
                    k=k,
                )
                assert got == expected, f"seed={seed} k={k}"

    def test_scores_never_negative(self):
        rng = np.random.default_rng(44)
        gallery = random_gallery(rng, 6, 50)
        idx = build_index(gallery)
        for _ in range(10):
            query = [desc(unit(rng.normal(size=8))) for _ in range(4)]
            scores = lnbnn_score(query, idx, k=4)
            assert all(v >= 0.0 for v in scores.values())

    def test_index_too_small(self):
        rng = np.random.default_rng(45)
        gallery = random_gallery(rng, 2, 4)
        idx = build_index(gallery)
        with pytest.raises(IndexTooSmall):
            lnbnn_score([desc(unit(rng.normal(size=8)))], idx, k=4)

    def test_exact_ties_are_continuous_and_match_oracle(self):
        # when equal distances straddle the k boundary the tied entries earn
        # exactly zero, so tie placement can never change a score
        v = unit([1.0, 0.0, 0.0])
        far = unit([0.0, 1.0, 0.0])
        gallery = {
            "A": [DescriptorSet("A", Side.RIGHT, [desc(v, "A")])],
            "B": [DescriptorSet("B", Side.RIGHT, [desc(v, "B"), desc(far, "B")])],
        }
        idx = build_index(gallery)
        for k in (1, 2):
            got = lnbnn_score([desc(v)], idx, k=k)
            expected = lnbnn_reference(
                [v], [idx.vectors[i] for i in range(idx.size)], list(idx.owners), k
            )
            assert got == expected
        k1 = lnbnn_score([desc(v)], idx, k=1)
        assert k1["A"] == 0.0 and k1["B"] == 0.0
        k2 = lnbnn_score([desc(v)], idx, k=2)
        assert k2["A"] == k2["B"] > 0.0

    def test_per_side_policy_restricts_and_sums(self):
        rng = np.random.default_rng(46)
        left_vecs = [unit(rng.normal(size=6)) for _ in range(8)]
        right_vecs = [unit(rng.normal(size=6)) for _ in range(8)]
        gallery = {
            "A": [
                DescriptorSet(
                    "A", Side.LEFT, [desc(v, "A", "left") for v in left_vecs[:4]]
                ),
                DescriptorSet(
                    "A", Side.RIGHT, [desc(v, "A", "right") for v in right_vecs[:4]]
                ),
            ],
            "B": [
                DescriptorSet(
                    "B", Side.LEFT, [desc(v, "B", "left") for v in left_vecs[4:]]
                ),
                DescriptorSet(
                    "B", Side.RIGHT, [desc(v, "B", "right") for v in right_vecs[4:]]
                ),
            ],
        }
        idx = build_index(gallery)
        ql = desc(left_vecs[0], side="left")
        qr = desc(right_vecs[5], side="right")
        both = lnbnn_score([ql, qr], idx, k=2, side_policy="per_side")
        only_l = lnbnn_score([ql], idx, k=2, side_policy="per_side")
        only_r = lnbnn_score([qr], idx, k=2, side_policy="per_side")
        for owner in ("A", "B"):
            assert both[owner] == pytest.approx(only_l[owner] + only_r[owner])

    def test_per_side_skips_absent_side(self):
        rng = np.random.default_rng(47)
        gallery = random_gallery(rng, 2, 8)  # right-side only
        idx = build_index(gallery)
        q = desc(unit(rng.normal(size=8)), side="left")
        scores = lnbnn_score([q], idx, k=2, side_policy="per_side")
        assert all(v == 0.0 for v in scores.values())


class TestSnapshot:
    def test_round_trip(self, simple_gallery, tmp_path):
        idx = build_index(simple_gallery)
        path = tmp_path / "index.npz"
        save_index(idx, path)
        back = load_index(path)
        assert back.generation == idx.generation
        assert back.owners == idx.owners
        assert back.sides == idx.sides
        assert np.array_equal(back.vectors, idx.vectors)
        assert np.array_equal(back.scales, idx.scales)

    def test_loaded_index_scores_identically(self, simple_gallery, tmp_path):
        rng = np.random.default_rng(48)
        idx = build_index(simple_gallery)
        path = tmp_path / "index.npz"
        save_index(idx, path)
        q = [desc(unit(rng.normal(size=8)))]
        assert lnbnn_score(q, load_index(path), k=3) == lnbnn_score(q, idx, k=3)

    def test_bad_format_rejected(self, tmp_path):
        path = tmp_path / "bogus.npz"
        np.savez(path, format=np.array("other/9"), vectors=np.zeros((1, 2)))
        with pytest.raises(ValidationError):
            load_index(path)


class TestFuse:
    def test_zero_contour_evidence(self):
        assert fuse(0.5, 0.0, FusionConfig()) == 0.5

    def test_hand_arithmetic(self):
        assert fuse(0.925, 3.0, FusionConfig()) == pytest.approx(0.625, abs=1e-12)

    def test_zero_both(self):
        assert fuse(0.0, 0.0, FusionConfig()) == 0.0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            FusionConfig(curv_coefficient=-0.1)
        with pytest.raises(ValueError):
            FusionConfig(lnbnn_k=0)


class TestRanking:
    def codes(self, texts):
        return {
            f"I{i}": parse_code(t, DEFAULT_SCHEMA) for i, t in enumerate(texts)
        }

    def test_gallery_of_one(self):
        codes = self.codes(["F:AD:T2:U:U:N1:U:X0"])
        query = MatchQuery(code=parse_code("F:AD:T2:U:U:N1:U:X0", DEFAULT_SCHEMA))
        ranked = rank_candidates(query, codes, idx=None)
        assert len(ranked) == 1
        assert ranked[0].rank == 1
        assert ranked[0].fused_score == 0.0

    def test_identical_code_and_contour_wins(self):
        rng = np.random.default_rng(49)
        target = unit(rng.normal(size=8))
        gallery = {
            "I0": [DescriptorSet("I0", Side.RIGHT, [desc(target, "I0")])],
            "I1": [
                DescriptorSet(
                    "I1",
                    Side.RIGHT,
                    [desc(unit(rng.normal(size=8)), "I1") for _ in range(6)],
                )
            ],
        }
        idx = build_index(gallery)
        codes = {
            "I0": parse_code("F:AD:T2:U:U:N1:U:X0", DEFAULT_SCHEMA),
            "I1": parse_code("M:JUV:T0:H1:U:U:U:X1", DEFAULT_SCHEMA),
        }
        query = MatchQuery(
            code=parse_code("F:AD:T2:U:U:N1:U:X0", DEFAULT_SCHEMA),
            descriptors=[desc(target)],
        )
        ranked = rank_candidates(query, codes, idx, FusionConfig(lnbnn_k=2))
        assert ranked[0].individual_id == "I0"
        assert ranked[0].rank == 1

    def test_ranks_cover_gallery_ascending(self):
        rng = np.random.default_rng(50)
        seek = {f"I{i}": rng.uniform(0, 0.925) for i in range(10)}
        curv = {f"I{i}": rng.uniform(0, 2) for i in range(10)}
        ranked = rank_from_scores(seek, curv)
        assert [m.rank for m in ranked] == list(range(1, 11))
        fused = [m.fused_score for m in ranked]
        assert fused == sorted(fused)
        assert {m.individual_id for m in ranked} == set(seek)

    def test_uniform_contour_shift_preserves_order(self):
        rng = np.random.default_rng(51)
        seek = {f"I{i}": rng.uniform(0, 0.925) for i in range(8)}
        curv = {f"I{i}": rng.uniform(0, 2) for i in range(8)}
        base = [m.individual_id for m in rank_from_scores(seek, curv)]
        for c in (0.5, 3.0, 100.0):
            shifted = {k: v + c for k, v in curv.items()}
            assert [m.individual_id for m in rank_from_scores(seek, shifted)] == base

    def test_zero_coefficient_equals_seek_order(self):
        rng = np.random.default_rng(52)
        seek = {f"I{i}": float(v) for i, v in enumerate(rng.uniform(0, 0.9, 9))}
        curv = {f"I{i}": float(v) for i, v in enumerate(rng.uniform(0, 5, 9))}
        ranked = rank_from_scores(seek, curv, FusionConfig(curv_coefficient=0.0))
        expected = sorted(seek, key=lambda i: (seek[i], -curv[i], seek[i], i))
        assert [m.individual_id for m in ranked] == expected

    def test_identical_codes_equals_contour_order(self):
        rng = np.random.default_rng(53)
        seek = {f"I{i}": 0.4 for i in range(9)}
        curv = {f"I{i}": float(v) for i, v in enumerate(rng.uniform(0, 5, 9))}
        ranked = rank_from_scores(seek, curv)
        expected = sorted(curv, key=lambda i: -curv[i])
        assert [m.individual_id for m in ranked] == expected

    def test_tie_breaking_chain(self):
        seek = {"B": 0.2, "A": 0.2, "C": 0.1}
        curv = {"B": 1.0, "A": 1.0, "C": 0.0}
        # A and B fully tied -> id order; C ties B on fused score (0.1) but
        # loses on contour evidence
        ranked = rank_from_scores(seek, curv)
        assert [m.individual_id for m in ranked] == ["A", "B", "C"]

    def test_rank_monotone_in_contour_score(self):
        rng = np.random.default_rng(54)
        seek = {f"I{i}": float(v) for i, v in enumerate(rng.uniform(0, 0.9, 12))}
        curv = {f"I{i}": float(v) for i, v in enumerate(rng.uniform(0, 3, 12))}

        def rank_of(ind, scores):
            ranked = rank_from_scores(seek, scores)
            return next(m.rank for m in ranked if m.individual_id == ind)

        target = "I5"
        previous = rank_of(target, curv)
        bumped = dict(curv)
        for _ in range(20):
            bumped[target] += float(rng.uniform(0.01, 0.5))
            now = rank_of(target, bumped)
            assert now <= previous
            previous = now

    def test_empty_gallery(self):
        query = MatchQuery(code=parse_code("F:AD:T2:U:U:N1:U:X0", DEFAULT_SCHEMA))
        with pytest.raises(EmptyGallery):
            rank_candidates(query, {}, idx=None)
        with pytest.raises(EmptyGallery):
            rank_from_scores({}, {})

    def test_no_contours_means_seek_only(self):
        codes = self.codes(["F:AD:T2:U:U:N1:U:X0", "M:JUV:T0:H1:U:U:U:X1"])
        query = MatchQuery(code=parse_code("F:AD:T2:U:U:N1:U:X0", DEFAULT_SCHEMA))
        ranked = rank_candidates(query, codes, idx=None)
        assert all(m.contour_score == 0.0 for m in ranked)
        assert ranked[0].individual_id == "I0"
