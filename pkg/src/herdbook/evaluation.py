"""Batch evaluation over registry dumps.

Works on the dump dictionary itself rather than a live registry, so the
same code paths serve service exports and synthetic populations. The split
protocol is leave-one-out: each individual's first few coded sightings (in
dump order, which is chronological for exports and synthetic data) form the
gallery, and every later coded sighting becomes one query.
"""
from __future__ import annotations

import logging
import tempfile
from collections import Counter
from datetime import datetime, timedelta, timezone
from io import BytesIO
from typing import Any, Mapping

from PIL import Image

from .contour.geometry import Contour, Side
from .contour.pipeline import ContourPipelineConfig, describe_contour
from .errors import (
    DegenerateContour,
    EmptyInput,
    InsufficientData,
    SchemaMismatch,
)
from .match.fusion import FusionConfig, RankedMatch, rank_from_scores
from .match.index import DescriptorIndex, build_index
from .match.lnbnn import lnbnn_score
from .registry.dump import export_dump, validate_dump
from .registry.store import Registry
from .seek.code import SeekCode, format_code, parse_code
from .seek.distance import SeekWeights, attribute_agreement, seek_distance
from .seek.schema import DEFAULT_SCHEMA, SeekSchema
from .synth import SyntheticPopulation

logger = logging.getLogger(__name__)

METHODS = ("seek", "curv", "hybrid")

_SYNTH_EPOCH = datetime(2026, 1, 1, tzinfo=timezone.utc)


def _check_schema(dump: Mapping[str, Any], schema: SeekSchema) -> None:
    version = dump.get("seek_schema_version")
    if version is not None and version != schema.version:
        raise SchemaMismatch(
            f"dump uses schema {version!r}, evaluator has {schema.version!r}"
        )


def _coded_sightings_by_individual(
    dump: Mapping[str, Any]
) -> dict[str, list[dict]]:
    """Assigned, coded sightings per individual, in dump (file) order."""
    out: dict[str, list[dict]] = {}
    for s in dump["sightings"]:
        if s.get("assigned_individual") and s.get("seek_code"):
            out.setdefault(s["assigned_individual"], []).append(s)
    return out


def _contours_by_sighting(dump: Mapping[str, Any]) -> dict[str, list[dict]]:
    out: dict[str, list[dict]] = {}
    for c in dump["contours"]:
        out.setdefault(c["sighting"], []).append(c)
    return out


def _describe_rows(
    rows: list[dict], config: ContourPipelineConfig, owner_tag: str | None
):
    """Descriptor sets for a sighting's contour rows; degenerate ones skipped."""
    sets = []
    for row in rows:
        contour = Contour(
            points=row["points"], side=Side(row["side"]), source_sighting=row["sighting"]
        )
        try:
            sets.append(describe_contour(contour, config, owner_tag=owner_tag))
        except DegenerateContour:
            logger.warning("skipping degenerate contour %s", row.get("id"))
    return sets


def eval_topk(
    dump: Mapping[str, Any],
    codes_per_individual: int = 2,
    ks: tuple[int, ...] = (1, 5, 10, 15),
    methods: tuple[str, ...] = METHODS,
    fusion: FusionConfig = FusionConfig(),
    pipeline: ContourPipelineConfig = ContourPipelineConfig(),
    weights: SeekWeights | None = None,
    schema: SeekSchema = DEFAULT_SCHEMA,
) -> dict[str, Any]:
    """Top-k retrieval accuracy per method over held-out sightings.

    Every individual contributes its first codes_per_individual coded
    sightings to the gallery; individuals with more become query sources,
    one query per extra sighting. Individuals with fewer sit in the gallery
    as distractors only. A query counts as a top-k hit when its true
    individual appears in the first k ranks. Fully deterministic.
    """
    validate_dump(dict(dump))
    _check_schema(dump, schema)
    if codes_per_individual < 1:
        raise ValueError("codes_per_individual must be positive")
    if not ks or any(k < 1 for k in ks):
        raise ValueError("ks must be positive rank cutoffs")
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {METHODS}")
    weights = weights if weights is not None else SeekWeights.default()

    by_ind = _coded_sightings_by_individual(dump)
    if not by_ind:
        raise InsufficientData("dump has no coded, assigned sightings")
    contours = _contours_by_sighting(dump)

    gallery_codes: dict[str, list[SeekCode]] = {}
    gallery_sets: dict[str, list] = {}
    queries: list[tuple[str, dict]] = []
    for ind in sorted(by_ind):
        rows = by_ind[ind]
        gallery_rows = rows[:codes_per_individual]
        gallery_codes[ind] = [
            parse_code(r["seek_code"], schema) for r in gallery_rows
        ]
        gallery_sets[ind] = [
            ds
            for r in gallery_rows
            for ds in _describe_rows(contours.get(r["id"], []), pipeline, ind)
        ]
        queries.extend((ind, r) for r in rows[codes_per_individual:])
    if not queries:
        raise InsufficientData(
            f"no individual has more than {codes_per_individual} coded"
            " sightings, so there is nothing to hold out"
        )

    idx: DescriptorIndex | None = None
    if any(gallery_sets.values()):
        idx = build_index(gallery_sets)

    curv_cfg = FusionConfig(
        curv_coefficient=1.0,
        lnbnn_k=fusion.lnbnn_k,
        side_policy=fusion.side_policy,
    )
    zeros = {ind: 0.0 for ind in gallery_codes}
    hits = {m: {k: 0 for k in ks} for m in methods}
    for true_ind, row in queries:
        query_code = parse_code(row["seek_code"], schema)
        seek_d = {
            ind: min(
                seek_distance(query_code, code, weights, schema)
                for code in codes
            )
            for ind, codes in gallery_codes.items()
        }
        curv_s: dict[str, float] = {}
        if idx is not None:
            qdescs = [
                d
                for ds in _describe_rows(
                    contours.get(row["id"], []), pipeline, None
                )
                for d in ds.descriptors
            ]
            if qdescs:
                curv_s = lnbnn_score(
                    qdescs, idx, fusion.lnbnn_k, side_policy=fusion.side_policy.value
                )
        for method in methods:
            if method == "seek":
                ranking = rank_from_scores(seek_d, {}, fusion)
            elif method == "curv":
                ranking = rank_from_scores(zeros, curv_s, curv_cfg)
            else:
                ranking = rank_from_scores(seek_d, curv_s, fusion)
            true_rank = next(
                r.rank for r in ranking if r.individual_id == true_ind
            )
            for k in ks:
                if true_rank <= k:
                    hits[method][k] += 1

    return {
        "codes_per_individual": codes_per_individual,
        "ks": list(ks),
        "methods": list(methods),
        "n_individuals": len(gallery_codes),
        "n_queries": len(queries),
        "gallery_descriptors": idx.size if idx is not None else 0,
        "accuracy": {
            m: {k: hits[m][k] / len(queries) for k in ks} for m in methods
        },
    }


def seek_reports(
    dump: Mapping[str, Any], schema: SeekSchema = DEFAULT_SCHEMA
) -> dict[str, Any]:
    """Attribute value frequencies plus within-individual slot agreement.

    Histograms cover every coded sighting; agreement pools code pairs inside
    each individual that was coded at least twice and is None when no such
    individual exists.
    """
    validate_dump(dict(dump))
    _check_schema(dump, schema)
    codes: list[tuple[str | None, SeekCode]] = [
        (s.get("assigned_individual"), parse_code(s["seek_code"], schema))
        for s in dump["sightings"]
        if s.get("seek_code")
    ]
    if not codes:
        raise EmptyInput("dump contains no coded sightings")

    counts: dict[str, Counter] = {
        name: Counter() for name in schema.slot_names
    }
    for _, code in codes:
        for name, value in zip(schema.slot_names, code.values):
            counts[name][value] += 1
    n = len(codes)
    histograms = {
        name: {value: c / n for value, c in sorted(slot_counts.items())}
        for name, slot_counts in counts.items()
    }

    groups_by_ind: dict[str, list[SeekCode]] = {}
    for ind, code in codes:
        if ind is not None:
            groups_by_ind.setdefault(ind, []).append(code)
    groups = [g for g in groups_by_ind.values() if len(g) >= 2]
    agreement = attribute_agreement(groups, schema) if groups else None
    pairs = sum(len(g) * (len(g) - 1) // 2 for g in groups)

    return {
        "n_codes": n,
        "counts": {
            name: dict(sorted(c.items())) for name, c in counts.items()
        },
        "histograms": histograms,
        "agreement": agreement,
        "n_agreement_pairs": pairs,
    }


def _synth_photo_bytes() -> bytes:
    buf = BytesIO()
    Image.new("RGB", (64, 48), (116, 125, 140)).save(buf, format="PNG")
    return buf.getvalue()


def _synth_clock():
    """Deterministic second-ticking clock so same-seed dumps match exactly."""
    counter = {"n": 0}

    def clock() -> str:
        counter["n"] += 1
        return (_SYNTH_EPOCH + timedelta(seconds=counter["n"])).isoformat()

    return clock


def synth_registry(
    pop: SyntheticPopulation,
    db_path: str = ":memory:",
    photo_root: str | None = None,
) -> Registry:
    """Run a synthetic population through the full registry workflow.

    Each synthetic sighting becomes one group sighting with a stub photo,
    one box, a derived individual sighting, the code, the contour, and an
    assignment (first sighting creates the individual). The resulting dump
    is a genuine registry export, audit log included.
    """
    if photo_root is None:
        photo_root = tempfile.mkdtemp(prefix="herdbook-synth-")
    reg = Registry(
        db_path=db_path,
        photo_root=photo_root,
        schema=pop.schema,
        clock=_synth_clock(),
    )
    png = _synth_photo_bytes()
    minted: dict[str, str] = {}
    for i, s in enumerate(pop.sightings):
        stamp = (_SYNTH_EPOCH + timedelta(hours=i)).isoformat()
        gs = reg.create_group_sighting(
            f"SYN-{s.sighting_id}", stamp, -1.5, 34.9
        )
        photo = reg.add_photo(gs.id, png, f"{s.sighting_id}.png")
        reg.add_boxes(photo.id, [(4.0, 4.0, 40.0, 32.0, 1)])
        (sighting,) = reg.derive_individual_sightings(gs.id)
        reg.set_seek_code(sighting.id, format_code(s.code, pop.schema))
        reg.add_contour(
            sighting.id,
            s.contour.side.value,
            s.contour.points.tolist(),
            photo_id=photo.id,
        )
        if s.individual_id in minted:
            reg.assign_to_individual(sighting.id, target=minted[s.individual_id])
        else:
            ind = reg.assign_to_individual(
                sighting.id, display_name=s.individual_id
            )
            minted[s.individual_id] = ind.id
    return reg


def synth_dump(pop: SyntheticPopulation) -> dict[str, Any]:
    """Registry dump of a synthetic population (photos are stubs)."""
    with tempfile.TemporaryDirectory(prefix="herdbook-synth-") as tmp:
        reg = synth_registry(pop, photo_root=tmp)
        try:
            return export_dump(reg)
        finally:
            reg.close()


def ranking_for_query(
    query_code: SeekCode,
    gallery_codes: Mapping[str, list[SeekCode]],
    contour_scores: Mapping[str, float],
    fusion: FusionConfig = FusionConfig(),
    weights: SeekWeights | None = None,
    schema: SeekSchema = DEFAULT_SCHEMA,
) -> list[RankedMatch]:
    """Hybrid ranking against multi-code gallery entries (nearest code wins)."""
    weights = weights if weights is not None else SeekWeights.default()
    seek_d = {
        ind: min(seek_distance(query_code, c, weights, schema) for c in codes)
        for ind, codes in gallery_codes.items()
    }
    return rank_from_scores(seek_d, contour_scores, fusion)
