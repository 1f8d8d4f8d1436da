"""HTTP service exposing the full identification workflow.

All endpoints live under /api. Every response that touches a registry row
carries that row's optimistic version, so clients can detect concurrent
edits. Domain failures map to structured JSON error bodies:

    409  state conflicts (version, duplicate, already-assigned, not-coded)
    404  unknown ids
    422  validation problems
    502  event feed unreachable

Match queries read the most recently built descriptor index generation;
attribute-code distances are always computed against live registry codes.
"""
from __future__ import annotations

import io
import math
import threading
from typing import Any

import httpx
from fastapi import Depends, FastAPI, File, HTTPException, Request, UploadFile
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from ..errors import (
    AlreadyAssigned,
    DuplicateEvent,
    DuplicatePhoto,
    EmptyGallery,
    FeedUnreachable,
    HerdbookError,
    IndexTooSmall,
    NoBoxes,
    NotCoded,
    SightingResolved,
    UnknownIndividual,
    ValidationError,
    VersionConflict,
)
from ..ingest import fetch_active_events, ingest_events, parse_instant
from ..match import MatchQuery, index_from_registry, query_descriptors, rank_candidates, save_index
from ..registry import Registry
from ..registry.dump import export_dump
from ..seek.code import format_code, parse_code
from ..seek.schema import WILDCARD
from .config import ServiceConfig


class NotFound(HerdbookError):
    """Requested entity does not exist."""


_STATUS_RULES: tuple[tuple[type, int], ...] = (
    (VersionConflict, 409),
    (DuplicateEvent, 409),
    (DuplicatePhoto, 409),
    (AlreadyAssigned, 409),
    (SightingResolved, 409),
    (NoBoxes, 409),
    (NotCoded, 409),
    (UnknownIndividual, 404),
    (NotFound, 404),
    (FeedUnreachable, 502),
)


class ApiSession(BaseModel):
    user: str
    role: str
    token: str


class GroupSightingIn(BaseModel):
    event_ref: str
    timestamp: str
    latitude: float | None = None
    longitude: float | None = None


class BoxIn(BaseModel):
    x: float
    y: float
    w: float
    h: float
    subgroup_index: int


class BoxesPut(BaseModel):
    boxes: list[BoxIn]
    expected_version: int | None = None


class CodePut(BaseModel):
    code: str
    expected_version: int | None = None


class ContourIn(BaseModel):
    side: str
    points: list[list[float]]
    photo_id: str | None = None
    traced_on: str = "original"


class AssignIn(BaseModel):
    individual_id: str | None = None
    display_name: str | None = None
    expected_version: int | None = None


class ReassignIn(BaseModel):
    individual_id: str
    expected_version: int | None = None


class ParseIn(BaseModel):
    code: str


class FeedSyncIn(BaseModel):
    since: str | None = None


def _gs_json(g) -> dict[str, Any]:
    return {
        "id": g.id,
        "event_ref": g.event_ref,
        "timestamp": g.timestamp,
        "latitude": g.lat,
        "longitude": g.lon,
        "status": g.status,
        "version": g.version,
    }


def _photo_json(p) -> dict[str, Any]:
    return {
        "id": p.id,
        "group_sighting": p.group_sighting,
        "content_hash": p.content_hash,
        "width": p.width,
        "height": p.height,
        "version": p.version,
        "preview_url": f"/api/photos/{p.id}/preview",
        "original_url": f"/api/photos/{p.id}/original",
    }


def _box_json(b) -> dict[str, Any]:
    return {
        "id": b.id,
        "photo": b.photo,
        "x": b.x,
        "y": b.y,
        "w": b.w,
        "h": b.h,
        "subgroup_index": b.subgroup_index,
    }


def _sighting_json(s) -> dict[str, Any]:
    return {
        "id": s.id,
        "group_sighting": s.group_sighting,
        "subgroup_index": s.subgroup_index,
        "seek_code": s.seek_code,
        "assigned_individual": s.assigned_individual,
        "version": s.version,
    }


def _individual_json(i) -> dict[str, Any]:
    return {"id": i.id, "display_name": i.display_name, "version": i.version}


def _contour_json(c) -> dict[str, Any]:
    return {
        "id": c.id,
        "sighting": c.sighting,
        "side": c.side,
        "n_points": len(c.points),
        "photo": c.photo,
    }


def create_app(
    config: ServiceConfig,
    registry: Registry | None = None,
    feed_client: httpx.Client | None = None,
) -> FastAPI:
    """Assemble the service around one registry instance."""
    app = FastAPI(title="herdbook", docs_url="/api/docs", openapi_url="/api/openapi.json")
    reg = registry if registry is not None else Registry(
        db_path=config.db_path, photo_root=config.photo_root, schema=config.schema
    )
    app.state.registry = reg
    app.state.config = config
    app.state.index = None
    app.state.index_lock = threading.Lock()
    app.state.feed_client = feed_client
    schema = config.schema

    @app.exception_handler(HerdbookError)
    def domain_error(request: Request, exc: HerdbookError) -> JSONResponse:
        status = 422
        for klass, code in _STATUS_RULES:
            if isinstance(exc, klass):
                status = code
                break
        return JSONResponse(
            {"error": type(exc).__name__, "detail": str(exc)}, status_code=status
        )

    def authenticate(request: Request) -> ApiSession:
        header = request.headers.get("authorization", "")
        if not header.startswith("Bearer "):
            raise HTTPException(
                401, detail="missing bearer token",
                headers={"WWW-Authenticate": "Bearer"},
            )
        token = header.removeprefix("Bearer ")
        entry = config.user_for_token(token)
        if entry is None:
            raise HTTPException(
                401, detail="unknown token", headers={"WWW-Authenticate": "Bearer"}
            )
        return ApiSession(user=entry.user, role=entry.role, token=token)

    def reviewer_or_admin(
        session: ApiSession = Depends(authenticate),
    ) -> ApiSession:
        if session.role not in ("Reviewer", "Admin"):
            raise HTTPException(
                403,
                detail=f"role {session.role} cannot confirm assignments;"
                " Reviewer or Admin required",
            )
        return session

    def _gs_or_404(gs_id: str):
        try:
            return reg.group_sighting(gs_id)
        except ValidationError as exc:
            raise NotFound(str(exc)) from exc

    def _photo_or_404(photo_id: str):
        try:
            return reg.photo(photo_id)
        except ValidationError as exc:
            raise NotFound(str(exc)) from exc

    def _sighting_or_404(is_id: str):
        try:
            return reg.individual_sighting(is_id)
        except ValidationError as exc:
            raise NotFound(str(exc)) from exc

    # -- service status and schema ------------------------------------------

    @app.get("/api/health")
    def health() -> dict[str, Any]:
        idx = app.state.index
        return {
            "service": "herdbook",
            "status": "ok",
            "schema_version": schema.version,
            "index_generation": idx.generation if idx is not None else None,
            "index_stale": reg.index_stale(),
        }

    @app.get("/api/schema")
    def get_schema(session: ApiSession = Depends(authenticate)) -> dict[str, Any]:
        body = schema.to_dict()
        body["wildcard"] = WILDCARD
        return body

    @app.post("/api/schema/parse")
    def parse_echo(
        body: ParseIn, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        code = parse_code(body.code, schema)
        return {
            "canonical": format_code(code, schema),
            "slots": dict(zip(schema.slot_names, code.values)),
            "wildcard_count": code.wildcard_count,
        }

    # -- event feed -----------------------------------------------------------

    def _feed_config():
        if config.feed is None:
            raise ValidationError("no event feed configured")
        return config.feed

    @app.get("/api/feed/events")
    def feed_events(
        since: str | None = None, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        events = fetch_active_events(
            _feed_config(), since=since, client=app.state.feed_client
        )
        linked = {g.event_ref for g in reg.list_group_sightings()}
        return {
            "events": [
                {
                    "external_id": e.external_id,
                    "recorded_at": e.recorded_at,
                    "latitude": e.latitude,
                    "longitude": e.longitude,
                    "reporter": e.reporter,
                    "notes": e.notes,
                    "linked": e.external_id in linked,
                }
                for e in events
            ]
        }

    @app.post("/api/feed/sync")
    def feed_sync(
        body: FeedSyncIn, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        events = fetch_active_events(
            _feed_config(), since=body.since, client=app.state.feed_client
        )
        summary = ingest_events(reg, events)
        return {
            "created": summary.created,
            "duplicates": summary.duplicates,
            "invalid": summary.invalid,
            "counts": summary.counts,
        }

    # -- group sightings ------------------------------------------------------

    @app.post("/api/group-sightings", status_code=201)
    def create_group_sighting(
        body: GroupSightingIn, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        parse_instant(body.timestamp)
        gs = reg.create_group_sighting(
            body.event_ref, body.timestamp, body.latitude, body.longitude
        )
        return _gs_json(gs)

    @app.get("/api/group-sightings")
    def list_group_sightings(
        page: int = 1,
        page_size: int = 50,
        session: ApiSession = Depends(authenticate),
    ) -> dict[str, Any]:
        if page < 1 or page_size < 1:
            raise ValidationError("page and page_size must be positive")
        everything = reg.list_group_sightings()
        total = len(everything)
        start = (page - 1) * page_size
        return {
            "items": [_gs_json(g) for g in everything[start : start + page_size]],
            "page": page,
            "page_count": max(1, math.ceil(total / page_size)),
            "total": total,
        }

    @app.get("/api/group-sightings/{gs_id}")
    def get_group_sighting(
        gs_id: str, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        gs = _gs_or_404(gs_id)
        photos = reg.photos_of(gs_id)
        return {
            **_gs_json(gs),
            "photos": [
                {**_photo_json(p), "boxes": [_box_json(b) for b in reg.boxes_of(p.id)]}
                for p in photos
            ],
            "sightings": [_sighting_json(s) for s in reg.sightings_of(gs_id)],
        }

    @app.post("/api/group-sightings/{gs_id}/photos", status_code=201)
    async def upload_photo(
        gs_id: str,
        file: UploadFile = File(...),
        session: ApiSession = Depends(authenticate),
    ) -> dict[str, Any]:
        _gs_or_404(gs_id)
        data = await file.read()
        photo = reg.add_photo(gs_id, data, file.filename or "photo.jpg")
        return _photo_json(photo)

    @app.post("/api/group-sightings/{gs_id}/derive")
    def derive_sightings(
        gs_id: str, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        _gs_or_404(gs_id)
        sightings = reg.derive_individual_sightings(gs_id)
        return {
            "sightings": [_sighting_json(s) for s in sightings],
            "group_sighting": _gs_json(reg.group_sighting(gs_id)),
        }

    @app.post("/api/group-sightings/{gs_id}/resolve")
    def resolve(
        gs_id: str, session: ApiSession = Depends(reviewer_or_admin)
    ) -> dict[str, Any]:
        _gs_or_404(gs_id)
        return _gs_json(reg.resolve_group_sighting(gs_id))

    # -- photos and boxes -------------------------------------------------------

    @app.get("/api/photos/{photo_id}")
    def get_photo(
        photo_id: str, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        photo = _photo_or_404(photo_id)
        return {**_photo_json(photo), "boxes": [_box_json(b) for b in reg.boxes_of(photo_id)]}

    @app.get("/api/photos/{photo_id}/preview")
    def photo_preview(
        photo_id: str, session: ApiSession = Depends(authenticate)
    ) -> Response:
        photo = _photo_or_404(photo_id)
        return Response(
            reg.photos.open_preview(photo.content_hash), media_type="image/jpeg"
        )

    @app.get("/api/photos/{photo_id}/original")
    def photo_original(
        photo_id: str, session: ApiSession = Depends(authenticate)
    ) -> Response:
        photo = _photo_or_404(photo_id)
        path = reg.photos.find_original(photo.content_hash)
        media = {
            ".jpg": "image/jpeg",
            ".jpeg": "image/jpeg",
            ".png": "image/png",
            ".webp": "image/webp",
        }.get(path.suffix.lower(), "application/octet-stream")
        return Response(path.read_bytes(), media_type=media)

    @app.put("/api/photos/{photo_id}/boxes")
    def put_boxes(
        photo_id: str, body: BoxesPut, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        _photo_or_404(photo_id)
        boxes = reg.add_boxes(
            photo_id,
            [(b.x, b.y, b.w, b.h, b.subgroup_index) for b in body.boxes],
            expected_version=body.expected_version,
        )
        photo = reg.photo(photo_id)
        return {
            "boxes": [_box_json(b) for b in boxes],
            "photo_version": photo.version,
            "group_sighting": _gs_json(reg.group_sighting(photo.group_sighting)),
        }

    # -- individual sightings --------------------------------------------------

    @app.get("/api/sightings/{is_id}")
    def get_sighting(
        is_id: str, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        s = _sighting_or_404(is_id)
        return {
            **_sighting_json(s),
            "contours": [_contour_json(c) for c in reg.contours_of(is_id)],
        }

    @app.put("/api/sightings/{is_id}/code")
    def put_code(
        is_id: str, body: CodePut, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        _sighting_or_404(is_id)
        updated = reg.set_seek_code(is_id, body.code, expected_version=body.expected_version)
        return _sighting_json(updated)

    @app.post("/api/sightings/{is_id}/contours", status_code=201)
    def post_contour(
        is_id: str, body: ContourIn, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        _sighting_or_404(is_id)
        if body.traced_on not in ("original", "preview"):
            raise ValidationError("traced_on must be 'original' or 'preview'")
        contour = reg.add_contour(
            is_id,
            body.side,
            body.points,
            photo_id=body.photo_id,
            from_preview=(body.traced_on == "preview"),
        )
        return {
            **_contour_json(contour),
            "sighting_version": reg.individual_sighting(is_id).version,
        }

    @app.get("/api/sightings/{is_id}/match")
    def match(
        is_id: str, top_k: int = 15, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        if top_k < 1:
            raise ValidationError("top_k must be positive")
        s = _sighting_or_404(is_id)
        if s.seek_code is None:
            raise NotCoded(f"sighting {is_id} has no attribute code yet")
        idx = app.state.index
        base = {
            "sighting": is_id,
            "top_k": top_k,
            "index_generation": idx.generation if idx is not None else None,
            "index_stale": reg.index_stale(),
        }

        code_table = {
            ind: parse_code(text, schema)
            for ind, text in reg.gallery_codes().items()
        }
        query = MatchQuery(
            code=parse_code(s.seek_code, schema),
            descriptors=query_descriptors(reg, is_id, config.pipeline),
        )
        try:
            ranked = rank_candidates(
                query, code_table, idx, cfg=config.fusion, schema=schema
            )
            contour_evidence = idx is not None and bool(query.descriptors)
        except EmptyGallery:
            return {
                **base,
                "matches": [],
                "gallery_size": 0,
                "contour_evidence": False,
                "create_new_individual": True,
                "message": "gallery empty: create new individual",
            }
        except IndexTooSmall:
            ranked = rank_candidates(
                query, code_table, None, cfg=config.fusion, schema=schema
            )
            contour_evidence = False

        matches = []
        for m in ranked[:top_k]:
            individual = reg.individual(m.individual_id)
            previews: list[str] = []
            history = reg.individual_history(m.individual_id)
            if history:
                latest = history[-1]
                previews = [
                    f"/api/photos/{p.id}/preview"
                    for p in reg.photos_of(latest.group_sighting)[:4]
                ]
            matches.append(
                {
                    "individual_id": m.individual_id,
                    "display_name": individual.display_name,
                    "rank": m.rank,
                    "seek_distance": float(m.seek_distance),
                    "contour_score": float(m.contour_score),
                    "fused_score": float(m.fused_score),
                    "preview_urls": previews,
                }
            )
        return {
            **base,
            "matches": matches,
            "gallery_size": len(code_table),
            "contour_evidence": contour_evidence,
            "create_new_individual": False,
        }

    @app.post("/api/sightings/{is_id}/assign")
    def assign(
        is_id: str, body: AssignIn, session: ApiSession = Depends(reviewer_or_admin)
    ) -> dict[str, Any]:
        s = _sighting_or_404(is_id)
        if s.seek_code is None:
            raise NotCoded(f"sighting {is_id} has no attribute code yet")
        individual = reg.assign_to_individual(
            is_id,
            target=body.individual_id,
            display_name=body.display_name,
            expected_version=body.expected_version,
        )
        return {
            "individual": _individual_json(individual),
            "sighting": _sighting_json(reg.individual_sighting(is_id)),
            "created": body.individual_id is None,
        }

    @app.post("/api/sightings/{is_id}/reassign")
    def reassign(
        is_id: str, body: ReassignIn, session: ApiSession = Depends(reviewer_or_admin)
    ) -> dict[str, Any]:
        _sighting_or_404(is_id)
        individual = reg.reassign(
            is_id, body.individual_id, expected_version=body.expected_version
        )
        return {
            "individual": _individual_json(individual),
            "sighting": _sighting_json(reg.individual_sighting(is_id)),
        }

    # -- individuals -----------------------------------------------------------

    @app.get("/api/individuals")
    def list_individuals(session: ApiSession = Depends(authenticate)) -> dict[str, Any]:
        items = []
        for ind in reg.list_individuals():
            history = reg.individual_history(ind.id)
            items.append(
                {
                    **_individual_json(ind),
                    "sighting_count": len(history),
                    "latest_code": reg.latest_code(ind.id),
                }
            )
        return {"items": items, "total": len(items)}

    @app.get("/api/individuals/{ind_id}")
    def get_individual(
        ind_id: str, session: ApiSession = Depends(authenticate)
    ) -> dict[str, Any]:
        ind = reg.individual(ind_id)
        return {
            **_individual_json(ind),
            "latest_code": reg.latest_code(ind_id),
            "history": [_sighting_json(s) for s in reg.individual_history(ind_id)],
        }

    # -- export and index --------------------------------------------------------

    @app.get("/api/export")
    def export(session: ApiSession = Depends(authenticate)) -> dict[str, Any]:
        return export_dump(reg)

    @app.post("/api/index/rebuild")
    def rebuild_index(session: ApiSession = Depends(reviewer_or_admin)) -> dict[str, Any]:
        with app.state.index_lock:
            idx = index_from_registry(
                reg, config.pipeline, previous=app.state.index
            )
            app.state.index = idx
            reg.mark_index_fresh()
        return {
            "generation": idx.generation if idx is not None else None,
            "size": idx.size if idx is not None else 0,
            "individuals": list(idx.individuals()) if idx is not None else [],
        }

    @app.get("/api/index/snapshot")
    def index_snapshot(session: ApiSession = Depends(authenticate)) -> Response:
        idx = app.state.index
        if idx is None:
            raise NotFound("no descriptor index built yet")
        buf = io.BytesIO()
        save_index(idx, buf)
        return Response(
            buf.getvalue(),
            media_type="application/octet-stream",
            headers={"Content-Disposition": "attachment; filename=index.npz"},
        )

    return app
