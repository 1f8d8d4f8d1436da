"""Single-file relational registry with a replayable audit log.

Every mutation flows through one internal _apply path and is recorded as an
audit row (action + JSON payload, including any generated ids), so replaying
the log against an empty registry reconstructs identical state. Versioned
rows carry optimistic version counters; callers supply the version they saw
and get VersionConflict when someone else got there first.
"""
from __future__ import annotations

import json
import re
import sqlite3
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

from ..errors import (
    AlreadyAssigned,
    DuplicateEvent,
    DuplicatePhoto,
    NoBoxes,
    OutOfBounds,
    SightingResolved,
    UnknownIndividual,
    ValidationError,
    VersionConflict,
)
from ..seek.code import format_code, parse_code
from ..seek.schema import DEFAULT_SCHEMA, SeekSchema
from .photos import PhotoStore

SCHEMA_VERSION = 1

_TABLES = """
CREATE TABLE IF NOT EXISTS meta (
    key TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS group_sightings (
    id TEXT PRIMARY KEY,
    event_ref TEXT NOT NULL UNIQUE,
    timestamp TEXT NOT NULL,
    lat REAL NOT NULL,
    lon REAL NOT NULL,
    status TEXT NOT NULL CHECK (status IN ('Open', 'Annotated', 'Resolved')),
    version INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS photos (
    id TEXT PRIMARY KEY,
    group_sighting TEXT NOT NULL REFERENCES group_sightings(id),
    content_hash TEXT NOT NULL,
    width INTEGER NOT NULL,
    height INTEGER NOT NULL,
    version INTEGER NOT NULL,
    UNIQUE (group_sighting, content_hash)
);
CREATE TABLE IF NOT EXISTS boxes (
    id TEXT PRIMARY KEY,
    photo TEXT NOT NULL REFERENCES photos(id),
    x REAL NOT NULL,
    y REAL NOT NULL,
    w REAL NOT NULL,
    h REAL NOT NULL,
    subgroup_index INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS individual_sightings (
    id TEXT PRIMARY KEY,
    group_sighting TEXT NOT NULL REFERENCES group_sightings(id),
    subgroup_index INTEGER NOT NULL,
    seek_code TEXT,
    assigned_individual TEXT REFERENCES individuals(id),
    version INTEGER NOT NULL,
    UNIQUE (group_sighting, subgroup_index)
);
CREATE TABLE IF NOT EXISTS individuals (
    id TEXT PRIMARY KEY,
    display_name TEXT NOT NULL,
    version INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS contours (
    id TEXT PRIMARY KEY,
    sighting TEXT NOT NULL REFERENCES individual_sightings(id),
    side TEXT NOT NULL CHECK (side IN ('left', 'right')),
    points TEXT NOT NULL,
    photo TEXT REFERENCES photos(id)
);
CREATE TABLE IF NOT EXISTS audit_log (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    at TEXT NOT NULL,
    entity TEXT NOT NULL,
    entity_id TEXT NOT NULL,
    action TEXT NOT NULL,
    payload TEXT NOT NULL
);
"""


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class GroupSightingRec:
    id: str
    event_ref: str
    timestamp: str
    lat: float
    lon: float
    status: str
    version: int


@dataclass(frozen=True)
class PhotoRec:
    id: str
    group_sighting: str
    content_hash: str
    width: int
    height: int
    version: int


@dataclass(frozen=True)
class BoxRec:
    id: str
    photo: str
    x: float
    y: float
    w: float
    h: float
    subgroup_index: int


@dataclass(frozen=True)
class SightingRec:
    id: str
    group_sighting: str
    subgroup_index: int
    seek_code: str | None
    assigned_individual: str | None
    version: int


@dataclass(frozen=True)
class IndividualRec:
    id: str
    display_name: str
    version: int


@dataclass(frozen=True)
class ContourRec:
    id: str
    sighting: str
    side: str
    points: list
    photo: str | None


@dataclass(frozen=True)
class AuditRow:
    seq: int
    at: str
    entity: str
    entity_id: str
    action: str
    payload: dict


class Registry:
    """All persistent state of the identification workflow."""

    def __init__(
        self,
        db_path: str | Path = ":memory:",
        photo_root: str | Path | None = None,
        schema: SeekSchema = DEFAULT_SCHEMA,
        clock: Callable[[], str] = _utc_now,
    ):
        self._conn = sqlite3.connect(str(db_path), check_same_thread=False)
        self._conn.execute("PRAGMA foreign_keys = ON")
        self._lock = threading.RLock()
        self._clock = clock
        self.schema = schema
        self.photos = PhotoStore(photo_root) if photo_root is not None else None
        with self._lock, self._conn:
            self._conn.executescript(_TABLES)
            self._conn.execute(
                "INSERT OR IGNORE INTO meta (key, value) VALUES ('schema_version', ?)",
                (str(SCHEMA_VERSION),),
            )
            self._conn.execute(
                "INSERT OR IGNORE INTO meta (key, value) VALUES ('index_stale', '1')"
            )

    def close(self) -> None:
        self._conn.close()

    # -- id generation ----------------------------------------------------

    def _take_id(self, prefix: str) -> str:
        """Reserve the next id for this prefix (advances the counter)."""
        key = f"counter_{prefix}"
        row = self._conn.execute(
            "SELECT value FROM meta WHERE key = ?", (key,)
        ).fetchone()
        n = int(row[0]) if row else 1
        self._conn.execute(
            "INSERT OR REPLACE INTO meta (key, value) VALUES (?, ?)",
            (key, str(n + 1)),
        )
        return f"{prefix}{n:04d}"

    def _note_id(self, generated: str) -> None:
        m = re.match(r"([A-Z]+)(\d+)$", generated)
        if not m:
            return
        prefix, num = m.group(1), int(m.group(2))
        key = f"counter_{prefix}"
        row = self._conn.execute(
            "SELECT value FROM meta WHERE key = ?", (key,)
        ).fetchone()
        current = int(row[0]) if row else 1
        self._conn.execute(
            "INSERT OR REPLACE INTO meta (key, value) VALUES (?, ?)",
            (key, str(max(current, num + 1))),
        )

    # -- meta flags --------------------------------------------------------

    def _set_meta(self, key: str, value: str) -> None:
        self._conn.execute(
            "INSERT OR REPLACE INTO meta (key, value) VALUES (?, ?)", (key, value)
        )

    def get_meta(self, key: str) -> str | None:
        row = self._conn.execute(
            "SELECT value FROM meta WHERE key = ?", (key,)
        ).fetchone()
        return row[0] if row else None

    def index_stale(self) -> bool:
        return self.get_meta("index_stale") == "1"

    def mark_index_fresh(self) -> None:
        with self._lock, self._conn:
            self._set_meta("index_stale", "0")

    # -- audit plumbing ----------------------------------------------------

    def _log(self, entity: str, entity_id: str, action: str, payload: dict) -> None:
        self._conn.execute(
            "INSERT INTO audit_log (at, entity, entity_id, action, payload)"
            " VALUES (?, ?, ?, ?, ?)",
            (self._clock(), entity, entity_id, action, json.dumps(payload)),
        )

    def audit_rows(self, entity_id: str | None = None) -> list[AuditRow]:
        sql = "SELECT seq, at, entity, entity_id, action, payload FROM audit_log"
        args: tuple = ()
        if entity_id is not None:
            sql += " WHERE entity_id = ?"
            args = (entity_id,)
        sql += " ORDER BY seq"
        return [
            AuditRow(r[0], r[1], r[2], r[3], r[4], json.loads(r[5]))
            for r in self._conn.execute(sql, args)
        ]

    # -- single state-change path (shared by mutators and replay) ----------

    def _apply(self, action: str, p: dict) -> None:
        c = self._conn
        if action == "create_group_sighting":
            c.execute(
                "INSERT INTO group_sightings"
                " (id, event_ref, timestamp, lat, lon, status, version)"
                " VALUES (?, ?, ?, ?, ?, 'Open', 1)",
                (p["id"], p["event_ref"], p["timestamp"], p["lat"], p["lon"]),
            )
            self._note_id(p["id"])
        elif action == "add_photo":
            c.execute(
                "INSERT INTO photos"
                " (id, group_sighting, content_hash, width, height, version)"
                " VALUES (?, ?, ?, ?, ?, 1)",
                (
                    p["id"],
                    p["group_sighting"],
                    p["content_hash"],
                    p["width"],
                    p["height"],
                ),
            )
            c.execute(
                "UPDATE group_sightings SET version = version + 1 WHERE id = ?",
                (p["group_sighting"],),
            )
            self._note_id(p["id"])
        elif action == "set_boxes":
            c.execute("DELETE FROM boxes WHERE photo = ?", (p["photo"],))
            for b in p["boxes"]:
                c.execute(
                    "INSERT INTO boxes (id, photo, x, y, w, h, subgroup_index)"
                    " VALUES (?, ?, ?, ?, ?, ?, ?)",
                    (
                        b["id"],
                        p["photo"],
                        b["x"],
                        b["y"],
                        b["w"],
                        b["h"],
                        b["subgroup_index"],
                    ),
                )
                self._note_id(b["id"])
            c.execute(
                "UPDATE photos SET version = version + 1 WHERE id = ?", (p["photo"],)
            )
            c.execute(
                "UPDATE group_sightings SET status = 'Annotated',"
                " version = version + 1 WHERE id = ?",
                (p["group_sighting"],),
            )
        elif action == "derive_sightings":
            for s in p["sightings"]:
                c.execute(
                    "INSERT INTO individual_sightings"
                    " (id, group_sighting, subgroup_index, version)"
                    " VALUES (?, ?, ?, 1)",
                    (s["id"], p["group_sighting"], s["subgroup_index"]),
                )
                self._note_id(s["id"])
            c.execute(
                "UPDATE group_sightings SET version = version + 1 WHERE id = ?",
                (p["group_sighting"],),
            )
        elif action == "set_code":
            c.execute(
                "UPDATE individual_sightings SET seek_code = ?,"
                " version = version + 1 WHERE id = ?",
                (p["code"], p["sighting"]),
            )
        elif action == "add_contour":
            c.execute(
                "INSERT INTO contours (id, sighting, side, points, photo)"
                " VALUES (?, ?, ?, ?, ?)",
                (
                    p["id"],
                    p["sighting"],
                    p["side"],
                    json.dumps(p["points"]),
                    p.get("photo"),
                ),
            )
            c.execute(
                "UPDATE individual_sightings SET version = version + 1 WHERE id = ?",
                (p["sighting"],),
            )
            self._note_id(p["id"])
        elif action == "assign":
            if p["created"]:
                c.execute(
                    "INSERT INTO individuals (id, display_name, version)"
                    " VALUES (?, ?, 1)",
                    (p["individual"], p["display_name"]),
                )
                self._note_id(p["individual"])
            else:
                c.execute(
                    "UPDATE individuals SET version = version + 1 WHERE id = ?",
                    (p["individual"],),
                )
            c.execute(
                "UPDATE individual_sightings SET assigned_individual = ?,"
                " version = version + 1 WHERE id = ?",
                (p["individual"], p["sighting"]),
            )
            self._set_meta("index_stale", "1")
        elif action == "reassign":
            c.execute(
                "UPDATE individual_sightings SET assigned_individual = ?,"
                " version = version + 1 WHERE id = ?",
                (p["to_individual"], p["sighting"]),
            )
            c.execute(
                "UPDATE individuals SET version = version + 1 WHERE id = ?",
                (p["to_individual"],),
            )
            self._set_meta("index_stale", "1")
        elif action == "resolve":
            c.execute(
                "UPDATE group_sightings SET status = 'Resolved',"
                " version = version + 1 WHERE id = ?",
                (p["group_sighting"],),
            )
        else:
            raise ValidationError(f"unknown audit action {action!r}")

    # -- reads ---------------------------------------------------------------

    def group_sighting(self, gs_id: str) -> GroupSightingRec:
        row = self._conn.execute(
            "SELECT id, event_ref, timestamp, lat, lon, status, version"
            " FROM group_sightings WHERE id = ?",
            (gs_id,),
        ).fetchone()
        if row is None:
            raise ValidationError(f"no group sighting {gs_id!r}")
        return GroupSightingRec(*row)

    def list_group_sightings(self) -> list[GroupSightingRec]:
        rows = self._conn.execute(
            "SELECT id, event_ref, timestamp, lat, lon, status, version"
            " FROM group_sightings ORDER BY id"
        ).fetchall()
        return [GroupSightingRec(*r) for r in rows]

    def group_sighting_by_event(self, event_ref: str) -> GroupSightingRec | None:
        row = self._conn.execute(
            "SELECT id, event_ref, timestamp, lat, lon, status, version"
            " FROM group_sightings WHERE event_ref = ?",
            (event_ref,),
        ).fetchone()
        return GroupSightingRec(*row) if row else None

    def photo(self, photo_id: str) -> PhotoRec:
        row = self._conn.execute(
            "SELECT id, group_sighting, content_hash, width, height, version"
            " FROM photos WHERE id = ?",
            (photo_id,),
        ).fetchone()
        if row is None:
            raise ValidationError(f"no photo {photo_id!r}")
        return PhotoRec(*row)

    def photos_of(self, gs_id: str) -> list[PhotoRec]:
        rows = self._conn.execute(
            "SELECT id, group_sighting, content_hash, width, height, version"
            " FROM photos WHERE group_sighting = ? ORDER BY id",
            (gs_id,),
        ).fetchall()
        return [PhotoRec(*r) for r in rows]

    def boxes_of(self, photo_id: str) -> list[BoxRec]:
        rows = self._conn.execute(
            "SELECT id, photo, x, y, w, h, subgroup_index FROM boxes"
            " WHERE photo = ? ORDER BY id",
            (photo_id,),
        ).fetchall()
        return [BoxRec(*r) for r in rows]

    def individual_sighting(self, is_id: str) -> SightingRec:
        row = self._conn.execute(
            "SELECT id, group_sighting, subgroup_index, seek_code,"
            " assigned_individual, version FROM individual_sightings WHERE id = ?",
            (is_id,),
        ).fetchone()
        if row is None:
            raise ValidationError(f"no individual sighting {is_id!r}")
        return SightingRec(*row)

    def sightings_of(self, gs_id: str) -> list[SightingRec]:
        rows = self._conn.execute(
            "SELECT id, group_sighting, subgroup_index, seek_code,"
            " assigned_individual, version FROM individual_sightings"
            " WHERE group_sighting = ? ORDER BY subgroup_index",
            (gs_id,),
        ).fetchall()
        return [SightingRec(*r) for r in rows]

    def individual(self, ind_id: str) -> IndividualRec:
        row = self._conn.execute(
            "SELECT id, display_name, version FROM individuals WHERE id = ?",
            (ind_id,),
        ).fetchone()
        if row is None:
            raise UnknownIndividual(f"no individual {ind_id!r}")
        return IndividualRec(*row)

    def list_individuals(self) -> list[IndividualRec]:
        rows = self._conn.execute(
            "SELECT id, display_name, version FROM individuals ORDER BY id"
        ).fetchall()
        return [IndividualRec(*r) for r in rows]

    def individual_history(self, ind_id: str) -> list[SightingRec]:
        """Sightings assigned to one individual, oldest first."""
        self.individual(ind_id)
        rows = self._conn.execute(
            "SELECT s.id, s.group_sighting, s.subgroup_index, s.seek_code,"
            " s.assigned_individual, s.version"
            " FROM individual_sightings s JOIN group_sightings g"
            " ON s.group_sighting = g.id"
            " WHERE s.assigned_individual = ? ORDER BY g.timestamp, s.id",
            (ind_id,),
        ).fetchall()
        return [SightingRec(*r) for r in rows]

    def latest_code(self, ind_id: str) -> str | None:
        coded = [s.seek_code for s in self.individual_history(ind_id) if s.seek_code]
        return coded[-1] if coded else None

    def gallery_codes(self) -> dict[str, str]:
        """Latest code per individual, skipping individuals never coded."""
        out: dict[str, str] = {}
        for ind in self.list_individuals():
            code = self.latest_code(ind.id)
            if code is not None:
                out[ind.id] = code
        return out

    def contours_of(self, is_id: str) -> list[ContourRec]:
        rows = self._conn.execute(
            "SELECT id, sighting, side, points, photo FROM contours"
            " WHERE sighting = ? ORDER BY id",
            (is_id,),
        ).fetchall()
        return [ContourRec(r[0], r[1], r[2], json.loads(r[3]), r[4]) for r in rows]

    def all_contours(self) -> list[ContourRec]:
        rows = self._conn.execute(
            "SELECT id, sighting, side, points, photo FROM contours ORDER BY id"
        ).fetchall()
        return [ContourRec(r[0], r[1], r[2], json.loads(r[3]), r[4]) for r in rows]

    # -- mutations -----------------------------------------------------------

    def create_group_sighting(
        self,
        event_ref: str,
        timestamp: str,
        lat: float | None,
        lon: float | None,
    ) -> GroupSightingRec:
        with self._lock, self._conn:
            if lat is None or lon is None:
                raise ValidationError("event lacks coordinates")
            if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
                raise ValidationError(f"coordinates out of range: {lat}, {lon}")
            if self.group_sighting_by_event(event_ref) is not None:
                raise DuplicateEvent(f"event {event_ref!r} already linked")
            payload = {
                "id": self._take_id("GS"),
                "event_ref": event_ref,
                "timestamp": timestamp,
                "lat": float(lat),
                "lon": float(lon),
            }
            self._apply("create_group_sighting", payload)
            self._log("group_sighting", payload["id"], "create_group_sighting", payload)
            return self.group_sighting(payload["id"])

    def add_photo(
        self, gs_id: str, data: bytes, filename: str = "photo.jpg"
    ) -> PhotoRec:
        with self._lock, self._conn:
            gs = self.group_sighting(gs_id)
            if gs.status == "Resolved":
                raise SightingResolved(f"{gs_id} is resolved")
            if self.photos is None:
                raise ValidationError("registry was opened without photo storage")
            stored = self.photos.put(data, filename)
            dup = self._conn.execute(
                "SELECT 1 FROM photos WHERE group_sighting = ? AND content_hash = ?",
                (gs_id, stored.content_hash),
            ).fetchone()
            if dup:
                raise DuplicatePhoto(
                    f"photo {stored.content_hash[:12]} already in {gs_id}"
                )
            payload = {
                "id": self._take_id("PH"),
                "group_sighting": gs_id,
                "content_hash": stored.content_hash,
                "width": stored.width,
                "height": stored.height,
            }
            self._apply("add_photo", payload)
            self._log("photo", payload["id"], "add_photo", payload)
            return self.photo(payload["id"])

    def add_boxes(
        self,
        photo_id: str,
        boxes: Sequence[tuple[float, float, float, float, int]],
        expected_version: int | None = None,
    ) -> list[BoxRec]:
        """Replace the photo's box set ((x, y, w, h, subgroup_index) tuples)."""
        with self._lock, self._conn:
            photo = self.photo(photo_id)
            gs = self.group_sighting(photo.group_sighting)
            if gs.status == "Resolved":
                raise SightingResolved(f"{gs.id} is resolved")
            if expected_version is not None and photo.version != expected_version:
                raise VersionConflict(
                    f"photo {photo_id} at version {photo.version},"
                    f" caller expected {expected_version}"
                )
            recs = []
            for x, y, w, h, subgroup in boxes:
                if w <= 0 or h <= 0:
                    raise OutOfBounds(f"degenerate box {w}x{h}")
                if x < 0 or y < 0 or x + w > photo.width or y + h > photo.height:
                    raise OutOfBounds(
                        f"box ({x},{y},{w},{h}) exceeds {photo.width}x{photo.height}"
                    )
                if subgroup < 1:
                    raise ValidationError("subgroup_index must be positive")
                recs.append(
                    {
                        "id": self._take_id("BX"),
                        "x": float(x),
                        "y": float(y),
                        "w": float(w),
                        "h": float(h),
                        "subgroup_index": int(subgroup),
                    }
                )
            payload = {
                "photo": photo_id,
                "group_sighting": gs.id,
                "boxes": recs,
            }
            self._apply("set_boxes", payload)
            self._log("photo", photo_id, "set_boxes", payload)
            return self.boxes_of(photo_id)

    def derive_individual_sightings(self, gs_id: str) -> list[SightingRec]:
        """One sighting per distinct subgroup index; reruns add nothing."""
        with self._lock, self._conn:
            gs = self.group_sighting(gs_id)
            if gs.status == "Open":
                raise NoBoxes(f"{gs_id} has no annotations yet")
            indices: set[int] = set()
            for photo in self.photos_of(gs_id):
                indices.update(b.subgroup_index for b in self.boxes_of(photo.id))
            existing = {s.subgroup_index for s in self.sightings_of(gs_id)}
            missing = sorted(indices - existing)
            if missing:
                payload = {
                    "group_sighting": gs_id,
                    "sightings": [
                        {"id": self._take_id("IS"), "subgroup_index": sg}
                        for sg in missing
                    ],
                }
                self._apply("derive_sightings", payload)
                self._log("group_sighting", gs_id, "derive_sightings", payload)
            return self.sightings_of(gs_id)

    def set_seek_code(
        self, is_id: str, code_text: str, expected_version: int | None = None
    ) -> SightingRec:
        with self._lock, self._conn:
            s = self.individual_sighting(is_id)
            if expected_version is not None and s.version != expected_version:
                raise VersionConflict(
                    f"sighting {is_id} at version {s.version},"
                    f" caller expected {expected_version}"
                )
            canonical = format_code(parse_code(code_text, self.schema), self.schema)
            payload = {"sighting": is_id, "code": canonical}
            self._apply("set_code", payload)
            self._log("individual_sighting", is_id, "set_code", payload)
            return self.individual_sighting(is_id)

    def add_contour(
        self,
        is_id: str,
        side: str,
        points: Iterable[Iterable[float]],
        photo_id: str | None = None,
        from_preview: bool = False,
        expected_version: int | None = None,
    ) -> ContourRec:
        with self._lock, self._conn:
            s = self.individual_sighting(is_id)
            if expected_version is not None and s.version != expected_version:
                raise VersionConflict(
                    f"sighting {is_id} at version {s.version},"
                    f" caller expected {expected_version}"
                )
            if from_preview:
                raise ValidationError(
                    "contours must be traced on original photos, not previews"
                )
            if side not in ("left", "right"):
                raise ValidationError(f"side must be left or right, got {side!r}")
            pts = []
            for p in points:
                seq = list(p)
                if len(seq) != 2:
                    raise ValidationError("each contour point must be an [x, y] pair")
                pts.append([float(seq[0]), float(seq[1])])
            if len(pts) < 2:
                raise ValidationError("contour needs at least 2 points")
            if photo_id is not None:
                photo = self.photo(photo_id)
                if photo.group_sighting != s.group_sighting:
                    raise ValidationError(
                        "contour photo belongs to a different group sighting"
                    )
            payload = {
                "id": self._take_id("CT"),
                "sighting": is_id,
                "side": side,
                "points": pts,
                "photo": photo_id,
            }
            self._apply("add_contour", payload)
            self._log("individual_sighting", is_id, "add_contour", payload)
            return next(
                c for c in self.contours_of(is_id) if c.id == payload["id"]
            )

    def assign_to_individual(
        self,
        is_id: str,
        target: str | None = None,
        display_name: str | None = None,
        expected_version: int | None = None,
    ) -> IndividualRec:
        """Attach a coded sighting to an existing individual (target id) or,
        with target=None, to a newly created one."""
        with self._lock, self._conn:
            s = self.individual_sighting(is_id)
            if expected_version is not None and s.version != expected_version:
                raise VersionConflict(
                    f"sighting {is_id} at version {s.version},"
                    f" caller expected {expected_version}"
                )
            if s.seek_code is None:
                raise ValidationError(f"sighting {is_id} has no code yet")
            if s.assigned_individual is not None:
                raise AlreadyAssigned(
                    f"sighting {is_id} already assigned to {s.assigned_individual}"
                )
            if target is None:
                ind_id = self._take_id("IND")
                payload = {
                    "sighting": is_id,
                    "individual": ind_id,
                    "created": True,
                    "display_name": display_name or ind_id,
                }
            else:
                self.individual(target)
                payload = {
                    "sighting": is_id,
                    "individual": target,
                    "created": False,
                    "display_name": None,
                }
            self._apply("assign", payload)
            self._log("individual_sighting", is_id, "assign", payload)
            return self.individual(payload["individual"])

    def reassign(
        self, is_id: str, target: str, expected_version: int | None = None
    ) -> IndividualRec:
        """Correct an assignment; the audit log keeps both decisions."""
        with self._lock, self._conn:
            s = self.individual_sighting(is_id)
            if expected_version is not None and s.version != expected_version:
                raise VersionConflict(
                    f"sighting {is_id} at version {s.version},"
                    f" caller expected {expected_version}"
                )
            if s.assigned_individual is None:
                raise ValidationError(
                    f"sighting {is_id} was never assigned; use assign"
                )
            self.individual(target)
            payload = {
                "sighting": is_id,
                "from_individual": s.assigned_individual,
                "to_individual": target,
            }
            self._apply("reassign", payload)
            self._log("individual_sighting", is_id, "reassign", payload)
            return self.individual(target)

    def resolve_group_sighting(self, gs_id: str) -> GroupSightingRec:
        with self._lock, self._conn:
            gs = self.group_sighting(gs_id)
            if gs.status == "Resolved":
                raise SightingResolved(f"{gs_id} already resolved")
            payload = {"group_sighting": gs_id}
            self._apply("resolve", payload)
            self._log("group_sighting", gs_id, "resolve", payload)
            return self.group_sighting(gs_id)

    # -- replay and integrity -------------------------------------------------

    @classmethod
    def replay_audit(
        cls,
        rows: Iterable[AuditRow],
        db_path: str | Path = ":memory:",
        photo_root: str | Path | None = None,
        schema: SeekSchema = DEFAULT_SCHEMA,
    ) -> "Registry":
        """Rebuild a registry from its audit log alone."""
        reg = cls(db_path=db_path, photo_root=photo_root, schema=schema)
        with reg._lock, reg._conn:
            for row in rows:
                reg._apply(row.action, row.payload)
                reg._conn.execute(
                    "INSERT INTO audit_log (seq, at, entity, entity_id, action,"
                    " payload) VALUES (?, ?, ?, ?, ?, ?)",
                    (
                        row.seq,
                        row.at,
                        row.entity,
                        row.entity_id,
                        row.action,
                        json.dumps(row.payload),
                    ),
                )
        return reg

    def snapshot_state(self) -> dict[str, Any]:
        """Entity tables as plain data, for equality comparison in tests."""
        out: dict[str, Any] = {}
        for table in (
            "group_sightings",
            "photos",
            "boxes",
            "individual_sightings",
            "individuals",
            "contours",
        ):
            rows = self._conn.execute(f"SELECT * FROM {table} ORDER BY id").fetchall()
            out[table] = rows
        out["meta"] = sorted(
            self._conn.execute(
                "SELECT key, value FROM meta WHERE key != 'schema_version'"
            ).fetchall()
        )
        return out

    def check_integrity(self) -> list[str]:
        """Empty list when referential and audit invariants all hold."""
        problems: list[str] = []
        q = self._conn.execute
        for sql, message in [
            (
                "SELECT b.id FROM boxes b LEFT JOIN photos p ON b.photo = p.id"
                " WHERE p.id IS NULL",
                "box without photo",
            ),
            (
                "SELECT p.id FROM photos p LEFT JOIN group_sightings g"
                " ON p.group_sighting = g.id WHERE g.id IS NULL",
                "photo without group sighting",
            ),
            (
                "SELECT s.id FROM individual_sightings s LEFT JOIN group_sightings g"
                " ON s.group_sighting = g.id WHERE g.id IS NULL",
                "sighting without group sighting",
            ),
            (
                "SELECT s.id FROM individual_sightings s LEFT JOIN individuals i"
                " ON s.assigned_individual = i.id"
                " WHERE s.assigned_individual IS NOT NULL AND i.id IS NULL",
                "sighting assigned to missing individual",
            ),
            (
                "SELECT c.id FROM contours c LEFT JOIN individual_sightings s"
                " ON c.sighting = s.id WHERE s.id IS NULL",
                "contour without sighting",
            ),
        ]:
            for row in q(sql).fetchall():
                problems.append(f"{message}: {row[0]}")

        dup = q(
            "SELECT group_sighting, subgroup_index, COUNT(*) FROM"
            " individual_sightings GROUP BY group_sighting, subgroup_index"
            " HAVING COUNT(*) > 1"
        ).fetchall()
        for gs, sg, n in dup:
            problems.append(f"{n} sightings for ({gs}, subgroup {sg})")

        dup_ev = q(
            "SELECT event_ref, COUNT(*) FROM group_sightings"
            " GROUP BY event_ref HAVING COUNT(*) > 1"
        ).fetchall()
        for ref, n in dup_ev:
            problems.append(f"event {ref} linked to {n} group sightings")

        for ind in self.list_individuals():
            creates = [
                r
                for r in self.audit_rows()
                if r.action == "assign"
                and r.payload.get("created")
                and r.payload.get("individual") == ind.id
            ]
            if len(creates) != 1:
                problems.append(
                    f"individual {ind.id} created {len(creates)} times in audit"
                )
        return problems
