"""Registry export archive.

One JSON document carrying all entities, contour points inline, and the
audit log. The same shape is produced by the synthetic-population generator
so the evaluation CLI can consume either source interchangeably.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ..errors import ValidationError
from .store import AuditRow, Registry

DUMP_FORMAT = "herdbook-dump/1"


def export_dump(reg: Registry) -> dict[str, Any]:
    return {
        "format": DUMP_FORMAT,
        "seek_schema_version": reg.schema.version,
        "group_sightings": [
            {
                "id": g.id,
                "event_ref": g.event_ref,
                "timestamp": g.timestamp,
                "lat": g.lat,
                "lon": g.lon,
                "status": g.status,
            }
            for g in reg.list_group_sightings()
        ],
        "photos": [
            {
                "id": p.id,
                "group_sighting": p.group_sighting,
                "content_hash": p.content_hash,
                "width": p.width,
                "height": p.height,
            }
            for g in reg.list_group_sightings()
            for p in reg.photos_of(g.id)
        ],
        "boxes": [
            {
                "id": b.id,
                "photo": b.photo,
                "x": b.x,
                "y": b.y,
                "w": b.w,
                "h": b.h,
                "subgroup_index": b.subgroup_index,
            }
            for g in reg.list_group_sightings()
            for p in reg.photos_of(g.id)
            for b in reg.boxes_of(p.id)
        ],
        "individuals": [
            {"id": i.id, "display_name": i.display_name}
            for i in reg.list_individuals()
        ],
        "sightings": [
            {
                "id": s.id,
                "group_sighting": s.group_sighting,
                "subgroup_index": s.subgroup_index,
                "seek_code": s.seek_code,
                "assigned_individual": s.assigned_individual,
            }
            for g in reg.list_group_sightings()
            for s in reg.sightings_of(g.id)
        ],
        "contours": [
            {
                "id": c.id,
                "sighting": c.sighting,
                "side": c.side,
                "points": c.points,
                "photo": c.photo,
            }
            for c in reg.all_contours()
        ],
        "audit": [
            {
                "seq": r.seq,
                "at": r.at,
                "entity": r.entity,
                "entity_id": r.entity_id,
                "action": r.action,
                "payload": r.payload,
            }
            for r in reg.audit_rows()
        ],
    }


def save_dump(reg: Registry, path: str | Path) -> None:
    Path(path).write_text(json.dumps(export_dump(reg), indent=1))


def load_dump(path: str | Path) -> dict[str, Any]:
    data = json.loads(Path(path).read_text())
    validate_dump(data)
    return data


def validate_dump(data: dict[str, Any]) -> None:
    if not isinstance(data, dict) or data.get("format") != DUMP_FORMAT:
        raise ValidationError(
            f"not a registry dump (format tag {data.get('format')!r})"
        )
    for section in ("individuals", "sightings", "contours"):
        if not isinstance(data.get(section), list):
            raise ValidationError(f"dump is missing the {section!r} section")


def import_dump(
    data: dict[str, Any],
    db_path: str | Path = ":memory:",
    photo_root: str | Path | None = None,
) -> Registry:
    """Rebuild a registry from a dump's audit log (the authoritative record)."""
    validate_dump(data)
    rows = [
        AuditRow(
            seq=r["seq"],
            at=r["at"],
            entity=r["entity"],
            entity_id=r["entity_id"],
            action=r["action"],
            payload=r["payload"],
        )
        for r in data.get("audit", [])
    ]
    if not rows:
        raise ValidationError("dump has no audit log; cannot reconstruct state")
    return Registry.replay_audit(rows, db_path=db_path, photo_root=photo_root)
