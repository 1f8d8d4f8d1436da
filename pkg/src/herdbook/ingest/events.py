"""Event records pulled from the field-report feed.

The feed delivers generic field events (conflict reports, poaching alerts,
group sightings). Only elephant group sightings feed the identification
workflow; everything else is filtered out client-side.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Any, Mapping

from ..errors import MalformedEvent

SIGHTING_EVENT_TYPE = "elephant_group_sighting"

# Field clocks drift; reports stamped slightly ahead of server time are
# accepted (with a warning) rather than dropped.
FUTURE_TOLERANCE = timedelta(minutes=5)

_REQUIRED_FIELDS = ("external_id", "event_type", "recorded_at")


@dataclass(frozen=True)
class IngestEvent:
    """One feed record, validated and timestamp-parsed."""

    external_id: str
    event_type: str
    recorded_at: str
    latitude: float | None
    longitude: float | None
    reporter: str
    notes: str

    @property
    def instant(self) -> datetime:
        return parse_instant(self.recorded_at)


def parse_instant(text: str) -> datetime:
    """ISO-8601 timestamp to an aware UTC datetime; naive input is taken as UTC."""
    try:
        parsed = datetime.fromisoformat(str(text).replace("Z", "+00:00"))
    except (ValueError, TypeError) as exc:
        raise MalformedEvent(f"unparseable timestamp {text!r}") from exc
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def parse_event(raw: Mapping[str, Any]) -> IngestEvent:
    """Validate one wire record. Raises MalformedEvent on structural problems."""
    if not isinstance(raw, Mapping):
        raise MalformedEvent(f"event record is not an object: {raw!r}")
    missing = [f for f in _REQUIRED_FIELDS if not raw.get(f)]
    if missing:
        raise MalformedEvent(f"event record missing {missing} in {dict(raw)!r}")

    def opt_float(key: str) -> float | None:
        value = raw.get(key)
        if value is None:
            return None
        try:
            return float(value)
        except (TypeError, ValueError) as exc:
            raise MalformedEvent(f"bad {key} {value!r}") from exc

    event = IngestEvent(
        external_id=str(raw["external_id"]),
        event_type=str(raw["event_type"]),
        recorded_at=str(raw["recorded_at"]),
        latitude=opt_float("latitude"),
        longitude=opt_float("longitude"),
        reporter=str(raw.get("reporter", "")),
        notes=str(raw.get("notes", "")),
    )
    event.instant
    return event


def sighting_fixture(
    external_id: str,
    recorded_at: str,
    latitude: float = -1.5,
    longitude: float = 36.8,
    reporter: str = "ranger",
    notes: str = "",
    event_type: str = SIGHTING_EVENT_TYPE,
) -> dict[str, Any]:
    """A well-formed wire record, handy for fixtures and demos."""
    return {
        "external_id": external_id,
        "event_type": event_type,
        "recorded_at": recorded_at,
        "latitude": latitude,
        "longitude": longitude,
        "reporter": reporter,
        "notes": notes,
    }
