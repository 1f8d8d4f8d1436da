"""Polling client for the event feed, and idempotent registry ingestion.

Wire format (also served by the bundled mock feed):

    GET {base_url}/api/events?since=<ISO-8601>&page=<n>&page_size=<n>
    Authorization: Bearer <token>          (only when a token is configured)

    200 -> {"events": [record, ...], "page": n, "page_count": n, "total": n}

Each record carries: external_id, event_type, recorded_at, latitude,
longitude, reporter, notes. Records that fail validation are skipped with a
log line, never fatal; transient transport failures retry with exponential
backoff before FeedUnreachable is raised.
"""
from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping

import httpx

from ..errors import DuplicateEvent, FeedUnreachable, MalformedEvent, ValidationError
from .events import FUTURE_TOLERANCE, SIGHTING_EVENT_TYPE, IngestEvent, parse_event, parse_instant

log = logging.getLogger("herdbook.ingest")

EVENTS_PATH = "/api/events"


@dataclass(frozen=True)
class FeedConfig:
    base_url: str
    token: str | None = None
    page_size: int = 100
    max_retries: int = 4
    backoff_base: float = 0.5
    timeout: float = 10.0


def load_feed_config(
    path: str | Path | None = None, env: Mapping[str, str] = os.environ
) -> FeedConfig:
    """Build a FeedConfig from an optional JSON file plus environment overrides.

    File keys mirror the FeedConfig fields; HERDBOOK_FEED_URL and
    HERDBOOK_FEED_TOKEN take precedence over the file.
    """
    raw: dict[str, Any] = {}
    cfg_path = path or env.get("HERDBOOK_FEED_CONFIG")
    if cfg_path:
        raw = json.loads(Path(cfg_path).read_text())
    return FeedConfig(
        base_url=env.get("HERDBOOK_FEED_URL", raw.get("base_url", "http://localhost:8100")),
        token=env.get("HERDBOOK_FEED_TOKEN", raw.get("token")),
        page_size=int(raw.get("page_size", 100)),
        max_retries=int(raw.get("max_retries", 4)),
        backoff_base=float(raw.get("backoff_base", 0.5)),
        timeout=float(raw.get("timeout", 10.0)),
    )


def _get_page(
    client: httpx.Client,
    config: FeedConfig,
    params: dict[str, Any],
    sleep: Callable[[float], None],
) -> dict[str, Any]:
    headers = {}
    if config.token:
        headers["Authorization"] = f"Bearer {config.token}"
    last_error: Exception | None = None
    for attempt in range(config.max_retries + 1):
        if attempt:
            sleep(config.backoff_base * 2 ** (attempt - 1))
        try:
            response = client.get(EVENTS_PATH, params=params, headers=headers)
        except httpx.HTTPError as exc:
            last_error = exc
            log.warning("feed request failed (attempt %d): %s", attempt + 1, exc)
            continue
        if response.status_code >= 500:
            last_error = FeedUnreachable(f"feed returned {response.status_code}")
            log.warning("feed returned %d (attempt %d)", response.status_code, attempt + 1)
            continue
        if response.status_code != 200:
            raise FeedUnreachable(
                f"feed rejected request: {response.status_code} {response.text[:200]}"
            )
        return response.json()
    raise FeedUnreachable(f"feed unreachable after {config.max_retries + 1} attempts") from last_error


def fetch_active_events(
    config: FeedConfig,
    since: str | None = None,
    client: httpx.Client | None = None,
    sleep: Callable[[float], None] = time.sleep,
    now: Callable[[], datetime] | None = None,
) -> list[IngestEvent]:
    """All group-sighting events newer than `since`, deduplicated by external id.

    Malformed records and far-future timestamps are skipped with a log line.
    Timestamps up to 5 minutes ahead of the local clock pass with a warning.
    """
    owned = client is None
    if client is None:
        client = httpx.Client(base_url=config.base_url, timeout=config.timeout)
    current = (now or (lambda: datetime.now(timezone.utc)))()
    cutoff = parse_instant(since) if since else None

    events: list[IngestEvent] = []
    seen: set[str] = set()
    try:
        page, page_count = 1, 1
        while page <= page_count:
            params: dict[str, Any] = {"page": page, "page_size": config.page_size}
            if since:
                params["since"] = since
            body = _get_page(client, config, params, sleep)
            page_count = int(body.get("page_count", 1))
            for raw in body.get("events", []):
                try:
                    event = parse_event(raw)
                except MalformedEvent as exc:
                    log.warning("skipping malformed event: %s", exc)
                    continue
                if event.event_type != SIGHTING_EVENT_TYPE:
                    continue
                instant = event.instant
                if cutoff is not None and instant <= cutoff:
                    continue
                if instant > current + FUTURE_TOLERANCE:
                    log.warning(
                        "skipping event %s stamped %s, over 5 minutes ahead of %s",
                        event.external_id, event.recorded_at, current.isoformat(),
                    )
                    continue
                if instant > current:
                    log.warning(
                        "event %s is %.0f seconds in the future; accepting",
                        event.external_id, (instant - current).total_seconds(),
                    )
                if event.external_id in seen:
                    continue
                seen.add(event.external_id)
                events.append(event)
            page += 1
    finally:
        if owned:
            client.close()
    return events


@dataclass
class IngestSummary:
    created: list[str] = field(default_factory=list)
    duplicates: list[str] = field(default_factory=list)
    invalid: list[str] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        return {
            "created": len(self.created),
            "duplicates": len(self.duplicates),
            "invalid": len(self.invalid),
        }


def ingest_events(registry, events: Iterable[IngestEvent]) -> IngestSummary:
    """Link events to group sightings; reruns are no-ops for already-linked ids."""
    summary = IngestSummary()
    for event in events:
        try:
            gs = registry.create_group_sighting(
                event.external_id, event.recorded_at, event.latitude, event.longitude
            )
        except DuplicateEvent:
            summary.duplicates.append(event.external_id)
        except ValidationError as exc:
            log.warning("event %s rejected: %s", event.external_id, exc)
            summary.invalid.append(event.external_id)
        else:
            summary.created.append(gs.id)
    return summary
