"""Event feed client, registry ingestion, and the bundled mock feed."""
from .client import (
    EVENTS_PATH,
    FeedConfig,
    IngestSummary,
    fetch_active_events,
    ingest_events,
    load_feed_config,
)
from .events import (
    FUTURE_TOLERANCE,
    SIGHTING_EVENT_TYPE,
    IngestEvent,
    parse_event,
    parse_instant,
    sighting_fixture,
)
from .mock_feed import mock_feed_app

__all__ = [
    "EVENTS_PATH",
    "FUTURE_TOLERANCE",
    "FeedConfig",
    "IngestEvent",
    "IngestSummary",
    "SIGHTING_EVENT_TYPE",
    "fetch_active_events",
    "ingest_events",
    "load_feed_config",
    "mock_feed_app",
    "parse_event",
    "parse_instant",
    "sighting_fixture",
]
