"""In-process event feed serving fixture records over the documented wire format.

The server applies the `since` filter and paginates, exactly like the real
feed would. Fixture dicts are served verbatim: a broken fixture stays broken
on the wire so client skip-paths can be exercised end to end.
"""
from __future__ import annotations

import math
from typing import Any, Sequence

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from ..errors import MalformedEvent
from .client import EVENTS_PATH
from .events import parse_instant


def mock_feed_app(
    fixtures: Sequence[dict[str, Any]], require_token: str | None = None
) -> FastAPI:
    app = FastAPI(title="herdbook mock event feed")
    app.state.fixtures = list(fixtures)

    @app.get(EVENTS_PATH)
    def list_events(
        request: Request,
        since: str | None = None,
        page: int = Query(default=1, ge=1),
        page_size: int = Query(default=100, ge=1),
    ):
        if require_token is not None:
            expected = f"Bearer {require_token}"
            if request.headers.get("authorization") != expected:
                return JSONResponse({"error": "missing or bad token"}, status_code=401)

        selected = list(app.state.fixtures)
        if since:
            cutoff = parse_instant(since)
            kept = []
            for record in selected:
                try:
                    newer = parse_instant(str(record.get("recorded_at"))) > cutoff
                except MalformedEvent:
                    newer = True
                if newer:
                    kept.append(record)
            selected = kept

        total = len(selected)
        page_count = max(1, math.ceil(total / page_size))
        start = (page - 1) * page_size
        return {
            "events": selected[start : start + page_size],
            "page": page,
            "page_count": page_count,
            "total": total,
        }

    return app
