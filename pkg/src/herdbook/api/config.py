"""Service configuration: storage paths, users, fusion knobs.

One JSON file configures the whole service; HERDBOOK_* environment
variables override the storage paths and port for container deployments.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from ..contour import ContourPipelineConfig
from ..errors import ValidationError
from ..ingest import FeedConfig
from ..match import FusionConfig, SidePolicy
from ..seek.schema import DEFAULT_SCHEMA, SeekSchema, load_schema

ROLES = ("Annotator", "Coder", "Reviewer", "Admin")


@dataclass(frozen=True)
class UserEntry:
    token: str
    user: str
    role: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValidationError(f"unknown role {self.role!r}; pick one of {ROLES}")
        if not self.token:
            raise ValidationError(f"user {self.user!r} has an empty token")


@dataclass(frozen=True)
class ServiceConfig:
    db_path: str = "herdbook.db"
    photo_root: str = "herdbook_photos"
    host: str = "127.0.0.1"
    port: int = 8000
    users: tuple[UserEntry, ...] = ()
    fusion: FusionConfig = FusionConfig()
    pipeline: ContourPipelineConfig = ContourPipelineConfig()
    feed: FeedConfig | None = None
    schema: SeekSchema = field(default=DEFAULT_SCHEMA, repr=False)

    def user_for_token(self, token: str) -> UserEntry | None:
        for entry in self.users:
            if entry.token == token:
                return entry
        return None


def _fusion_from_dict(raw: Mapping[str, Any]) -> FusionConfig:
    return FusionConfig(
        curv_coefficient=float(raw.get("curv_coefficient", 0.1)),
        lnbnn_k=int(raw.get("lnbnn_k", 5)),
        side_policy=SidePolicy(raw.get("side_policy", "merged")),
    )


def load_service_config(
    path: str | Path | None = None, env: Mapping[str, str] = os.environ
) -> ServiceConfig:
    """Read the service config file, if any, applying environment overrides."""
    raw: dict[str, Any] = {}
    cfg_path = path or env.get("HERDBOOK_CONFIG")
    if cfg_path:
        raw = json.loads(Path(cfg_path).read_text())

    users = tuple(
        UserEntry(token=u["token"], user=u["user"], role=u["role"])
        for u in raw.get("users", [])
    )
    feed = None
    if "feed" in raw or "HERDBOOK_FEED_URL" in env:
        feed_raw = raw.get("feed", {})
        feed = FeedConfig(
            base_url=env.get("HERDBOOK_FEED_URL", feed_raw.get("base_url", "http://localhost:8100")),
            token=env.get("HERDBOOK_FEED_TOKEN", feed_raw.get("token")),
            page_size=int(feed_raw.get("page_size", 100)),
            max_retries=int(feed_raw.get("max_retries", 4)),
            backoff_base=float(feed_raw.get("backoff_base", 0.5)),
        )
    schema = DEFAULT_SCHEMA
    if raw.get("schema_path"):
        schema = load_schema(raw["schema_path"])

    return ServiceConfig(
        db_path=env.get("HERDBOOK_DB", raw.get("db_path", "herdbook.db")),
        photo_root=env.get("HERDBOOK_PHOTO_ROOT", raw.get("photo_root", "herdbook_photos")),
        host=raw.get("host", "127.0.0.1"),
        port=int(env.get("HERDBOOK_PORT", raw.get("port", 8000))),
        users=users,
        fusion=_fusion_from_dict(raw.get("fusion", {})),
        pipeline=ContourPipelineConfig.from_dict(raw.get("pipeline", {})),
        feed=feed,
        schema=schema,
    )
