"""Content-addressed photo storage with downsized previews.

Originals are written once under their SHA-256 hash and never modified.
A JPEG preview capped at 1280px on the long edge is generated next to each
original; readers must ask for originals explicitly.
"""
from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass
from pathlib import Path

from PIL import Image

from ..errors import ValidationError

PREVIEW_LONG_EDGE = 1280


@dataclass(frozen=True)
class StoredPhoto:
    content_hash: str
    width: int
    height: int
    original_path: Path
    preview_path: Path


class PhotoStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "originals").mkdir(parents=True, exist_ok=True)
        (self.root / "previews").mkdir(parents=True, exist_ok=True)

    def _original_path(self, content_hash: str, suffix: str) -> Path:
        return self.root / "originals" / f"{content_hash}{suffix}"

    def _preview_path(self, content_hash: str) -> Path:
        return self.root / "previews" / f"{content_hash}.jpg"

    def put(self, data: bytes, filename: str = "photo.jpg") -> StoredPhoto:
        content_hash = hashlib.sha256(data).hexdigest()
        try:
            image = Image.open(io.BytesIO(data))
            image.load()
        except OSError as exc:
            raise ValidationError(f"not a decodable image: {exc}") from exc
        width, height = image.size

        suffix = Path(filename).suffix.lower() or ".jpg"
        original = self._original_path(content_hash, suffix)
        if not original.exists():
            original.write_bytes(data)

        preview = self._preview_path(content_hash)
        if not preview.exists():
            scaled = image.convert("RGB")
            long_edge = max(width, height)
            if long_edge > PREVIEW_LONG_EDGE:
                factor = PREVIEW_LONG_EDGE / long_edge
                scaled = scaled.resize(
                    (max(1, round(width * factor)), max(1, round(height * factor)))
                )
            scaled.save(preview, format="JPEG", quality=85)

        return StoredPhoto(
            content_hash=content_hash,
            width=width,
            height=height,
            original_path=original,
            preview_path=preview,
        )

    def find_original(self, content_hash: str) -> Path:
        hits = sorted((self.root / "originals").glob(f"{content_hash}.*"))
        if not hits:
            raise FileNotFoundError(content_hash)
        return hits[0]

    def open_original(self, content_hash: str) -> bytes:
        return self.find_original(content_hash).read_bytes()

    def open_preview(self, content_hash: str) -> bytes:
        return self._preview_path(content_hash).read_bytes()
