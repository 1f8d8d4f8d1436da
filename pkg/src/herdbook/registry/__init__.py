"""Persistent sighting registry: entities, photos, audit log, dumps."""
from .dump import (
    DUMP_FORMAT,
    export_dump,
    import_dump,
    load_dump,
    save_dump,
    validate_dump,
)
from .photos import PhotoStore, StoredPhoto
from .store import (
    AuditRow,
    BoxRec,
    ContourRec,
    GroupSightingRec,
    IndividualRec,
    PhotoRec,
    Registry,
    SightingRec,
)

__all__ = [
    "AuditRow",
    "BoxRec",
    "ContourRec",
    "DUMP_FORMAT",
    "GroupSightingRec",
    "IndividualRec",
    "PhotoRec",
    "PhotoStore",
    "Registry",
    "SightingRec",
    "StoredPhoto",
    "export_dump",
    "import_dump",
    "load_dump",
    "save_dump",
    "validate_dump",
]
