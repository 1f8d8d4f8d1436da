"""Structured attribute codes: schema, grammar, distance, agreement."""
from .code import SeekCode, all_wildcards, format_code, parse_code
from .distance import (
    SeekWeights,
    attribute_agreement,
    seek_distance,
    slot_difference,
)
from .schema import (
    DEFAULT_SCHEMA,
    SCHEMA_FILE_FORMAT,
    WILDCARD,
    SeekSchema,
    Slot,
    load_schema,
    save_schema,
)

__all__ = [
    "SeekCode",
    "SeekSchema",
    "SeekWeights",
    "Slot",
    "DEFAULT_SCHEMA",
    "SCHEMA_FILE_FORMAT",
    "WILDCARD",
    "all_wildcards",
    "attribute_agreement",
    "format_code",
    "load_schema",
    "parse_code",
    "save_schema",
    "seek_distance",
    "slot_difference",
]
