"""Parsing and formatting of canonical code strings.

Canonical form: eight colon-separated segments in schema slot order,
"*" for wildcard. format(parse(s)) == s for every canonical string; parse
also accepts unsorted ear-feature combinations and canonicalizes them.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import MalformedCode, SchemaMismatch
from .schema import DEFAULT_SCHEMA, WILDCARD, SeekSchema

SEPARATOR = ":"


@dataclass(frozen=True)
class SeekCode:
    """One attribute code: a canonical segment per slot, bound to a schema version."""

    values: tuple[str, ...]
    schema_version: str = DEFAULT_SCHEMA.version

    def __post_init__(self):
        if not all(isinstance(v, str) and v for v in self.values):
            raise MalformedCode("code segments must be non-empty strings")

    def is_wildcard(self, i: int) -> bool:
        return self.values[i] == WILDCARD

    @property
    def wildcard_count(self) -> int:
        return sum(v == WILDCARD for v in self.values)


def parse_code(text: str, schema: SeekSchema = DEFAULT_SCHEMA) -> SeekCode:
    """Parse a code string into a SeekCode under the given schema.

    Raises MalformedCode on empty input or wrong segment count, and
    UnknownSymbol when a segment is not in the slot's alphabet.
    """
    if not text:
        raise MalformedCode("empty code string")
    segments = text.split(SEPARATOR)
    if len(segments) != len(schema.slots):
        raise MalformedCode(
            f"expected {len(schema.slots)} segments, got {len(segments)}"
        )
    canonical = tuple(
        slot.canonicalize(seg) for slot, seg in zip(schema.slots, segments)
    )
    return SeekCode(values=canonical, schema_version=schema.version)


def format_code(code: SeekCode, schema: SeekSchema = DEFAULT_SCHEMA) -> str:
    """Render the unique canonical string for a code."""
    if code.schema_version != schema.version:
        raise SchemaMismatch(
            f"code built under {code.schema_version!r}, "
            f"formatting under {schema.version!r}"
        )
    if len(code.values) != len(schema.slots):
        raise MalformedCode(
            f"code has {len(code.values)} segments, schema has {len(schema.slots)}"
        )
    return SEPARATOR.join(code.values)


def all_wildcards(schema: SeekSchema = DEFAULT_SCHEMA) -> SeekCode:
    """The fully-unobserved code."""
    return SeekCode(
        values=(WILDCARD,) * len(schema.slots), schema_version=schema.version
    )
