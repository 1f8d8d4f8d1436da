"""Attribute-code schema: slot order, alphabets, and the schema file format.

A code has exactly eight slots. Simple slots take a single symbol from a
closed alphabet; ear-feature slots take either the no-feature token, or one
or more feature tokens joined by "+" in lexicographic order. "*" is the
wildcard in any slot and means unobserved/uncertain.

The alphabet is configuration, not algorithm: it lives in a versioned schema
that can be loaded from a JSON file, and codes remember which schema version
they were parsed under.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import MalformedCode, UnknownSymbol

WILDCARD = "*"

SCHEMA_FILE_FORMAT = "herdbook-seek-schema/1"


@dataclass(frozen=True)
class Slot:
    """One position of the code.

    values: closed alphabet of base symbols, wildcard excluded.
    multi: base symbols may be combined with "+" (ear-feature slots).
    none_token: the member of `values` meaning "no features"; it cannot be
        combined with feature symbols.
    """

    name: str
    values: tuple[str, ...]
    multi: bool = False
    none_token: str | None = None

    def canonicalize(self, segment: str) -> str:
        """Validate one code segment and return its canonical spelling.

        Raises UnknownSymbol for symbols outside the alphabet and
        MalformedCode for structurally invalid combinations.
        """
        if segment == WILDCARD:
            return WILDCARD
        if not segment:
            raise MalformedCode(f"empty segment in slot {self.name!r}")
        if not self.multi:
            if segment not in self.values:
                raise UnknownSymbol(
                    f"{segment!r} is not in the alphabet of slot {self.name!r}"
                )
            return segment
        tokens = segment.split("+")
        for tok in tokens:
            if tok not in self.values:
                raise UnknownSymbol(
                    f"{tok!r} is not in the alphabet of slot {self.name!r}"
                )
        if self.none_token in tokens and len(tokens) > 1:
            raise MalformedCode(
                f"{self.none_token!r} cannot be combined with features "
                f"in slot {self.name!r}"
            )
        return "+".join(sorted(set(tokens)))


@dataclass(frozen=True)
class SeekSchema:
    """Versioned slot order plus per-slot alphabets."""

    version: str
    slots: tuple[Slot, ...]

    @property
    def slot_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.slots)

    def slot(self, name: str) -> Slot:
        for s in self.slots:
            if s.name == name:
                return s
        raise KeyError(name)

    def alphabets(self) -> dict[str, tuple[str, ...]]:
        """Introspection: base alphabet per slot (wildcard implicit)."""
        return {s.name: s.values for s in self.slots}

    def to_dict(self) -> dict:
        return {
            "format": SCHEMA_FILE_FORMAT,
            "version": self.version,
            "slots": [
                {
                    "name": s.name,
                    "values": list(s.values),
                    **({"multi": True, "none": s.none_token} if s.multi else {}),
                }
                for s in self.slots
            ],
        }


def _ear_tokens() -> tuple[str, ...]:
    # notch / tear / hole at four edge positions, top of ear down to lobe
    return ("U",) + tuple(
        f"{kind}{pos}" for kind in ("H", "N", "T") for pos in (1, 2, 3, 4)
    )


def _ear_slot(name: str) -> Slot:
    return Slot(name=name, values=_ear_tokens(), multi=True, none_token="U")


DEFAULT_SCHEMA = SeekSchema(
    version="seek-v1",
    slots=(
        Slot("sex", ("M", "F")),
        Slot("age", ("CALF", "JUV", "SUBAD", "AD")),
        Slot("tusks", ("T0", "TL", "TR", "T2")),
        _ear_slot("right_ear_prominent"),
        _ear_slot("right_ear_secondary"),
        _ear_slot("left_ear_prominent"),
        _ear_slot("left_ear_secondary"),
        Slot("extreme", ("X0", "X1", "X2", "X3", "X4")),
    ),
)


def load_schema(path: str | Path) -> SeekSchema:
    """Read a schema file (JSON, see SCHEMA_FILE_FORMAT)."""
    raw = json.loads(Path(path).read_text())
    if raw.get("format") != SCHEMA_FILE_FORMAT:
        raise MalformedCode(f"unsupported schema file format: {raw.get('format')!r}")
    slots = []
    for s in raw["slots"]:
        slots.append(
            Slot(
                name=s["name"],
                values=tuple(s["values"]),
                multi=bool(s.get("multi", False)),
                none_token=s.get("none"),
            )
        )
    return SeekSchema(version=raw["version"], slots=tuple(slots))


def save_schema(schema: SeekSchema, path: str | Path) -> None:
    Path(path).write_text(json.dumps(schema.to_dict(), indent=2) + "\n")
