"""Contour file format.

Plain text, whitespace-delimited, one record per contour:

    <sighting_id> <side> <point_count>
    <x> <y>
    ... point_count lines ...

`side` is "left" or "right". Blank lines between records are allowed, lines
starting with '#' are comments, and CRLF line endings are tolerated.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

from ..errors import ValidationError
from .geometry import Contour, Side


def read_contours(path: str | Path) -> list[Contour]:
    lines = Path(path).read_text().splitlines()
    tokens: list[list[str]] = []
    for raw in lines:
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens.append(stripped.split())

    contours: list[Contour] = []
    i = 0
    while i < len(tokens):
        header = tokens[i]
        if len(header) != 3:
            raise ValidationError(
                f"expected '<sighting> <side> <count>' header, got {header!r}"
            )
        sighting, side_text, count_text = header
        try:
            side = Side(side_text)
        except ValueError:
            raise ValidationError(f"unknown side {side_text!r}") from None
        try:
            count = int(count_text)
        except ValueError:
            raise ValidationError(f"bad point count {count_text!r}") from None
        if count <= 0 or i + 1 + count > len(tokens):
            raise ValidationError(
                f"contour {sighting!r} declares {count} points, file too short"
            )
        pts = np.empty((count, 2), dtype=np.float64)
        for j in range(count):
            row = tokens[i + 1 + j]
            if len(row) != 2:
                raise ValidationError(f"expected 'x y' pair, got {row!r}")
            try:
                pts[j] = (float(row[0]), float(row[1]))
            except ValueError:
                raise ValidationError(f"non-numeric coordinate in {row!r}") from None
        contours.append(Contour(points=pts, side=side, source_sighting=sighting))
        i += 1 + count
    return contours


def write_contours(contours: Iterable[Contour], path: str | Path) -> None:
    out = []
    for c in contours:
        out.append(f"{c.source_sighting} {c.side.value} {len(c.points)}")
        for x, y in c.points:
            out.append(f"{x:.10g} {y:.10g}")
        out.append("")
    Path(path).write_text("\n".join(out))
