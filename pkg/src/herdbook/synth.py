"""Synthetic data generation: ear-like contours and attribute populations.

The contour builder draws an open elliptical arc, carves per-individual
Gaussian notches into the radius, then applies per-sighting low-frequency
jitter plus a random similarity transform. Notch layout is the identity
signal; jitter amplitude is a fraction of arc length so the signal-to-noise
ratio is scale-free.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contour.geometry import Contour, Side, arc_length
from .seek.code import SeekCode, format_code
from .seek.schema import DEFAULT_SCHEMA, SeekSchema, WILDCARD


@dataclass(frozen=True)
class NotchPattern:
    """Per-individual ear damage: arc positions, depths and widths."""

    positions: tuple[float, ...]
    depths: tuple[float, ...]
    widths: tuple[float, ...]


def random_notch_pattern(rng: np.random.Generator, n_notches: int) -> NotchPattern:
    # keep notches separated so they stay individually resolvable
    positions = np.sort(rng.uniform(0.15, 0.85, size=n_notches))
    for i in range(1, len(positions)):
        positions[i] = max(positions[i], positions[i - 1] + 0.08)
    positions = np.clip(positions, 0.0, 0.92)
    depths = rng.uniform(0.05, 0.11, size=n_notches)
    widths = rng.uniform(0.015, 0.03, size=n_notches)
    return NotchPattern(tuple(positions), tuple(depths), tuple(widths))


def make_ear_contour(
    rng: np.random.Generator,
    pattern: NotchPattern | None = None,
    side: Side = Side.RIGHT,
    n_points: int = 400,
    jitter: float = 0.0,
    sighting_id: str | None = None,
) -> Contour:
    """Build one raw (unnormalized) contour.

    jitter is the RMS radial perturbation as a fraction of arc length,
    applied as smooth low-frequency noise so the curve stays well formed.
    """
    t = np.linspace(0.0, 1.0, n_points)
    theta = np.pi * (1.15 * t - 0.075)
    rho = 1.0 + 0.12 * np.sin(np.pi * t)

    if pattern is not None:
        for u, depth, width in zip(pattern.positions, pattern.depths, pattern.widths):
            rho = rho - depth * np.exp(-(((t - u) / width) ** 2))

    if jitter > 0.0:
        # arc length of the unit-ish arc is ~3.6; exact value is irrelevant
        # because the amplitude is re-expressed against the final curve below
        noise = np.zeros_like(t)
        amps = rng.uniform(0.5, 1.0, size=3)
        amps = amps / np.sqrt(np.sum(amps**2) / 2.0)
        for a in amps:
            f = rng.uniform(1.0, 4.0)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            noise = noise + a * np.sin(2.0 * np.pi * f * t + phase)
        base = np.stack([rho * np.cos(theta), rho * np.sin(theta)], axis=1)
        rho = rho + jitter * arc_length(base) * noise / np.sqrt(2.0)

    pts = np.stack([rho * np.cos(theta), rho * np.sin(theta)], axis=1)

    angle = rng.uniform(0.0, 2.0 * np.pi)
    rot = np.array(
        [[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]]
    )
    scale = rng.uniform(0.5, 2.0)
    shift = rng.uniform(-5.0, 5.0, size=2)
    pts = pts @ rot.T * scale + shift
    if side == Side.LEFT:
        pts = pts * np.array([-1.0, 1.0])

    return Contour(points=pts, side=side, source_sighting=sighting_id)


def _distinct_codes(
    rng: np.random.Generator, count: int, schema: SeekSchema
) -> list[SeekCode]:
    seen: set[tuple[str, ...]] = set()
    codes: list[SeekCode] = []
    alphabets = [slot.values for slot in schema.slots]
    guard = 0
    while len(codes) < count:
        guard += 1
        if guard > count * 200:
            raise ValueError("schema too small for requested distinct codes")
        values = []
        for slot, alphabet in zip(schema.slots, alphabets):
            if slot.multi:
                pool = [v for v in alphabet if v != slot.none_token]
                n = int(rng.integers(0, 3))
                if n == 0:
                    values.append(slot.none_token)
                else:
                    picks = rng.choice(len(pool), size=n, replace=False)
                    values.append("+".join(sorted(pool[i] for i in picks)))
            else:
                values.append(alphabet[int(rng.integers(0, len(alphabet)))])
        key = tuple(values)
        if key in seen:
            continue
        seen.add(key)
        codes.append(SeekCode(values=tuple(values), schema_version=schema.version))
    return codes


def _random_slot_value(rng: np.random.Generator, slot, current: str) -> str:
    """A random legal slot value different from the current one."""
    if slot.multi:
        pool = [v for v in slot.values if v != slot.none_token]
        for _ in range(20):
            n = int(rng.integers(0, 3))
            if n == 0:
                candidate = slot.none_token
            else:
                picks = rng.choice(len(pool), size=n, replace=False)
                candidate = "+".join(sorted(pool[i] for i in picks))
            if candidate != current:
                return candidate
        return slot.none_token if current != slot.none_token else pool[0]
    others = [v for v in slot.values if v != current]
    return others[int(rng.integers(0, len(others)))]


def _noisy_code(
    rng: np.random.Generator,
    code: SeekCode,
    schema: SeekSchema,
    flip_rate: float,
    wildcard_rate: float,
) -> SeekCode:
    """Per-sighting coding noise: value flips first, then wildcarding."""
    values = list(code.values)
    for i, slot in enumerate(schema.slots):
        if flip_rate > 0.0 and rng.uniform() < flip_rate:
            values[i] = _random_slot_value(rng, slot, values[i])
        if wildcard_rate > 0.0 and rng.uniform() < wildcard_rate:
            values[i] = WILDCARD
    return SeekCode(values=tuple(values), schema_version=code.schema_version)


@dataclass
class SyntheticSighting:
    individual_id: str
    sighting_id: str
    code: SeekCode
    contour: Contour


@dataclass
class SyntheticPopulation:
    individuals: list[str]
    sightings: list[SyntheticSighting]
    schema: SeekSchema = field(default_factory=lambda: DEFAULT_SCHEMA)

    def by_individual(self) -> dict[str, list[SyntheticSighting]]:
        out: dict[str, list[SyntheticSighting]] = {ind: [] for ind in self.individuals}
        for s in self.sightings:
            out[s.individual_id].append(s)
        return out


def synth_population(
    n_individuals: int,
    sightings_per_individual: int,
    seed: int,
    jitter: float = 0.02,
    flip_rate: float = 0.0,
    wildcard_rate: float = 0.0,
    notch_range: tuple[int, int] = (1, 3),
    contour_points: int = 400,
    schema: SeekSchema = DEFAULT_SCHEMA,
) -> SyntheticPopulation:
    """Population with distinct base codes and per-individual notch patterns.

    Every sighting of an individual reuses that individual's notch pattern
    with fresh jitter and pose, and a noisy copy of its code: each slot flips
    to a different legal value with flip_rate, then drops to a wildcard with
    wildcard_rate. Defaults leave codes exact.
    """
    if n_individuals < 1 or sightings_per_individual < 1:
        raise ValueError("population dimensions must be positive")
    rng = np.random.default_rng(seed)
    base_codes = _distinct_codes(rng, n_individuals, schema)
    individuals = [f"IND{i:04d}" for i in range(n_individuals)]
    sightings: list[SyntheticSighting] = []
    for idx, ind in enumerate(individuals):
        n_notches = int(rng.integers(notch_range[0], notch_range[1] + 1))
        pattern = random_notch_pattern(rng, n_notches)
        for s in range(sightings_per_individual):
            sid = f"{ind}-S{s:03d}"
            contour = make_ear_contour(
                rng,
                pattern=pattern,
                side=Side.RIGHT,
                n_points=contour_points,
                jitter=jitter,
                sighting_id=sid,
            )
            code = _noisy_code(
                rng, base_codes[idx], schema, flip_rate, wildcard_rate
            )
            sightings.append(
                SyntheticSighting(
                    individual_id=ind, sighting_id=sid, code=code, contour=contour
                )
            )
    return SyntheticPopulation(individuals=individuals, sightings=sightings, schema=schema)


def population_code_table(pop: SyntheticPopulation) -> list[tuple[str, str, str]]:
    """(individual, sighting, code string) rows for export or reporting."""
    return [
        (s.individual_id, s.sighting_id, format_code(s.code, pop.schema))
        for s in pop.sightings
    ]
