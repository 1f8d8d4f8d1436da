"""Attribute codes: parsing, canonical form, distance, and agreement.

Every animal gets an 8-slot code describing sex, age class, tusk
configuration, per-ear features, and extreme features. Unknown slots
use the wildcard "*". Run top to bottom; no arguments.
"""
import numpy as np

from herdbook.seek import (
    DEFAULT_SCHEMA,
    WILDCARD,
    attribute_agreement,
    format_code,
    parse_code,
    seek_distance,
)

print("schema", DEFAULT_SCHEMA.version, "with slots:")
for slot in DEFAULT_SCHEMA.slots:
    kind = "multi-token" if slot.multi else "single"
    print(f"  {slot.name:22s} {kind:11s} {len(slot.values)} values")

# Parsing canonicalizes: multi-token ear slots come back sorted.
raw = "F:AD:T2:T1+N2:U:N1:U:X0"
code = parse_code(raw)
print("\nraw   ", raw)
print("canon ", format_code(code))

# Distance is a weighted slot-by-slot comparison, age downweighted to 0.4,
# wildcards costing 0.6 regardless of the other side.
other = parse_code("F:JUV:T2:T1+N2:U:N1:U:X0")
print("\nage differs only          ->", seek_distance(code, other))

wild = parse_code("F:*:T2:T1+N2:U:N1:U:X0")
print("age wildcarded instead    ->", seek_distance(code, wild))

everything = parse_code("M:JUV:T0:N2:T1:U:H4:X1")
base = parse_code("F:AD:T2:U:U:N1:U:X0")
print("all eight slots differ    ->", seek_distance(base, everything))

# Agreement: how consistently did observers code the same animal?
rng = np.random.default_rng(3)
resights = []
for _ in range(4):
    values = list(code.values)
    if rng.uniform() < 0.5:
        values[1] = WILDCARD  # age is the slot people hedge on
    resights.append(parse_code(":".join(values)))

agreement = attribute_agreement([resights])
print("\nper-slot agreement across 4 codings of one animal:")
for name, fraction in agreement.items():
    print(f"  {name:22s} {fraction:.2f}")
