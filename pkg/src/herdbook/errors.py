"""Shared exception hierarchy.

Every herdbook-specific failure derives from HerdbookError so callers can
catch the whole family at service boundaries.
"""


class HerdbookError(Exception):
    """Base class for all herdbook errors."""


# --- attribute codes ---

class MalformedCode(HerdbookError):
    """Code string has the wrong structure (segment count, bad combination)."""


class UnknownSymbol(HerdbookError):
    """A segment symbol is not in the slot's alphabet."""


class SchemaMismatch(HerdbookError):
    """Two codes (or a code and the active schema) disagree on schema version."""


class EmptyInput(HerdbookError):
    """An aggregate operation received no usable data."""


# --- contours ---

class DegenerateContour(HerdbookError):
    """Contour has too few points, zero length, or coincident endpoints."""


class BadScale(HerdbookError):
    """Disk radius outside the open interval (0, 0.5)."""


# --- match index ---

class EmptyGallery(HerdbookError):
    """No confirmed individuals (or no descriptors) to match against."""


class IndexTooSmall(HerdbookError):
    """Index holds too few descriptors for the requested neighbor count."""


# --- registry ---

class DuplicateEvent(HerdbookError):
    """External event already linked to a group sighting."""


class DuplicatePhoto(HerdbookError):
    """Photo with identical content already uploaded to this group sighting."""


class OutOfBounds(HerdbookError):
    """Bounding box exceeds the photo's pixel extent."""


class SightingResolved(HerdbookError):
    """Mutation attempted on a resolved group sighting."""


class NoBoxes(HerdbookError):
    """Individual sightings requested for a group sighting with no boxes."""


class AlreadyAssigned(HerdbookError):
    """Individual sighting already confirmed to an individual."""


class UnknownIndividual(HerdbookError):
    """Referenced individual id does not exist."""


class NotCoded(HerdbookError):
    """Operation requires the sighting to carry an attribute code first."""


class VersionConflict(HerdbookError):
    """Optimistic concurrency check failed; reload and retry."""


class ValidationError(HerdbookError):
    """Input record failed structural validation."""


class InsufficientData(HerdbookError):
    """Evaluation protocol requirements not met by the dump."""


# --- ingest ---

class FeedUnreachable(HerdbookError):
    """Event feed could not be reached after retries."""


class MalformedEvent(HerdbookError):
    """Event record from the feed failed validation."""
