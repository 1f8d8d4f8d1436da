"""herdbook: open-set individual re-identification for elephants.

Combines a structured manual attribute code with contour-based visual
matching over ear outlines, wrapped in a sighting registry, an HTTP review
service, and a batch evaluation CLI.
"""

__version__ = "0.1.0"
