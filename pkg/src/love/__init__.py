"""Location verification of crowdsourced position reports.

Builds per-resolution reception-history tables (hexagonal cell x sensor ->
message count) from trusted traffic, then classifies new (sensor,
coordinate) claims as Plausible, Implausible, or UnknownSensor. Ships the
synthetic attack generators and the evaluation harness used to measure
false positive/negative rates across resolutions.
"""

from . import amount_store, attackgen, evalharness, geoindex, ingest, verifier
from .amount_store import AmountTable, TableStats
from .attackgen import LabeledObservation, SensorEnvelope
from .errors import (
    CoordinateError,
    FormatError,
    IntegrityError,
    LoveError,
    ResolutionError,
    ResolutionMismatchError,
    SnapshotFormatError,
)
from .estimator import LocationVerifier, NotFittedError
from .evalharness import ConfusionCounts, DuplicateStats, EvalReport
from .geoindex import GeoCoord, ResolutionStats
from .ingest import AdsbObservation, BoundingBox, EUROPE_BBOX, ParseStats
from .verifier import BatchResult, BatchTiming, Verdict, verify, verify_batch

__version__ = "0.1.0"

__all__ = [
    "AdsbObservation",
    "AmountTable",
    "BatchResult",
    "BatchTiming",
    "BoundingBox",
    "ConfusionCounts",
    "CoordinateError",
    "DuplicateStats",
    "EUROPE_BBOX",
    "EvalReport",
    "FormatError",
    "GeoCoord",
    "IntegrityError",
    "LabeledObservation",
    "LocationVerifier",
    "LoveError",
    "NotFittedError",
    "ParseStats",
    "ResolutionError",
    "ResolutionMismatchError",
    "ResolutionStats",
    "SensorEnvelope",
    "SnapshotFormatError",
    "TableStats",
    "Verdict",
    "amount_store",
    "attackgen",
    "evalharness",
    "geoindex",
    "ingest",
    "verifier",
    "verify",
    "verify_batch",
]
