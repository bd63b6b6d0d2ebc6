"""Hexagonal geospatial indexing of WGS84 coordinates.

Maps coordinates to H3 cells at resolutions 2..7 and exposes the per
resolution grid constants. All geospatial math in the package lives behind
this module so the H3 backend can be swapped without touching callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import CoordinateError, ResolutionError
from . import _h3core, _h3vec
from ._h3core import (
    EARTH_RADIUS_KM,
    cell_to_latlng,
    cell_to_parent,
    great_circle_km,
    is_valid_cell,
)

__all__ = [
    "EARTH_RADIUS_KM",
    "KM_PER_DEG_LAT",
    "MIN_RESOLUTION",
    "MAX_RESOLUTION",
    "RESOLUTIONS",
    "GeoCoord",
    "ResolutionStats",
    "cell_of",
    "cells_of",
    "cell_resolution",
    "cell_to_latlng",
    "cell_to_parent",
    "cell_to_string",
    "cell_from_string",
    "cell_diameter_km",
    "check_resolution",
    "great_circle_km",
    "is_valid_cell",
    "resolution_stats",
]

MIN_RESOLUTION = 2
MAX_RESOLUTION = 7
RESOLUTIONS = tuple(range(MIN_RESOLUTION, MAX_RESOLUTION + 1))

# Kilometers per degree of latitude on the authalic sphere.
KM_PER_DEG_LAT = math.pi * EARTH_RADIUS_KM / 180.0

# Hexagon count and average hexagon area (km^2) per resolution; fixed
# constants of the H3 grid specification.
_GRID_CONSTANTS = {
    2: (5_870, 86_801.78),
    3: (41_150, 12_393.43),
    4: (288_110, 1_770.35),
    5: (2_016_830, 252.90),
    6: (14_117_870, 36.13),
    7: (98_825_150, 5.16),
}

# cell_diameter_km scales the circle-equivalent diameter by this factor to
# cover hexagon geometry and H3 area variance: the corner-to-corner diameter
# of a hexagon exceeds the equal-area circle's by ~1.10x, and the largest
# cell of a resolution exceeds the average area by ~1.27x (sqrt ~ 1.13x).
# 1.10 * 1.13 = 1.24, so 1.3 is a conservative upper bound.
_DIAMETER_SAFETY_FACTOR = 1.3


def check_resolution(res: int) -> int:
    """Validate a grid resolution, returning it unchanged."""
    if not isinstance(res, int) or isinstance(res, bool) or not (
        MIN_RESOLUTION <= res <= MAX_RESOLUTION
    ):
        raise ResolutionError(
            f"resolution must be an integer in {MIN_RESOLUTION}..{MAX_RESOLUTION}, got {res!r}"
        )
    return res


def _check_latitude(lat: float) -> float:
    if not isinstance(lat, (int, float)) or not math.isfinite(lat) or not -90.0 <= lat <= 90.0:
        raise CoordinateError(f"latitude must be a finite number in [-90, 90], got {lat!r}")
    return float(lat)


def _check_longitude(lon: float) -> float:
    if not isinstance(lon, (int, float)) or not math.isfinite(lon) or not -180.0 <= lon <= 180.0:
        raise CoordinateError(f"longitude must be a finite number in [-180, 180], got {lon!r}")
    return float(lon)


@dataclass(frozen=True, slots=True)
class GeoCoord:
    """A validated WGS84 point in degrees."""

    latitude: float
    longitude: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "latitude", _check_latitude(self.latitude))
        object.__setattr__(self, "longitude", _check_longitude(self.longitude))


@dataclass(frozen=True, slots=True)
class ResolutionStats:
    """Grid constants for one resolution."""

    resolution: int
    hexagon_count: int
    avg_area_km2: float


def cell_of(coord: GeoCoord, res: int) -> int:
    """The cell containing ``coord`` at resolution ``res``.

    Deterministic: the same input always yields the same 64-bit index.
    """
    check_resolution(res)
    if not isinstance(coord, GeoCoord):
        coord = GeoCoord(*coord)
    return _h3core.latlng_to_cell(coord.latitude, coord.longitude, res)


def cells_of(lats: np.ndarray, lons: np.ndarray, res: int) -> np.ndarray:
    """Batch form of :func:`cell_of` over parallel coordinate arrays.

    Coordinates are assumed valid (see GeoCoord); callers that ingest
    untrusted data must mask invalid entries first.
    """
    check_resolution(res)
    return _h3vec.latlng_to_cell(lats, lons, res)


def cell_resolution(cell: int) -> int:
    """Resolution encoded in a cell index."""
    return _h3core.get_resolution(cell)


def cell_to_string(cell: int) -> str:
    """Canonical 15-character lowercase hex rendering of a cell index."""
    return format(cell, "015x")


def cell_from_string(text: str) -> int:
    """Parse the canonical hex rendering, rejecting malformed indexes."""
    try:
        cell = int(text, 16)
    except ValueError:
        raise ValueError(f"not a hexadecimal cell index: {text!r}") from None
    if not is_valid_cell(cell):
        raise ValueError(f"not a valid cell index: {text!r}")
    return cell


def resolution_stats(res: int) -> ResolutionStats:
    """Hexagon count and average area for a resolution."""
    check_resolution(res)
    count, area = _GRID_CONSTANTS[res]
    return ResolutionStats(resolution=res, hexagon_count=count, avg_area_km2=area)


def cell_diameter_km(res: int) -> float:
    """Upper bound on the great-circle diameter of any cell at ``res``."""
    _, area = _GRID_CONSTANTS[check_resolution(res)]
    return 2.0 * math.sqrt(area / math.pi) * _DIAMETER_SAFETY_FACTOR
