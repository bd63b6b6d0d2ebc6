"""Streaming ingestion of position-report corpora from CSV.

Two dialects are supported:

* dialect A (``sensors,lat,lon,time``): one row per message, the sensor
  column holding a brace-delimited list ``{a,b,c}`` of every receiver; each
  row expands into one observation per listed sensor.
* dialect B (``sensor,lat,lon,alt,heading,speed,time``): one row per
  (sensor, message) pair with kinematic fields.

Both parsers are streaming iterators: memory use is bounded by the longest
row, never by file size. Malformed rows are skipped and counted, not fatal.
Files ending in ``.gz`` are transparently decompressed.
"""

from __future__ import annotations

import csv
import gzip
import io
import math
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Union

from .errors import CoordinateError, FormatError

Source = Union[str, os.PathLike, IO[bytes]]

DIALECT_A_COLUMNS = ("sensors", "lat", "lon", "time")
DIALECT_B_COLUMNS = ("sensor", "lat", "lon", "alt", "heading", "speed", "time")


def check_sensor_id(sensor: str) -> str:
    """Validate a sensor token: non-empty, trimmed, CSV-safe."""
    if not isinstance(sensor, str):
        raise ValueError(f"sensor id must be a string, got {type(sensor).__name__}")
    if not sensor or sensor != sensor.strip() or "," in sensor:
        raise ValueError(f"invalid sensor id: {sensor!r}")
    return sensor


@dataclass(frozen=True, slots=True)
class AdsbObservation:
    """One decoded position report as received by one sensor."""

    sensor: str
    lat: float
    lon: float
    timestamp: float | None = None
    altitude: float | None = None
    heading: float | None = None
    speed: float | None = None

    def __post_init__(self) -> None:
        check_sensor_id(self.sensor)
        if not math.isfinite(self.lat) or not -90.0 <= self.lat <= 90.0:
            raise CoordinateError(f"latitude out of range: {self.lat!r}")
        if not math.isfinite(self.lon) or not -180.0 <= self.lon <= 180.0:
            raise CoordinateError(f"longitude out of range: {self.lon!r}")
        for name, value in (("timestamp", self.timestamp), ("altitude", self.altitude)):
            if value is not None and not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.heading is not None and not 0.0 <= self.heading <= 360.0:
            raise ValueError(f"heading must be in [0, 360], got {self.heading!r}")
        if self.speed is not None and not (math.isfinite(self.speed) and self.speed >= 0.0):
            raise ValueError(f"speed must be non-negative, got {self.speed!r}")


@dataclass(frozen=True, slots=True)
class BoundingBox:
    """Inclusive latitude/longitude rectangle."""

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self) -> None:
        for name in ("lat_min", "lat_max"):
            v = getattr(self, name)
            if not math.isfinite(v) or not -90.0 <= v <= 90.0:
                raise CoordinateError(f"{name} out of range: {v!r}")
        for name in ("lon_min", "lon_max"):
            v = getattr(self, name)
            if not math.isfinite(v) or not -180.0 <= v <= 180.0:
                raise CoordinateError(f"{name} out of range: {v!r}")
        if not self.lat_min < self.lat_max:
            raise ValueError(f"lat_min must be < lat_max, got {self.lat_min}, {self.lat_max}")
        if not self.lon_min < self.lon_max:
            raise ValueError(f"lon_min must be < lon_max, got {self.lon_min}, {self.lon_max}")

    def contains(self, lat: float, lon: float) -> bool:
        return (
            self.lat_min <= lat <= self.lat_max
            and self.lon_min <= lon <= self.lon_max
        )


# Default study region; boundaries are inclusive on all four edges.
EUROPE_BBOX = BoundingBox(lat_min=30.0, lat_max=75.0, lon_min=-25.0, lon_max=45.0)


@dataclass(slots=True)
class ParseStats:
    """Counters filled in while a parser is consumed."""

    rows: int = 0
    malformed: int = 0
    observations: int = 0
    errors: list[str] = field(default_factory=list)

    def _record(self, line_no: int, reason: str) -> None:
        self.malformed += 1
        if len(self.errors) < 20:  # keep a sample, not the whole flood
            self.errors.append(f"line {line_no}: {reason}")


def _open_text(source: Source) -> tuple[IO[str], bool]:
    """Return a text stream and whether this function opened it."""
    if isinstance(source, (str, os.PathLike)):
        raw: IO[bytes] = open(source, "rb")
        if str(source).endswith(".gz"):
            raw = gzip.open(raw, "rb")  # type: ignore[assignment]
        return io.TextIOWrapper(raw, encoding="utf-8", newline=""), True
    if isinstance(source, io.TextIOBase):
        return source, False  # type: ignore[return-value]
    return io.TextIOWrapper(source, encoding="utf-8", newline=""), False


def _header_index(header: list[str], required: tuple[str, ...], what: str) -> dict[str, int]:
    names = [h.strip().lower() for h in header]
    index = {}
    for col in required:
        if col not in names:
            raise FormatError(f"{what}: missing required column {col!r} in header {header!r}")
        index[col] = names.index(col)
    return index


def _parse_float(text: str) -> float | None:
    text = text.strip()
    if not text:
        return None
    value = float(text)  # may raise ValueError
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


def _split_sensor_list(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    return [tok for tok in (t.strip() for t in text.split(",")) if tok]


def parse_multi_sensor_csv(
    source: Source, stats: ParseStats | None = None
) -> Iterator[AdsbObservation]:
    """Parse dialect A, expanding each row into one observation per sensor.

    Rows with an empty sensor list, unparseable numbers, or out-of-range
    coordinates are counted as malformed and skipped.
    """
    stats = stats if stats is not None else ParseStats()
    stream, owned = _open_text(source)
    try:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None:
            raise FormatError("dialect A: empty input, header row is mandatory")
        col = _header_index(header, DIALECT_A_COLUMNS, "dialect A")

        for row in reader:
            stats.rows += 1
            line_no = reader.line_num
            try:
                sensors = _split_sensor_list(row[col["sensors"]])
                if not sensors:
                    raise ValueError("empty sensor list")
                lat = _parse_float(row[col["lat"]])
                lon = _parse_float(row[col["lon"]])
                if lat is None or lon is None:
                    raise ValueError("missing coordinate")
                timestamp = _parse_float(row[col["time"]])
                observations = [
                    AdsbObservation(sensor=s, lat=lat, lon=lon, timestamp=timestamp)
                    for s in sensors
                ]
            except (ValueError, IndexError) as exc:
                stats._record(line_no, str(exc))
                continue
            for obs in observations:
                stats.observations += 1
                yield obs
    finally:
        if owned:
            stream.close()


def parse_per_flight_csv(
    source: Source, stats: ParseStats | None = None
) -> Iterator[AdsbObservation]:
    """Parse dialect B: one observation per row, with kinematic fields."""
    stats = stats if stats is not None else ParseStats()
    stream, owned = _open_text(source)
    try:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None:
            raise FormatError("dialect B: empty input, header row is mandatory")
        col = _header_index(header, DIALECT_B_COLUMNS, "dialect B")

        for row in reader:
            stats.rows += 1
            line_no = reader.line_num
            try:
                lat = _parse_float(row[col["lat"]])
                lon = _parse_float(row[col["lon"]])
                if lat is None or lon is None:
                    raise ValueError("missing coordinate")
                obs = AdsbObservation(
                    sensor=row[col["sensor"]].strip(),
                    lat=lat,
                    lon=lon,
                    timestamp=_parse_float(row[col["time"]]),
                    altitude=_parse_float(row[col["alt"]]),
                    heading=_parse_float(row[col["heading"]]),
                    speed=_parse_float(row[col["speed"]]),
                )
            except (ValueError, IndexError) as exc:
                stats._record(line_no, str(exc))
                continue
            stats.observations += 1
            yield obs
    finally:
        if owned:
            stream.close()


def parse_csv(
    source: Source, dialect: str, stats: ParseStats | None = None
) -> Iterator[AdsbObservation]:
    """Dispatch to the dialect A or B parser by name."""
    dialect = dialect.lower()
    if dialect == "a":
        return parse_multi_sensor_csv(source, stats)
    if dialect == "b":
        return parse_per_flight_csv(source, stats)
    raise ValueError(f"unknown dialect {dialect!r}, expected 'a' or 'b'")


def filter_bbox(
    observations: Iterable[AdsbObservation], box: BoundingBox
) -> Iterator[AdsbObservation]:
    """Keep observations inside the box (inclusive edges), preserving order."""
    for obs in observations:
        if box.contains(obs.lat, obs.lon):
            yield obs
