"""Seeded generators for labeled attack traffic.

The main generator perturbs coordinates just outside the envelope of
everything a sensor has ever received, which is exactly what a spoofed
position looks like from that sensor's point of view. Ghost-track and
sensor-flood generators cover the remaining threat scenarios.

Draw order per spoofed observation (5 SplitMix64 outputs, see
tests/data/README.md): sensor index, latitude side, latitude delta,
longitude side, longitude delta. Side bit 1 adds beyond the envelope
maximum, 0 subtracts below the minimum; deltas are uniform in [0.1, 10]
degrees.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Union

from ._rng import SplitMix64
from .geoindex import KM_PER_DEG_LAT
from .ingest import AdsbObservation, BoundingBox

DELTA_MIN_DEG = 0.1
DELTA_MAX_DEG = 10.0

# Position reports arrive every half second.
REPORT_INTERVAL_S = 0.5

LABELED_CSV_COLUMNS = ("sensor", "lat", "lon", "time", "label")


@dataclass(frozen=True, slots=True)
class SensorEnvelope:
    """Extreme coordinates ever received by one sensor."""

    sensor: str
    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self) -> None:
        if self.lat_min > self.lat_max or self.lon_min > self.lon_max:
            raise ValueError(f"inverted envelope for sensor {self.sensor!r}")

    def contains(self, lat: float, lon: float) -> bool:
        return (
            self.lat_min <= lat <= self.lat_max
            and self.lon_min <= lon <= self.lon_max
        )


@dataclass(frozen=True, slots=True)
class LabeledObservation:
    """Observation plus ground truth: True = legitimate, False = attack."""

    obs: AdsbObservation
    label: bool


@dataclass(slots=True)
class SpoofStats:
    """Generation metadata for one gen_spoofed run."""

    generated: int = 0
    clamped: int = 0


def compute_envelopes(
    observations: Iterable[AdsbObservation],
) -> dict[str, SensorEnvelope]:
    """Per-sensor min/max latitude and longitude over the corpus."""
    extremes: dict[str, list[float]] = {}
    for obs in observations:
        e = extremes.get(obs.sensor)
        if e is None:
            extremes[obs.sensor] = [obs.lat, obs.lat, obs.lon, obs.lon]
        else:
            if obs.lat < e[0]:
                e[0] = obs.lat
            if obs.lat > e[1]:
                e[1] = obs.lat
            if obs.lon < e[2]:
                e[2] = obs.lon
            if obs.lon > e[3]:
                e[3] = obs.lon
    return {
        sensor: SensorEnvelope(sensor, e[0], e[1], e[2], e[3])
        for sensor, e in extremes.items()
    }


def gen_spoofed(
    envelopes: dict[str, SensorEnvelope],
    n: int,
    seed: int,
    *,
    stats: SpoofStats | None = None,
) -> list[LabeledObservation]:
    """``n`` spoofed observations, each outside its sensor's envelope.

    Both axes are perturbed independently so the point always leaves the
    envelope rectangle. Coordinates that overflow the valid domain are
    clamped to +/-90 / +/-180 and counted in ``stats``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > 0 and not envelopes:
        raise ValueError("cannot generate spoofs without envelopes")

    ordered = [envelopes[k] for k in sorted(envelopes)]
    rng = SplitMix64(seed)
    stats = stats if stats is not None else SpoofStats()
    out = []
    for i in range(n):
        env = ordered[rng.index_below(len(ordered))]

        if rng.boolean():
            lat = env.lat_max + rng.uniform(DELTA_MIN_DEG, DELTA_MAX_DEG)
        else:
            lat = env.lat_min - rng.uniform(DELTA_MIN_DEG, DELTA_MAX_DEG)
        if rng.boolean():
            lon = env.lon_max + rng.uniform(DELTA_MIN_DEG, DELTA_MAX_DEG)
        else:
            lon = env.lon_min - rng.uniform(DELTA_MIN_DEG, DELTA_MAX_DEG)

        clamped_lat = min(90.0, max(-90.0, lat))
        clamped_lon = min(180.0, max(-180.0, lon))
        if clamped_lat != lat or clamped_lon != lon:
            stats.clamped += 1

        out.append(
            LabeledObservation(
                obs=AdsbObservation(
                    sensor=env.sensor,
                    lat=clamped_lat,
                    lon=clamped_lon,
                    timestamp=float(i),
                ),
                label=False,
            )
        )
    stats.generated += n
    return out


def gen_ghost_track(
    region: BoundingBox,
    steps: int,
    speed_kmh: float,
    seed: int,
    *,
    sensor: str = "ghost-sensor",
) -> list[AdsbObservation]:
    """A smooth fake flight track inside ``region`` at report rate.

    Used to exercise the stationary-attacker scenario: the injected track
    itself is kinematically plausible, so only reception history can flag
    it. The track bounces off the region edges to stay inside.
    """
    if steps < 2:
        raise ValueError("a track needs at least 2 steps")
    if not 100.0 <= speed_kmh <= 1200.0:
        raise ValueError(f"speed must be within 100..1200 km/h, got {speed_kmh}")

    rng = SplitMix64(seed)
    # Start away from the edges so the first steps cannot immediately exit.
    margin_lat = 0.1 * (region.lat_max - region.lat_min)
    margin_lon = 0.1 * (region.lon_max - region.lon_min)
    lat = region.lat_min + margin_lat + rng.unit() * (region.lat_max - region.lat_min - 2 * margin_lat)
    lon = region.lon_min + margin_lon + rng.unit() * (region.lon_max - region.lon_min - 2 * margin_lon)
    bearing = rng.uniform(0.0, 2.0 * math.pi)

    step_km = speed_kmh * REPORT_INTERVAL_S / 3600.0
    speed_kt = speed_kmh / 1.852

    track = []
    for i in range(steps):
        track.append(
            AdsbObservation(
                sensor=sensor,
                lat=lat,
                lon=lon,
                timestamp=i * REPORT_INTERVAL_S,
                altitude=36_000.0,
                heading=math.degrees(bearing) % 360.0,
                speed=speed_kt,
            )
        )
        dlat = step_km * math.cos(bearing) / KM_PER_DEG_LAT
        dlon = step_km * math.sin(bearing) / (
            KM_PER_DEG_LAT * max(math.cos(math.radians(lat)), 1e-6)
        )
        if not region.lat_min <= lat + dlat <= region.lat_max:
            bearing = math.pi - bearing
            dlat = -dlat
        if not region.lon_min <= lon + dlon <= region.lon_max:
            bearing = -bearing
            dlon = -dlon
        lat += dlat
        lon += dlon
    return track


def gen_flood(
    sensor: str,
    template: AdsbObservation,
    n: int,
    seed: int,
    *,
    jitter_deg: float = 0.01,
) -> list[LabeledObservation]:
    """``n`` near-identical bogus messages aimed at one sensor.

    Coordinates jitter uniformly within ``jitter_deg`` of the template.
    Floods inside a cell the sensor legitimately covers pass the reception
    check by design; this generator exists to document that limitation.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = SplitMix64(seed)
    out = []
    for _ in range(n):
        lat = template.lat + rng.uniform(-jitter_deg, jitter_deg)
        lon = template.lon + rng.uniform(-jitter_deg, jitter_deg)
        out.append(
            LabeledObservation(
                obs=AdsbObservation(
                    sensor=sensor,
                    lat=min(90.0, max(-90.0, lat)),
                    lon=min(180.0, max(-180.0, lon)),
                    timestamp=template.timestamp,
                    altitude=template.altitude,
                    heading=template.heading,
                    speed=template.speed,
                ),
                label=False,
            )
        )
    return out


def write_labeled_csv(
    path: Union[str, os.PathLike, IO[str]],
    labeled: Iterable[LabeledObservation],
) -> int:
    """Write ``sensor,lat,lon,time,label`` rows; label 1 = legitimate."""

    def emit(f) -> int:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(LABELED_CSV_COLUMNS)
        rows = 0
        for item in labeled:
            obs = item.obs
            t = "" if obs.timestamp is None else repr(obs.timestamp)
            writer.writerow(
                [obs.sensor, repr(obs.lat), repr(obs.lon), t, int(item.label)]
            )
            rows += 1
        return rows

    if isinstance(path, (str, os.PathLike)):
        with open(path, "w", encoding="utf-8", newline="") as f:
            return emit(f)
    return emit(path)


def read_labeled_csv(
    path: Union[str, os.PathLike, IO[str]]
) -> Iterator[LabeledObservation]:
    """Read a file produced by :func:`write_labeled_csv`."""

    def rows(f):
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != list(
            LABELED_CSV_COLUMNS
        ):
            raise ValueError(f"unexpected labeled CSV header: {header!r}")
        for row in reader:
            sensor, lat, lon, t, label = row
            yield LabeledObservation(
                obs=AdsbObservation(
                    sensor=sensor,
                    lat=float(lat),
                    lon=float(lon),
                    timestamp=float(t) if t else None,
                ),
                label=bool(int(label)),
            )

    if isinstance(path, (str, os.PathLike)):
        with open(path, encoding="utf-8", newline="") as f:
            yield from rows(f)
    else:
        yield from rows(path)
