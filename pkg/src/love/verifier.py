"""Two-phase plausibility check of single observations against a table.

Phase 1: does the receiving sensor have recorded messages in the cell the
claimed coordinates fall into? If yes, the claim is plausible. Phase 2:
otherwise, is the sensor known at all? A known sensor with an unseen cell
is implausible; an unseen sensor gets its own verdict so downstream policy
can decide how to count it.
"""

from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import geoindex
from .amount_store import AmountTable
from .errors import CoordinateError
from .ingest import AdsbObservation

_VERIFY_CHUNK = 1 << 16


class Verdict(enum.Enum):
    """Classification of one observation."""

    PLAUSIBLE = "Plausible"
    IMPLAUSIBLE = "Implausible"
    UNKNOWN_SENSOR = "UnknownSensor"

    def __str__(self) -> str:  # CSV / report rendering
        return self.value


@dataclass(frozen=True, slots=True)
class BatchTiming:
    """Wall-clock timing of one verify_batch call."""

    count: int
    wall_seconds: float
    throughput_per_sec: float


@dataclass(frozen=True, slots=True)
class BatchResult:
    """Positionally aligned verdicts plus timing.

    ``verdicts[i]`` is None when observation i could not be classified;
    ``errors`` maps that index to the reason. Valid observations always get
    exactly one of the three verdicts.
    """

    verdicts: list[Verdict | None]
    timing: BatchTiming
    errors: dict[int, str]


def verify(table: AmountTable, obs: AdsbObservation, *, min_count: int = 1) -> Verdict:
    """Classify one observation; raises CoordinateError on bad coordinates."""
    if not (math.isfinite(obs.lat) and -90.0 <= obs.lat <= 90.0):
        raise CoordinateError(f"latitude out of range: {obs.lat!r}")
    if not (math.isfinite(obs.lon) and -180.0 <= obs.lon <= 180.0):
        raise CoordinateError(f"longitude out of range: {obs.lon!r}")

    cell = geoindex.cell_of((obs.lat, obs.lon), table.resolution)
    if table.count(cell, obs.sensor) >= min_count:
        return Verdict.PLAUSIBLE
    if not table.knows_sensor(obs.sensor):
        return Verdict.UNKNOWN_SENSOR
    return Verdict.IMPLAUSIBLE


def _verify_chunk(
    table: AmountTable,
    chunk: Sequence[AdsbObservation],
    min_count: int,
) -> tuple[list[Verdict | None], list[tuple[int, str]]]:
    lats = np.fromiter((o.lat for o in chunk), dtype=np.float64, count=len(chunk))
    lons = np.fromiter((o.lon for o in chunk), dtype=np.float64, count=len(chunk))

    valid = (
        np.isfinite(lats)
        & np.isfinite(lons)
        & (np.abs(lats) <= 90.0)
        & (np.abs(lons) <= 180.0)
    )
    errors: list[tuple[int, str]] = []
    if not valid.all():
        for i in np.flatnonzero(~valid):
            errors.append((int(i), f"invalid coordinates ({lats[i]!r}, {lons[i]!r})"))
        lats = np.where(valid, lats, 0.0)
        lons = np.where(valid, lons, 0.0)

    cells = geoindex.cells_of(lats, lons, table.resolution).tolist()

    counts = table.raw()
    knows = table.knows_sensor
    verdicts: list[Verdict | None] = []
    if min_count <= 1:
        for obs, cell in zip(chunk, cells):
            if (cell, obs.sensor) in counts:
                verdicts.append(Verdict.PLAUSIBLE)
            elif knows(obs.sensor):
                verdicts.append(Verdict.IMPLAUSIBLE)
            else:
                verdicts.append(Verdict.UNKNOWN_SENSOR)
    else:
        for obs, cell in zip(chunk, cells):
            if counts.get((cell, obs.sensor), 0) >= min_count:
                verdicts.append(Verdict.PLAUSIBLE)
            elif knows(obs.sensor):
                verdicts.append(Verdict.IMPLAUSIBLE)
            else:
                verdicts.append(Verdict.UNKNOWN_SENSOR)

    for i, _reason in errors:
        verdicts[i] = None
    return verdicts, errors


def verify_batch(
    table: AmountTable,
    observations: Iterable[AdsbObservation],
    *,
    min_count: int = 1,
    threads: int | None = None,
) -> BatchResult:
    """Classify a batch, identical to mapping :func:`verify` element-wise.

    Work may be partitioned across ``threads`` workers; output order always
    matches input order. Per-element coordinate failures become None slots
    in the verdict list instead of aborting the batch.
    """
    batch = observations if isinstance(observations, (list, tuple)) else list(observations)

    start = time.perf_counter()
    chunks = [batch[i : i + _VERIFY_CHUNK] for i in range(0, len(batch), _VERIFY_CHUNK)]

    verdicts: list[Verdict | None] = []
    errors: dict[int, str] = {}
    if threads and threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: _verify_chunk(table, c, min_count), chunks))
    else:
        results = [_verify_chunk(table, chunk, min_count) for chunk in chunks]

    for chunk, (chunk_verdicts, chunk_errors) in zip(chunks, results):
        base = len(verdicts)
        verdicts.extend(chunk_verdicts)
        for offset, reason in chunk_errors:
            errors[base + offset] = reason

    wall = time.perf_counter() - start
    timing = BatchTiming(
        count=len(batch),
        wall_seconds=wall,
        throughput_per_sec=len(batch) / wall if wall > 0 else float("inf"),
    )
    return BatchResult(verdicts=verdicts, timing=timing, errors=errors)
