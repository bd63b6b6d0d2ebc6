"""Per-resolution reception history: (cell, sensor) -> message count.

The table is the trained artifact of the whole method. Building aggregates
observations into counts; verification only ever asks whether a pair exists
(``contains``) and whether a sensor was seen at all (``knows_sensor``).
Counts are kept for statistics and an optional minimum-count threshold.

Snapshot file layout (all integers big-endian):

    magic ``LOVE`` | version u16 | resolution u8 | entry count u64 |
    entries sorted by (cell, sensor): cell u64, sensor length u16,
    sensor UTF-8 bytes, count u64 | CRC-32C u32 of all preceding bytes
"""

from __future__ import annotations

import io
import os
import struct
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import geoindex
from ._crc32c import crc32c
from .errors import IntegrityError, ResolutionMismatchError, SnapshotFormatError
from .ingest import AdsbObservation

SNAPSHOT_MAGIC = b"LOVE"
SNAPSHOT_VERSION = 1

_BUILD_CHUNK = 1 << 16


@dataclass(frozen=True, slots=True)
class TableStats:
    """Summary statistics mirroring the per-resolution table columns."""

    pair_count: int
    avg_msgs_per_pair: float
    sensor_count: int


class AmountTable:
    """Immutable-after-build mapping (cell, sensor) -> count at one resolution."""

    __slots__ = ("resolution", "_counts", "_sensors")

    def __init__(self, resolution: int, counts: dict[tuple[int, str], int] | None = None):
        geoindex.check_resolution(resolution)
        self.resolution = resolution
        self._counts: dict[tuple[int, str], int] = {}
        self._sensors: set[str] = set()
        if counts:
            for (cell, sensor), count in counts.items():
                self._add(cell, sensor, count)

    def _add(self, cell: int, sensor: str, count: int) -> None:
        if count <= 0:
            raise ValueError(f"counts must be positive, got {count} for ({cell:#x}, {sensor})")
        if geoindex.cell_resolution(cell) != self.resolution:
            raise ResolutionMismatchError(
                f"cell {geoindex.cell_to_string(cell)} has resolution "
                f"{geoindex.cell_resolution(cell)}, table is {self.resolution}"
            )
        key = (cell, sensor)
        self._counts[key] = self._counts.get(key, 0) + count
        self._sensors.add(sensor)

    # -- queries ---------------------------------------------------------

    def _check_cell(self, cell: int) -> None:
        if geoindex.cell_resolution(cell) != self.resolution:
            raise ResolutionMismatchError(
                f"queried cell has resolution {geoindex.cell_resolution(cell)}, "
                f"table is {self.resolution}"
            )

    def contains(self, cell: int, sensor: str) -> bool:
        """True iff this sensor has recorded at least one message in the cell."""
        self._check_cell(cell)
        return (cell, sensor) in self._counts

    def count(self, cell: int, sensor: str) -> int:
        self._check_cell(cell)
        return self._counts.get((cell, sensor), 0)

    def knows_sensor(self, sensor: str) -> bool:
        """True iff the sensor appears anywhere in the table."""
        return sensor in self._sensors

    @property
    def sensors(self) -> frozenset[str]:
        return frozenset(self._sensors)

    @property
    def pair_count(self) -> int:
        return len(self._counts)

    @property
    def message_count(self) -> int:
        return sum(self._counts.values())

    def items(self) -> Iterator[tuple[tuple[int, str], int]]:
        """Entries sorted by (cell, sensor)."""
        return iter(sorted(self._counts.items()))

    def raw(self) -> dict[tuple[int, str], int]:
        """Read-only view intended for bulk verification; do not mutate."""
        return self._counts

    def stats(self) -> TableStats:
        pairs = len(self._counts)
        total = sum(self._counts.values())
        return TableStats(
            pair_count=pairs,
            avg_msgs_per_pair=total / pairs if pairs else 0.0,
            sensor_count=len(self._sensors),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AmountTable):
            return NotImplemented
        return self.resolution == other.resolution and self._counts == other._counts

    def __len__(self) -> int:
        return len(self._counts)

    def __repr__(self) -> str:
        return (
            f"AmountTable(resolution={self.resolution}, pairs={len(self._counts)}, "
            f"sensors={len(self._sensors)})"
        )


def build(observations: Iterable[AdsbObservation], resolution: int) -> AmountTable:
    """Aggregate observations into an amount table.

    Streams in chunks so generators of any length work; each chunk's cells
    are computed in one vectorized call.
    """
    geoindex.check_resolution(resolution)
    table = AmountTable(resolution)
    counts = table._counts
    sensors = table._sensors

    lats: list[float] = []
    lons: list[float] = []
    toks: list[str] = []

    def flush() -> None:
        if not toks:
            return
        cells = geoindex.cells_of(np.asarray(lats), np.asarray(lons), resolution)
        for key, n in Counter(zip(cells.tolist(), toks)).items():
            counts[key] = counts.get(key, 0) + n
        sensors.update(toks)
        lats.clear()
        lons.clear()
        toks.clear()

    for obs in observations:
        lats.append(obs.lat)
        lons.append(obs.lon)
        toks.append(obs.sensor)
        if len(toks) >= _BUILD_CHUNK:
            flush()
    flush()
    return table


def merge(a: AmountTable, b: AmountTable) -> AmountTable:
    """Key-wise sum of two tables built at the same resolution."""
    if a.resolution != b.resolution:
        raise ResolutionMismatchError(
            f"cannot merge tables at resolutions {a.resolution} and {b.resolution}"
        )
    merged = AmountTable(a.resolution)
    merged._counts.update(a._counts)
    for key, count in b._counts.items():
        merged._counts[key] = merged._counts.get(key, 0) + count
    merged._sensors.update(a._sensors)
    merged._sensors.update(b._sensors)
    return merged


def save(table: AmountTable, path: str | os.PathLike) -> None:
    """Write the sorted, checksummed binary snapshot."""
    buf = io.BytesIO()
    buf.write(SNAPSHOT_MAGIC)
    buf.write(struct.pack(">HBQ", SNAPSHOT_VERSION, table.resolution, len(table)))
    for (cell, sensor), count in table.items():
        raw = sensor.encode("utf-8")
        buf.write(struct.pack(">QH", cell, len(raw)))
        buf.write(raw)
        buf.write(struct.pack(">Q", count))
    payload = buf.getvalue()
    checksum = struct.pack(">I", crc32c(payload))
    with open(path, "wb") as f:
        f.write(payload)
        f.write(checksum)


def load(path: str | os.PathLike) -> AmountTable:
    """Read a snapshot produced by :func:`save`, verifying its checksum."""
    with open(path, "rb") as f:
        blob = f.read()
    if len(blob) < len(SNAPSHOT_MAGIC) + 11 + 4:
        raise IntegrityError(f"{path}: truncated snapshot ({len(blob)} bytes)")
    payload, checksum = blob[:-4], blob[-4:]
    if not payload.startswith(SNAPSHOT_MAGIC):
        raise SnapshotFormatError(f"{path}: bad magic bytes {blob[:4]!r}")
    if struct.unpack(">I", checksum)[0] != crc32c(payload):
        raise IntegrityError(f"{path}: checksum mismatch, file is corrupt")

    version, resolution, entry_count = struct.unpack_from(">HBQ", payload, 4)
    if version != SNAPSHOT_VERSION:
        raise SnapshotFormatError(
            f"{path}: snapshot version {version}, this build reads {SNAPSHOT_VERSION}"
        )

    table = AmountTable(resolution)
    offset = 4 + 11
    try:
        for _ in range(entry_count):
            cell, sensor_len = struct.unpack_from(">QH", payload, offset)
            offset += 10
            sensor = payload[offset : offset + sensor_len].decode("utf-8")
            if len(sensor.encode("utf-8")) != sensor_len:
                raise IntegrityError(f"{path}: truncated sensor id at offset {offset}")
            offset += sensor_len
            (count,) = struct.unpack_from(">Q", payload, offset)
            offset += 8
            table._add(cell, sensor, count)
    except struct.error as exc:
        raise IntegrityError(f"{path}: truncated entry section: {exc}") from None
    if offset != len(payload):
        raise IntegrityError(
            f"{path}: {len(payload) - offset} trailing bytes after {entry_count} entries"
        )
    return table


def export_csv(table: AmountTable, path: str | os.PathLike) -> None:
    """Human-readable dump: ``h3id,sensor,amount`` sorted by h3id."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("h3id,sensor,amount\n")
        for (cell, sensor), count in table.items():
            f.write(f"{geoindex.cell_to_string(cell)},{sensor},{count}\n")
