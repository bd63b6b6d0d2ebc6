"""Ingest: dialect parsing, expansion, filtering, streaming behavior."""

import gzip
import io
import tracemalloc

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from love.errors import FormatError
from love.ingest import (
    AdsbObservation,
    BoundingBox,
    EUROPE_BBOX,
    ParseStats,
    filter_bbox,
    parse_multi_sensor_csv,
    parse_per_flight_csv,
)

from helpers import DATA_DIR


def _bytes(text: str) -> io.BytesIO:
    return io.BytesIO(text.encode("utf-8"))


class TestDialectA:
    def test_row_expands_per_sensor(self):
        stats = ParseStats()
        obs = list(
            parse_multi_sensor_csv(
                _bytes('sensors,lat,lon,time\n"{s1,s2,s3}",48.1,11.5,1000\n'),
                stats,
            )
        )
        assert len(obs) == 3
        assert [o.sensor for o in obs] == ["s1", "s2", "s3"]
        assert all(o.lat == 48.1 and o.lon == 11.5 and o.timestamp == 1000.0 for o in obs)
        assert stats.malformed == 0

    def test_empty_sensor_list_is_malformed(self):
        stats = ParseStats()
        obs = list(
            parse_multi_sensor_csv(
                _bytes('sensors,lat,lon,time\n"{}",48.1,11.5,1000\n'), stats
            )
        )
        assert obs == []
        assert stats.malformed == 1

    def test_fixture_100_rows_avg_1295(self):
        stats = ParseStats()
        obs = list(parse_multi_sensor_csv(DATA_DIR / "dialect_a_100rows.csv", stats))
        assert stats.rows == 100
        assert stats.malformed == 0
        assert len(obs) == 1295  # average sensor-list length 12.95

    def test_missing_column_fatal(self):
        with pytest.raises(FormatError, match="time"):
            list(parse_multi_sensor_csv(_bytes("sensors,lat,lon\n{a},1,2\n")))

    def test_empty_input_fatal(self):
        with pytest.raises(FormatError):
            list(parse_multi_sensor_csv(_bytes("")))

    def test_malformed_rows_skipped_not_fatal(self):
        text = (
            "sensors,lat,lon,time\n"
            '"{a,b}",48.0,11.0,1\n'
            '"{c}",not-a-number,11.0,2\n'
            '"{d}",91.5,11.0,3\n'
            '"{e}",48.0,11.0,4\n'
        )
        stats = ParseStats()
        obs = list(parse_multi_sensor_csv(_bytes(text), stats))
        assert [o.sensor for o in obs] == ["a", "b", "e"]
        assert stats.rows == 4
        assert stats.malformed == 2
        assert len(stats.errors) == 2

    def test_row_order_preserved(self):
        text = 'sensors,lat,lon,time\n"{x}",10,1,1\n"{y}",20,2,2\n"{z}",30,3,3\n'
        obs = list(parse_multi_sensor_csv(_bytes(text)))
        assert [o.sensor for o in obs] == ["x", "y", "z"]

    def test_crlf_and_gzip(self, tmp_path):
        text = 'sensors,lat,lon,time\r\n"{a,b}",48.0,11.0,1\r\n'
        path = tmp_path / "obs.csv.gz"
        path.write_bytes(gzip.compress(text.encode("utf-8")))
        obs = list(parse_multi_sensor_csv(path))
        assert len(obs) == 2


class TestDialectB:
    def test_fixture_10_rows(self):
        stats = ParseStats()
        obs = list(parse_per_flight_csv(DATA_DIR / "dialect_b_10rows.csv", stats))
        assert len(obs) == 10
        assert stats.malformed == 0
        assert obs[0].altitude == 30000.0
        assert obs[0].heading is not None and obs[0].speed is not None

    def test_non_numeric_latitude_skipped(self):
        text = (
            "sensor,lat,lon,alt,heading,speed,time\n"
            "s1,oops,11.0,100,90,400,1\n"
            "s2,48.0,11.0,100,90,400,2\n"
        )
        stats = ParseStats()
        obs = list(parse_per_flight_csv(_bytes(text), stats))
        assert [o.sensor for o in obs] == ["s2"]
        assert stats.malformed == 1

    def test_duplicates_preserved(self):
        row = "s1,48.0,11.0,100.0,90.0,400.0,1\n"
        text = "sensor,lat,lon,alt,heading,speed,time\n" + row * 3
        obs = list(parse_per_flight_csv(_bytes(text)))
        assert len(obs) == 3  # dedup is not ingest's job

    def test_optional_fields_absent(self):
        text = "sensor,lat,lon,alt,heading,speed,time\ns1,48.0,11.0,,,,\n"
        (obs,) = parse_per_flight_csv(_bytes(text))
        assert obs.altitude is None and obs.heading is None
        assert obs.speed is None and obs.timestamp is None

    def test_out_of_range_heading_malformed(self):
        text = "sensor,lat,lon,alt,heading,speed,time\ns1,48.0,11.0,100,361,400,1\n"
        stats = ParseStats()
        assert list(parse_per_flight_csv(_bytes(text), stats)) == []
        assert stats.malformed == 1


class TestFilterBbox:
    def test_europe_box_keeps_interior(self):
        obs = [AdsbObservation("s", 50.0, 10.0)]
        assert list(filter_bbox(obs, EUROPE_BBOX)) == obs

    def test_drops_below_lat_min(self):
        obs = [AdsbObservation("s", 20.0, 10.0)]
        assert list(filter_bbox(obs, EUROPE_BBOX)) == []

    def test_boundary_inclusive(self):
        obs = [AdsbObservation("s", 30.0, -25.0), AdsbObservation("s", 75.0, 45.0)]
        assert list(filter_bbox(obs, EUROPE_BBOX)) == obs

    def test_idempotent(self):
        obs = [
            AdsbObservation("a", 50.0, 10.0),
            AdsbObservation("b", 10.0, 10.0),
            AdsbObservation("c", 75.0, 45.0),
        ]
        once = list(filter_bbox(obs, EUROPE_BBOX))
        twice = list(filter_bbox(once, EUROPE_BBOX))
        assert once == twice

    def test_stable_order(self):
        obs = [AdsbObservation(f"s{i}", 40.0 + i, 0.0) for i in range(10)]
        kept = list(filter_bbox(obs, EUROPE_BBOX))
        assert kept == [o for o in obs if 30 <= o.lat <= 75]

    def test_degenerate_box_rejected(self):
        with pytest.raises(ValueError):
            BoundingBox(50.0, 50.0, 0.0, 10.0)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(
            st.sampled_from(["s1", "s2", "s3", "s4", "s5"]), min_size=0, max_size=6
        ),
        min_size=0,
        max_size=25,
    )
)
def test_expansion_conservation(sensor_lists):
    # Total observations == sum of per-row list lengths over well-formed rows.
    lines = ["sensors,lat,lon,time"]
    for i, sensors in enumerate(sensor_lists):
        lines.append('"{%s}",%g,%g,%d' % (",".join(sensors), 40 + i * 0.01, 5, i))
    stats = ParseStats()
    obs = list(parse_multi_sensor_csv(_bytes("\n".join(lines) + "\n"), stats))
    well_formed = [s for s in sensor_lists if len(s) > 0]
    assert len(obs) == sum(len(s) for s in well_formed)
    assert stats.malformed == sum(1 for s in sensor_lists if len(s) == 0)


class _RowStream(io.RawIOBase):
    """Unbounded-size CSV byte stream generated lazily, for memory tests."""

    def __init__(self, rows: int):
        self._gen = self._generate(rows)
        self._buffer = b""

    @staticmethod
    def _generate(rows: int):
        yield b"sensors,lat,lon,time\n"
        for i in range(rows):
            yield (
                '"{s%d,s%d,s%d}",%.6f,%.6f,%d\n'
                % (i % 97, (i + 1) % 97, (i + 2) % 97, 30 + (i % 45), (i % 70) - 25, i)
            ).encode()

    def readable(self) -> bool:
        return True

    def readinto(self, b) -> int:
        while len(self._buffer) < len(b):
            chunk = next(self._gen, None)
            if chunk is None:
                break
            self._buffer += chunk
        n = min(len(b), len(self._buffer))
        b[:n] = self._buffer[:n]
        self._buffer = self._buffer[n:]
        return n


def test_streaming_memory_bounded():
    # ~ 13 MB of logical input; parser must hold only O(row) memory.
    rows = 200_000
    stream = io.BufferedReader(_RowStream(rows), buffer_size=1 << 16)
    tracemalloc.start()
    count = 0
    for _ in parse_multi_sensor_csv(stream):
        count += 1
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    assert count == rows * 3
    assert peak < 8 * 1024 * 1024, f"peak {peak / 1e6:.1f} MB"
