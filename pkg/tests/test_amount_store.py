"""Amount table: aggregation oracles, merge algebra, snapshot round-trips."""

import struct
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from love import amount_store, geoindex
from love.amount_store import AmountTable, build, export_csv, load, merge, save
from love.errors import IntegrityError, ResolutionMismatchError, SnapshotFormatError
from love.geoindex import GeoCoord, cell_of
from love.ingest import AdsbObservation

from helpers import synth_corpus


def brute_force_counts(corpus, res):
    return Counter((cell_of(GeoCoord(o.lat, o.lon), res), o.sensor) for o in corpus)


class TestBuild:
    def test_same_sensor_same_cell_aggregates(self):
        obs = [AdsbObservation("s1", 48.1, 11.5)] * 3
        table = build(obs, 4)
        cell = cell_of(GeoCoord(48.1, 11.5), 4)
        assert table.count(cell, "s1") == 3
        assert table.pair_count == 1

    def test_empty_input(self):
        table = build([], 4)
        assert table.pair_count == 0
        assert table.stats() == amount_store.TableStats(0, 0.0, 0)

    def test_build_accepts_generator(self):
        table = build(iter([AdsbObservation("s", 50.0, 9.0)]), 3)
        assert table.pair_count == 1

    def test_brute_force_group_by_oracle(self):
        corpus = synth_corpus(10_000, 40, seed=5)
        table = build(corpus, 4)
        expected = brute_force_counts(corpus, 4)
        assert table.pair_count == len(expected)
        for key, count in expected.items():
            assert table.count(*key) == count

    def test_conservation(self):
        corpus = synth_corpus(5_000, 20, seed=9)
        table = build(corpus, 5)
        assert table.message_count == len(corpus)

    def test_sensor_index_complete(self):
        corpus = synth_corpus(2_000, 17, seed=2)
        table = build(corpus, 4)
        assert table.sensors == {o.sensor for o in corpus}

    def test_monotone_pair_count_over_resolutions(self):
        corpus = synth_corpus(8_000, 30, seed=12)
        pair_counts = [build(corpus, res).pair_count for res in geoindex.RESOLUTIONS]
        assert pair_counts == sorted(pair_counts)


class TestQueries:
    def test_contains_after_single_observation(self):
        table = build([AdsbObservation("s1", 48.1, 11.5)], 4)
        cell = cell_of(GeoCoord(48.1, 11.5), 4)
        assert table.contains(cell, "s1")
        assert not table.contains(cell, "other")

    def test_knows_sensor(self):
        table = build([AdsbObservation("s1", 48.1, 11.5)], 4)
        assert table.knows_sensor("s1")
        assert not table.knows_sensor("never-seen")

    def test_membership_oracle_all_pairs(self):
        corpus = synth_corpus(3_000, 25, seed=31)
        table = build(corpus, 4)
        expected = brute_force_counts(corpus, 4)
        sensors = {o.sensor for o in corpus}
        cells = {k[0] for k in expected}
        for cell in cells:
            for sensor in sensors:
                assert table.contains(cell, sensor) == ((cell, sensor) in expected)

    def test_contains_count_coherence(self):
        corpus = synth_corpus(2_000, 10, seed=14)
        table = build(corpus, 3)
        for key, count in table.raw().items():
            assert count >= 1
            assert table.contains(*key)

    def test_resolution_mismatch_rejected(self):
        table = build([AdsbObservation("s1", 48.1, 11.5)], 4)
        wrong = cell_of(GeoCoord(48.1, 11.5), 5)
        with pytest.raises(ResolutionMismatchError):
            table.contains(wrong, "s1")


class TestMerge:
    def test_identity(self):
        table = build(synth_corpus(500, 5, seed=1), 4)
        empty = AmountTable(4)
        assert merge(table, empty) == table
        assert merge(empty, table) == table

    def test_commutative(self):
        a = build(synth_corpus(400, 5, seed=2), 4)
        b = build(synth_corpus(400, 7, seed=3), 4)
        assert merge(a, b) == merge(b, a)

    def test_sharded_build_equals_single_pass(self):
        corpus = synth_corpus(10_000, 40, seed=8)
        single = build(corpus, 4)
        shards = [build(corpus[i::4], 4) for i in range(4)]
        merged = shards[0]
        for shard in shards[1:]:
            merged = merge(merged, shard)
        assert merged == single

    def test_resolution_mismatch(self):
        with pytest.raises(ResolutionMismatchError):
            merge(AmountTable(4), AmountTable(5))

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_associative(self, data):
        def random_table(seed):
            n = data.draw(st.integers(min_value=0, max_value=30))
            return build(synth_corpus(n, 3, seed=seed), 3)

        a, b, c = (random_table(s) for s in data.draw(st.tuples(*[st.integers(0, 1000)] * 3)))
        assert merge(merge(a, b), c) == merge(a, merge(b, c))


class TestStats:
    def test_empty(self):
        stats = AmountTable(4).stats()
        assert (stats.pair_count, stats.avg_msgs_per_pair, stats.sensor_count) == (0, 0.0, 0)

    def test_one_pair_count_five(self):
        table = build([AdsbObservation("s1", 48.1, 11.5)] * 5, 4)
        stats = table.stats()
        assert (stats.pair_count, stats.avg_msgs_per_pair, stats.sensor_count) == (1, 5.0, 1)

    def test_known_group_sizes(self):
        # 3 sensors x 4 messages each at one point per sensor -> 3 pairs, avg 4.
        obs = []
        for i, sensor in enumerate(["a", "b", "c"]):
            obs.extend([AdsbObservation(sensor, 40.0 + i * 5, 10.0 + i * 5)] * 4)
        stats = build(obs, 4).stats()
        assert stats.pair_count == 3
        assert stats.avg_msgs_per_pair == pytest.approx(4.0)
        assert stats.sensor_count == 3


class TestSnapshot:
    def test_empty_roundtrip(self, tmp_path):
        path = tmp_path / "empty.love"
        save(AmountTable(4), path)
        assert load(path) == AmountTable(4)

    def test_roundtrip_and_reserialization_fixpoint(self, tmp_path):
        table = build(synth_corpus(10_000, 50, seed=77), 4)
        p1, p2 = tmp_path / "a.love", tmp_path / "b.love"
        save(table, p1)
        loaded = load(p1)
        assert loaded == table
        assert loaded.stats() == table.stats()
        save(loaded, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_truncated_file_rejected(self, tmp_path):
        path = tmp_path / "t.love"
        save(build(synth_corpus(100, 5, seed=4), 4), path)
        blob = path.read_bytes()
        for cut in (len(blob) - 3, len(blob) // 2, 7):
            path.write_bytes(blob[:cut])
            with pytest.raises(IntegrityError):
                load(path)

    def test_corrupted_byte_rejected(self, tmp_path):
        path = tmp_path / "c.love"
        save(build(synth_corpus(100, 5, seed=4), 4), path)
        blob = bytearray(path.read_bytes())
        blob[len(blob) // 2] ^= 0x40
        path.write_bytes(bytes(blob))
        with pytest.raises(IntegrityError, match="checksum"):
            load(path)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "m.love"
        save(AmountTable(4), path)
        blob = bytearray(path.read_bytes())
        blob[0] = ord("X")
        path.write_bytes(bytes(blob))
        with pytest.raises(SnapshotFormatError):
            load(path)

    def test_unknown_version_rejected(self, tmp_path):
        path = tmp_path / "v.love"
        save(AmountTable(4), path)
        blob = bytearray(path.read_bytes())
        blob[4:6] = struct.pack(">H", 99)
        # re-checksum so the version check, not the CRC, fires
        from love._crc32c import crc32c

        payload = bytes(blob[:-4])
        path.write_bytes(payload + struct.pack(">I", crc32c(payload)))
        with pytest.raises(SnapshotFormatError, match="version"):
            load(path)

    def test_export_csv_sorted(self, tmp_path):
        table = build(synth_corpus(500, 8, seed=21), 4)
        out = tmp_path / "table.csv"
        export_csv(table, out)
        lines = out.read_text().splitlines()
        assert lines[0] == "h3id,sensor,amount"
        keys = [tuple(line.split(",")[:2]) for line in lines[1:]]
        assert keys == sorted(keys)
        assert len(keys) == table.pair_count
        # h3ids rendered as canonical 15-char lowercase hex
        assert all(len(k[0]) == 15 and k[0] == k[0].lower() for k in keys)
