"""Eval harness: confusion accounting, policies, duplicates, reports."""

import json

import pytest

from love._rng import SplitMix64
from love.amount_store import build
from love.attackgen import LabeledObservation, compute_envelopes, gen_spoofed
from love.evalharness import (
    ConfusionCounts,
    duplicate_key,
    duplicate_stats,
    emit_report,
    evaluate,
    load_report,
    report_from_dict,
    report_to_dict,
    sweep_resolutions,
)
from love.geoindex import GeoCoord, RESOLUTIONS, cell_of
from love.ingest import AdsbObservation
from love.verifier import Verdict, verify

from helpers import synth_corpus


@pytest.fixture(scope="module")
def corpus():
    return synth_corpus(6_000, 30, seed=200)


@pytest.fixture(scope="module")
def table(corpus):
    return build(corpus, 4)


def legit(corpus, n):
    return [LabeledObservation(obs=o, label=True) for o in corpus[:n]]


class TestEvaluate:
    def test_fully_covered_legit_set(self, corpus, table):
        report = evaluate(table, legit(corpus, 500))
        c = report.counts
        assert (c.tp, c.fp, c.fn) == (0, 0, 0)
        assert c.tn == 500
        assert report.fpr == 0.0  # zero denominator handled as 0
        assert report.fnr == 0.0
        assert report.accuracy == 1.0

    def test_perfect_two_by_two(self, corpus, table):
        sensor = corpus[0].sensor
        test = legit(corpus, 2) + [
            LabeledObservation(obs=AdsbObservation(sensor, 31.0, -24.0), label=False),
            LabeledObservation(obs=AdsbObservation(sensor, 74.0, 44.0), label=False),
        ]
        report = evaluate(table, test)
        assert report.counts == ConfusionCounts(tp=2, tn=2, fp=0, fn=0)
        assert report.accuracy == 1.0

    def test_empty_test_set_rejected(self, table):
        with pytest.raises(ValueError):
            evaluate(table, [])

    def test_rates_match_recomputation(self, corpus, table):
        envelopes = compute_envelopes(corpus)
        test = legit(corpus, 800) + gen_spoofed(envelopes, 800, seed=11)
        report = evaluate(table, test, policy="implausible")
        tp = tn = fp = fn = 0
        for item in test:
            flagged = verify(table, item.obs) is not Verdict.PLAUSIBLE
            if item.label:
                fp, tn = (fp + 1, tn) if flagged else (fp, tn + 1)
            else:
                tp, fn = (tp + 1, fn) if flagged else (tp, fn + 1)
        assert report.counts == ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)
        assert report.fpr == (fp / (fp + tn) if fp + tn else 0.0)
        assert report.fnr == (fn / (fn + tp) if fn + tp else 0.0)
        assert report.accuracy == (tp + tn) / len(test)

    def test_false_negative_recount_at_coarse_resolution(self, corpus):
        # At res 2 cells are ~300 km wide: spoofs with small offsets land in
        # already-covered cells. fn must equal a brute-force recount of
        # spoofed points whose (cell, sensor) pair exists in the table.
        table2 = build(corpus, 2)
        envelopes = compute_envelopes(corpus)
        spoofs = gen_spoofed(envelopes, 3_000, seed=13)
        report = evaluate(table2, spoofs)
        seen = {(cell_of(GeoCoord(o.lat, o.lon), 2), o.sensor) for o in corpus}
        expected_fn = sum(
            1
            for item in spoofs
            if (cell_of(GeoCoord(item.obs.lat, item.obs.lon), 2), item.obs.sensor) in seen
        )
        assert report.counts.fn == expected_fn
        assert expected_fn > 0  # the coarse grid really does absorb some

    def test_unknown_policy_conservation(self, corpus, table):
        test = legit(corpus, 100) + [
            LabeledObservation(obs=AdsbObservation("stranger-1", 50.0, 10.0), label=False),
            LabeledObservation(obs=AdsbObservation("stranger-2", 51.0, 11.0), label=True),
        ]
        for policy in ("separate", "implausible", "plausible"):
            report = evaluate(table, test, policy=policy)
            assert report.unknown_sensor_count == 2
            assert report.policy == policy
            if policy == "separate":
                assert report.counts.total == len(test) - 2
            else:
                assert report.counts.total == len(test)

    def test_unknown_folding_direction(self, table, corpus):
        test = [
            LabeledObservation(obs=AdsbObservation("stranger", 50.0, 10.0), label=False)
        ]
        as_attack = evaluate(table, test, policy="implausible")
        assert as_attack.counts.tp == 1
        as_legit = evaluate(table, test, policy="plausible")
        assert as_legit.counts.fn == 1

    def test_bad_policy_rejected(self, table, corpus):
        with pytest.raises(ValueError):
            evaluate(table, legit(corpus, 1), policy="whatever")


class TestSweep:
    def test_single_resolution(self, corpus):
        reports = sweep_resolutions(corpus, legit(corpus, 50), [4])
        assert len(reports) == 1
        assert reports[0].resolution == 4

    def test_full_sweep_shape(self, corpus):
        envelopes = compute_envelopes(corpus)
        test = legit(corpus, 300) + gen_spoofed(envelopes, 300, seed=17)
        reports = sweep_resolutions(corpus, test, RESOLUTIONS)
        assert [r.resolution for r in reports] == list(RESOLUTIONS)
        pair_counts = [r.table_stats.pair_count for r in reports]
        assert pair_counts == sorted(pair_counts)

    def test_relative_time_normalization(self, corpus):
        reports = sweep_resolutions(corpus, legit(corpus, 200), [2, 4, 7])
        slowest = max(r.wall_seconds for r in reports)
        relative = [r.wall_seconds / slowest for r in reports]
        assert all(0.0 < rel <= 1.0 for rel in relative)
        assert max(relative) == 1.0


class TestDuplicates:
    def test_no_repeats(self):
        obs = [
            AdsbObservation("s", 40.0 + i * 0.001, 10.0, altitude=1000.0 + i)
            for i in range(500)
        ]
        stats = duplicate_stats(obs)
        assert stats.duplicate_messages == 0
        assert stats.duplicate_rate == 0.0

    @staticmethod
    def _fixture(total: int, repeats: int):
        """Corpus with exactly `repeats` messages repeating an earlier 5-tuple."""
        rng = SplitMix64(777)
        base = []
        for i in range(total - repeats):
            base.append(
                AdsbObservation(
                    sensor=f"s-{i % 37}",
                    lat=round(35.0 + rng.unit() * 30.0, 6),
                    lon=round(-20.0 + rng.unit() * 60.0, 6),
                    timestamp=float(i),
                    altitude=round(20_000 + rng.unit() * 20_000, 1),
                    heading=round(rng.unit() * 360.0, 1),
                    speed=round(300 + rng.unit() * 200, 1),
                )
            )
        # verify uniqueness of the base 5-tuples, then append repeats
        keys = {duplicate_key(o) for o in base}
        assert len(keys) == len(base)
        duplicated = []
        for k in range(repeats):
            src = base[rng.index_below(len(base))]
            duplicated.append(
                AdsbObservation(
                    sensor=f"other-{k}",
                    lat=src.lat,
                    lon=src.lon,
                    timestamp=src.timestamp + 10_000.0,  # time not hashed
                    altitude=src.altitude,
                    heading=src.heading,
                    speed=src.speed,
                )
            )
        return base + duplicated

    def test_scaled_paper_shape_1000_18(self):
        obs = self._fixture(1_000, 18)
        stats = duplicate_stats(obs)
        assert stats.duplicate_messages == 18
        assert stats.duplicate_rate == pytest.approx(0.018)

    def test_exact_tuple_comparison_oracle(self):
        # Hash-based duplicate decisions must agree with full-tuple equality.
        obs = self._fixture(2_000, 30)
        seen_tuples = set()
        expected = 0
        for o in obs:
            key = (o.altitude, o.heading, round(o.lat, 6), round(o.lon, 6), o.speed)
            if key in seen_tuples:
                expected += 1
            seen_tuples.add(key)
        stats = duplicate_stats(obs)
        assert stats.duplicate_messages == expected

    def test_absent_fields_hash_as_marker(self):
        a = AdsbObservation("s", 50.0, 10.0)
        b = AdsbObservation("t", 50.0, 10.0, timestamp=5.0)
        c = AdsbObservation("u", 50.0, 10.0, altitude=100.0)
        assert duplicate_key(a) == duplicate_key(b)  # sensor/time not hashed
        assert duplicate_key(a) != duplicate_key(c)


class TestReportFile:
    def test_roundtrip_field_for_field(self, corpus, table, tmp_path):
        report = evaluate(table, legit(corpus, 100))
        path = tmp_path / "report.json"
        emit_report([report], path)
        (loaded,) = load_report(path)
        assert loaded == report

    def test_schema_keys(self, corpus, table, tmp_path):
        report = evaluate(table, legit(corpus, 50))
        path = tmp_path / "report.json"
        emit_report([report], path)
        doc = json.loads(path.read_text())
        assert doc["love_report_version"] == 1
        entry = doc["reports"][0]
        required = {
            "resolution", "tp", "tn", "fp", "fn", "fpr", "fnr", "accuracy",
            "wall_seconds", "throughput_per_sec", "pair_count",
            "avg_msgs_per_pair", "sensor_count", "unknown_sensor_count", "policy",
        }
        assert required <= set(entry)

    def test_sweep_emits_sorted_by_resolution(self, corpus, tmp_path):
        reports = sweep_resolutions(corpus, legit(corpus, 50), [7, 2, 4])
        path = tmp_path / "sweep.json"
        emit_report(reports, path)
        doc = json.loads(path.read_text())
        assert [e["resolution"] for e in doc["reports"]] == [2, 4, 7]

    def test_dict_roundtrip(self, corpus, table):
        report = evaluate(table, legit(corpus, 10))
        assert report_from_dict(report_to_dict(report)) == report

    def test_version_check(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"love_report_version": 2, "reports": []}')
        with pytest.raises(ValueError):
            load_report(path)

    def test_empty_emit_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_report([], tmp_path / "x.json")
