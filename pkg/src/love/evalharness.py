"""Evaluation of labeled test sets across grid resolutions.

Positive class is "attack detected": an observation labeled false (attack)
that comes back not-Plausible is a true positive. Unknown-sensor verdicts
are aggregated per policy: counted as attack-side ("implausible"), as
legit-side ("plausible"), or excluded from the confusion matrix
("separate"); the count is always reported either way.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import amount_store
from .amount_store import AmountTable, TableStats
from .attackgen import LabeledObservation
from ._hashing import murmur3_x64_128
from .ingest import AdsbObservation
from .verifier import Verdict, verify_batch

logger = logging.getLogger(__name__)

REPORT_VERSION = 1

POLICIES = ("separate", "implausible", "plausible")

# Canonical field rendering for duplicate hashing: fixed order and fixed
# decimal places so the rate is reproducible; absent fields render as "-".
_DUP_FORMATS = (
    ("altitude", "{:.1f}"),
    ("heading", "{:.1f}"),
    ("lat", "{:.6f}"),
    ("lon", "{:.6f}"),
    ("speed", "{:.1f}"),
)


@dataclass(frozen=True, slots=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True, slots=True)
class EvalReport:
    """One (dataset, resolution) evaluation run."""

    resolution: int
    counts: ConfusionCounts
    fpr: float
    fnr: float
    accuracy: float
    wall_seconds: float
    throughput_per_sec: float
    table_stats: TableStats
    unknown_sensor_count: int
    policy: str
    dataset: str = "default"


@dataclass(frozen=True, slots=True)
class DuplicateStats:
    total_messages: int
    duplicate_messages: int
    duplicate_rate: float


def _rates(counts: ConfusionCounts) -> tuple[float, float, float]:
    fpr = counts.fp / (counts.fp + counts.tn) if counts.fp + counts.tn else 0.0
    fnr = counts.fn / (counts.fn + counts.tp) if counts.fn + counts.tp else 0.0
    accuracy = (counts.tp + counts.tn) / counts.total if counts.total else 0.0
    return fpr, fnr, accuracy


def evaluate(
    table: AmountTable,
    test: Sequence[LabeledObservation],
    policy: str = "separate",
    *,
    min_count: int = 1,
    threads: int | None = None,
    dataset: str = "default",
) -> EvalReport:
    """Run the test set through the verifier and fold into a report."""
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}, got {policy!r}")
    if not test:
        raise ValueError("test set must not be empty")

    result = verify_batch(
        table, [item.obs for item in test], min_count=min_count, threads=threads
    )
    if result.errors:
        first = next(iter(result.errors.items()))
        raise ValueError(f"test set contains invalid observations, e.g. index {first[0]}: {first[1]}")

    tp = tn = fp = fn = unknown = 0
    for item, verdict in zip(test, result.verdicts):
        if verdict is Verdict.UNKNOWN_SENSOR:
            unknown += 1
            if policy == "separate":
                continue
            flagged = policy == "implausible"
        else:
            flagged = verdict is not Verdict.PLAUSIBLE

        if item.label:  # legitimate
            if flagged:
                fp += 1
            else:
                tn += 1
        else:  # attack
            if flagged:
                tp += 1
            else:
                fn += 1

    counts = ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)
    fpr, fnr, accuracy = _rates(counts)
    return EvalReport(
        resolution=table.resolution,
        counts=counts,
        fpr=fpr,
        fnr=fnr,
        accuracy=accuracy,
        wall_seconds=result.timing.wall_seconds,
        throughput_per_sec=result.timing.throughput_per_sec,
        table_stats=table.stats(),
        unknown_sensor_count=unknown,
        policy=policy,
        dataset=dataset,
    )


def sweep_resolutions(
    corpus: Sequence[AdsbObservation],
    test: Sequence[LabeledObservation],
    resolutions: Iterable[int],
    policy: str = "separate",
    *,
    min_count: int = 1,
    threads: int | None = None,
    dataset: str = "default",
    on_error: str = "skip",
) -> list[EvalReport]:
    """One report per resolution, each against a table built from ``corpus``.

    A failing resolution is logged and skipped (or re-raised with
    ``on_error="raise"``); the sweep continues either way.
    """
    reports = []
    failures = []
    for res in sorted(set(resolutions)):
        try:
            table = amount_store.build(corpus, res)
            reports.append(
                evaluate(
                    table,
                    test,
                    policy,
                    min_count=min_count,
                    threads=threads,
                    dataset=dataset,
                )
            )
        except Exception as exc:
            if on_error == "raise":
                raise
            failures.append((res, exc))
            logger.warning("resolution %d failed: %s", res, exc)
    if failures and not reports:
        raise failures[0][1]
    return reports


def duplicate_key(obs: AdsbObservation) -> int:
    """128-bit hash of the canonical kinematic-field rendering."""
    parts = []
    for field, fmt in _DUP_FORMATS:
        value = getattr(obs, field)
        parts.append("-" if value is None else fmt.format(value))
    return murmur3_x64_128(";".join(parts).encode("ascii"))


def duplicate_stats(observations: Iterable[AdsbObservation]) -> DuplicateStats:
    """Count messages whose field hash was already seen earlier in the stream."""
    seen: set[int] = set()
    total = duplicates = 0
    for obs in observations:
        total += 1
        key = duplicate_key(obs)
        if key in seen:
            duplicates += 1
        else:
            seen.add(key)
    return DuplicateStats(
        total_messages=total,
        duplicate_messages=duplicates,
        duplicate_rate=duplicates / total if total else 0.0,
    )


# -- machine-readable report ---------------------------------------------


def report_to_dict(report: EvalReport) -> dict:
    counts = report.counts
    stats = report.table_stats
    return {
        "resolution": report.resolution,
        "tp": counts.tp,
        "tn": counts.tn,
        "fp": counts.fp,
        "fn": counts.fn,
        "fpr": report.fpr,
        "fnr": report.fnr,
        "accuracy": report.accuracy,
        "wall_seconds": report.wall_seconds,
        "throughput_per_sec": report.throughput_per_sec,
        "pair_count": stats.pair_count,
        "avg_msgs_per_pair": stats.avg_msgs_per_pair,
        "sensor_count": stats.sensor_count,
        "unknown_sensor_count": report.unknown_sensor_count,
        "policy": report.policy,
        "dataset": report.dataset,
    }


def report_from_dict(entry: dict) -> EvalReport:
    counts = ConfusionCounts(
        tp=entry["tp"], tn=entry["tn"], fp=entry["fp"], fn=entry["fn"]
    )
    return EvalReport(
        resolution=entry["resolution"],
        counts=counts,
        fpr=entry["fpr"],
        fnr=entry["fnr"],
        accuracy=entry["accuracy"],
        wall_seconds=entry["wall_seconds"],
        throughput_per_sec=entry["throughput_per_sec"],
        table_stats=TableStats(
            pair_count=entry["pair_count"],
            avg_msgs_per_pair=entry["avg_msgs_per_pair"],
            sensor_count=entry["sensor_count"],
        ),
        unknown_sensor_count=entry["unknown_sensor_count"],
        policy=entry["policy"],
        dataset=entry.get("dataset", "default"),
    )


def emit_report(reports: Sequence[EvalReport], path: str | os.PathLike) -> None:
    """Write the versioned JSON report, entries ordered by resolution."""
    if not reports:
        raise ValueError("cannot emit an empty report")
    doc = {
        "love_report_version": REPORT_VERSION,
        "reports": [report_to_dict(r) for r in sorted(reports, key=lambda r: (r.dataset, r.resolution))],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def load_report(path: str | os.PathLike) -> list[EvalReport]:
    """Read and structurally validate a JSON report file."""
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    if not isinstance(doc, dict) or doc.get("love_report_version") != REPORT_VERSION:
        raise ValueError(
            f"{path}: not a love_report_version {REPORT_VERSION} document"
        )
    return [report_from_dict(entry) for entry in doc["reports"]]
