"""Validation of the love_report_version 1 JSON schema.

The plotter never recomputes rates: a report that fails validation is
rejected before any rendering happens, and validated fields are rendered
verbatim.
"""

from __future__ import annotations

import json
import os

import jsonschema

REPORT_VERSION = 1

_ENTRY_SCHEMA = {
    "type": "object",
    "required": [
        "resolution",
        "tp",
        "tn",
        "fp",
        "fn",
        "fpr",
        "fnr",
        "accuracy",
        "wall_seconds",
        "throughput_per_sec",
        "pair_count",
        "avg_msgs_per_pair",
        "sensor_count",
        "unknown_sensor_count",
        "policy",
    ],
    "properties": {
        "resolution": {"type": "integer", "minimum": 2, "maximum": 7},
        "tp": {"type": "integer", "minimum": 0},
        "tn": {"type": "integer", "minimum": 0},
        "fp": {"type": "integer", "minimum": 0},
        "fn": {"type": "integer", "minimum": 0},
        "fpr": {"type": "number", "minimum": 0, "maximum": 1},
        "fnr": {"type": "number", "minimum": 0, "maximum": 1},
        "accuracy": {"type": "number", "minimum": 0, "maximum": 1},
        "wall_seconds": {"type": "number", "minimum": 0},
        "throughput_per_sec": {"type": "number", "minimum": 0},
        "pair_count": {"type": "integer", "minimum": 0},
        "avg_msgs_per_pair": {"type": "number", "minimum": 0},
        "sensor_count": {"type": "integer", "minimum": 0},
        "unknown_sensor_count": {"type": "integer", "minimum": 0},
        "policy": {"type": "string"},
        "dataset": {"type": "string"},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["love_report_version", "reports"],
    "properties": {
        "love_report_version": {"const": REPORT_VERSION},
        "reports": {"type": "array", "minItems": 1, "items": _ENTRY_SCHEMA},
    },
}


class ReportValidationError(ValueError):
    """The file is not a valid love_report_version 1 document."""


def load_report(path: str | os.PathLike) -> list[dict]:
    """Parse and validate; returns the report entries."""
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    try:
        jsonschema.validate(doc, REPORT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ReportValidationError(f"{path}: {exc.message}") from None
    return doc["reports"]
