import json

import pytest


def entry(resolution, tp, tn, fp, fn, wall, dataset=None, accuracy=None):
    total = tp + tn + fp + fn
    e = {
        "resolution": resolution,
        "tp": tp,
        "tn": tn,
        "fp": fp,
        "fn": fn,
        "fpr": fp / (fp + tn) if fp + tn else 0.0,
        "fnr": fn / (fn + tp) if fn + tp else 0.0,
        "accuracy": accuracy if accuracy is not None else (tp + tn) / total,
        "wall_seconds": wall,
        "throughput_per_sec": total / wall if wall else 0.0,
        "pair_count": 1000 * resolution,
        "avg_msgs_per_pair": 12.5,
        "sensor_count": 200,
        "unknown_sensor_count": 0,
        "policy": "separate",
    }
    if dataset is not None:
        e["dataset"] = dataset
    return e


def write_report(path, entries):
    path.write_text(
        json.dumps({"love_report_version": 1, "reports": entries}, indent=2)
    )
    return path


@pytest.fixture
def trivial_report(tmp_path):
    """The (tp=2, tn=2, fp=0, fn=0) single-resolution report."""
    return write_report(tmp_path / "trivial.json", [entry(4, 2, 2, 0, 0, 0.5)])


@pytest.fixture
def sweep_report(tmp_path):
    """Six resolutions with distinct timings; res 7 slowest."""
    entries = [
        entry(2, 960, 990, 10, 40, 0.549, accuracy=0.9950),
        entry(3, 970, 992, 8, 30, 0.602, accuracy=0.9962),
        entry(4, 995, 999, 1, 5, 0.717, accuracy=0.9985),
        entry(5, 985, 996, 4, 15, 1.350, accuracy=0.9976),
        entry(6, 975, 994, 6, 25, 5.138, accuracy=0.9969),
        entry(7, 965, 991, 9, 35, 29.049, accuracy=0.9956),
    ]
    return write_report(tmp_path / "sweep.json", entries)
