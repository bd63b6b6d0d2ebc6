"""Shared test utilities: synthetic corpora and golden-fixture loading."""

from __future__ import annotations

import csv
import math
from pathlib import Path

from love._rng import SplitMix64
from love.ingest import AdsbObservation, BoundingBox, EUROPE_BBOX

DATA_DIR = Path(__file__).parent / "data"


def load_golden():
    """Rows of h3_golden.csv as tuples."""
    rows = []
    with open(DATA_DIR / "h3_golden.csv", newline="") as f:
        reader = csv.DictReader(f)
        for row in reader:
            rows.append(
                (
                    float(row["lat"]),
                    float(row["lng"]),
                    int(row["res"]),
                    row["cell"],
                    float(row["center_lat"]),
                    float(row["center_lng"]),
                    row["parent"],
                )
            )
    return rows


def gauss(rng: SplitMix64) -> float:
    """Standard normal via Box-Muller; two uniform draws per value."""
    u1 = 1.0 - rng.unit()  # (0, 1], keeps log() finite
    u2 = rng.unit()
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def synth_corpus(
    n_obs: int,
    n_sensors: int,
    seed: int,
    sigma_deg: float = 0.35,
    box: BoundingBox = EUROPE_BBOX,
) -> list[AdsbObservation]:
    """Clustered synthetic reception corpus.

    Each sensor gets a fixed center inside the box; its observations are
    normal around that center (clamped to the box), round-robin across
    sensors so every sensor receives n_obs / n_sensors messages.
    """
    rng = SplitMix64(seed)
    margin = 4.0
    centers = []
    for i in range(n_sensors):
        lat = box.lat_min + margin + rng.unit() * (box.lat_max - box.lat_min - 2 * margin)
        lon = box.lon_min + margin + rng.unit() * (box.lon_max - box.lon_min - 2 * margin)
        centers.append((f"sensor-{i:04d}", lat, lon))

    out = []
    for k in range(n_obs):
        sensor, clat, clon = centers[k % n_sensors]
        lat = min(box.lat_max, max(box.lat_min, clat + gauss(rng) * sigma_deg))
        lon = min(box.lon_max, max(box.lon_min, clon + gauss(rng) * sigma_deg))
        out.append(
            AdsbObservation(sensor=sensor, lat=lat, lon=lon, timestamp=float(k))
        )
    return out


def split_train_holdout(corpus, fraction: float = 0.9, seed: int = 7):
    """Deterministic shuffle then split; returns (train, holdout)."""
    rng = SplitMix64(seed)
    order = list(range(len(corpus)))
    for i in range(len(order) - 1, 0, -1):
        j = rng.index_below(i + 1)
        order[i], order[j] = order[j], order[i]
    cut = int(len(corpus) * fraction)
    return [corpus[i] for i in order[:cut]], [corpus[i] for i in order[cut:]]
