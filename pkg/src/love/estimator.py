"""Estimator-style facade: fit on trusted history, predict verdicts.

``LocationVerifier`` follows the scikit-learn parameter protocol
(``get_params`` / ``set_params``, fit returns self, fitted state in
trailing-underscore attributes), so it composes with sklearn tooling like
``clone`` without this package depending on sklearn itself.
"""

from __future__ import annotations

import numpy as np

from . import amount_store, geoindex
from .amount_store import AmountTable
from .errors import LoveError
from .ingest import AdsbObservation
from .verifier import BatchTiming, verify_batch


class NotFittedError(LoveError, AttributeError):
    """predict was called before fit."""


def as_observations(X) -> list[AdsbObservation]:
    """Coerce estimator input into observations.

    Accepts a sequence of :class:`AdsbObservation`, a sequence of
    ``(sensor, lat, lon)`` records, or a pandas DataFrame with ``sensor``,
    ``lat`` and ``lon`` columns.
    """
    if hasattr(X, "columns") and hasattr(X, "itertuples"):  # pandas frame
        missing = {"sensor", "lat", "lon"} - set(X.columns)
        if missing:
            raise ValueError(f"DataFrame input lacks columns: {sorted(missing)}")
        return [
            AdsbObservation(sensor=str(row.sensor), lat=float(row.lat), lon=float(row.lon))
            for row in X.itertuples(index=False)
        ]

    X = list(X)
    if not X:
        return []
    if isinstance(X[0], AdsbObservation):
        return X
    out = []
    for record in X:
        if len(record) < 3:
            raise ValueError(f"record needs (sensor, lat, lon), got {record!r}")
        sensor, lat, lon = record[0], record[1], record[2]
        out.append(AdsbObservation(sensor=str(sensor), lat=float(lat), lon=float(lon)))
    return out


class LocationVerifier:
    """Classify position claims against each sensor's reception history.

    Parameters
    ----------
    resolution:
        Grid resolution of the reception table, 2..7.
    min_count:
        Messages a (cell, sensor) pair needs before it vouches for a claim.
    threads:
        Worker threads for batch prediction; None means single-threaded.
    """

    def __init__(self, resolution: int = 4, min_count: int = 1, threads: int | None = None):
        self.resolution = resolution
        self.min_count = min_count
        self.threads = threads

    # -- sklearn parameter protocol ---------------------------------------

    def get_params(self, deep: bool = True) -> dict:
        return {
            "resolution": self.resolution,
            "min_count": self.min_count,
            "threads": self.threads,
        }

    def set_params(self, **params) -> "LocationVerifier":
        for key, value in params.items():
            if key not in self.get_params():
                raise ValueError(f"unknown parameter {key!r} for LocationVerifier")
            setattr(self, key, value)
        return self

    # -- estimator API -----------------------------------------------------

    def fit(self, X, y=None) -> "LocationVerifier":
        """Build the reception table from trusted observations."""
        geoindex.check_resolution(self.resolution)
        observations = as_observations(X)
        self.table_ = amount_store.build(observations, self.resolution)
        self.n_observations_ = len(observations)
        return self

    @classmethod
    def from_table(cls, table: AmountTable, **params) -> "LocationVerifier":
        """Wrap an existing table (e.g. loaded from a snapshot)."""
        est = cls(resolution=table.resolution, **params)
        est.table_ = table
        est.n_observations_ = table.message_count
        return est

    def _check_fitted(self) -> AmountTable:
        table = getattr(self, "table_", None)
        if table is None:
            raise NotFittedError("this LocationVerifier has not been fitted yet")
        return table

    def predict(self, X) -> np.ndarray:
        """Verdict per input row: Plausible / Implausible / UnknownSensor."""
        table = self._check_fitted()
        observations = as_observations(X)
        result = verify_batch(
            table, observations, min_count=self.min_count, threads=self.threads
        )
        if result.errors:
            idx, reason = next(iter(result.errors.items()))
            raise ValueError(f"invalid input at row {idx}: {reason}")
        self.timing_: BatchTiming = result.timing
        return np.array([v.value for v in result.verdicts], dtype=object)

    def score(self, X, y) -> float:
        """Accuracy of plausible-vs-not against boolean labels (True = legit)."""
        predictions = self.predict(X) == "Plausible"
        labels = np.asarray(list(y), dtype=bool)
        if predictions.shape != labels.shape:
            raise ValueError("X and y lengths differ")
        return float((predictions == labels).mean()) if labels.size else 0.0
