"""Figure rendering for love-adsb evaluation reports."""

from .figures import (
    UsageError,
    accuracy_ylim,
    confusion_grid,
    plot_accuracy_curve,
    plot_heatmap,
    relative_times,
)
from .schema import REPORT_SCHEMA, ReportValidationError, load_report

__version__ = "0.1.0"

__all__ = [
    "REPORT_SCHEMA",
    "ReportValidationError",
    "UsageError",
    "accuracy_ylim",
    "confusion_grid",
    "load_report",
    "plot_accuracy_curve",
    "plot_heatmap",
    "relative_times",
]
