"""Forecast-error reports: delta distribution, accuracy shares, histogram."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, LengthMismatch


@dataclass
class EvalReport:
    n: int
    delta: np.ndarray            # predicted - actual, per observation
    share_exact: float           # |delta| = 0
    share_abs1: float            # |delta| = 1
    share_abs2: float            # |delta| = 2
    share_within1: float         # |delta| <= 1
    share_within2: float         # |delta| <= 2
    histogram: dict              # delta -> count, keys sorted ascending

    def to_dict(self):
        return {
            "n": self.n,
            "share_exact": self.share_exact,
            "share_abs1": self.share_abs1,
            "share_abs2": self.share_abs2,
            "share_within1": self.share_within1,
            "share_within2": self.share_within2,
            "histogram": {str(d): int(c) for d, c in self.histogram.items()},
        }


def evaluate(actual, predicted) -> EvalReport:
    """Forecast errors delta = predicted - actual, with both per-|delta|
    and cumulative shares (published tables mix the two conventions)."""
    actual = np.asarray(actual, dtype=int)
    predicted = np.asarray(predicted, dtype=int)
    if actual.shape != predicted.shape or actual.ndim != 1:
        raise LengthMismatch("actual and predicted must be equally long 1-d vectors")
    if actual.size == 0:
        raise EmptyInput("no observations to evaluate")
    delta = predicted - actual
    n = delta.size
    abs_delta = np.abs(delta)
    values, counts = np.unique(delta, return_counts=True)
    return EvalReport(
        n=n,
        delta=delta,
        share_exact=float(np.sum(abs_delta == 0)) / n,
        share_abs1=float(np.sum(abs_delta == 1)) / n,
        share_abs2=float(np.sum(abs_delta == 2)) / n,
        share_within1=float(np.sum(abs_delta <= 1)) / n,
        share_within2=float(np.sum(abs_delta <= 2)) / n,
        histogram={int(v): int(c) for v, c in zip(values, counts)},
    )


def histogram_csv(report: EvalReport) -> str:
    """Two-column CSV "delta,count", deltas ascending, LF line endings."""
    lines = ["delta,count"]
    for d in sorted(report.histogram):
        lines.append(f"{d},{report.histogram[d]}")
    return "\n".join(lines) + "\n"
