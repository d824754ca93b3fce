"""Ordered-probit credit-rating toolkit.

Library layout mirrors the pipeline: rating scales -> dataset/indicators
-> ordered-probit estimation -> forecast evaluation -> two-agency
comparison, with a calibrated synthetic-data generator standing in for
the proprietary sample.
"""

from . import compare, data, evaluation, modelspec, oprobit, plots, scales, synth
from .errors import RatingKitError

__all__ = [
    "compare",
    "data",
    "evaluation",
    "modelspec",
    "oprobit",
    "plots",
    "scales",
    "synth",
    "RatingKitError",
]

__version__ = "0.1.0"
