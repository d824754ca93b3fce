"""Two-agency rating comparison: paired codes, delta/FDS/SPLIT measures
and the disagreement models fitted on them.

Sign convention: delta = sp_code - moodys_code, so a negative delta means
S&P assigned the better (lower) code. A flag flips the convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import oprobit, scales
from .data import regressor_value
from .errors import EmptyInput
from .modelspec import ModelSpec

SP_MINUS_MOODYS = "sp-minus-moodys"
MOODYS_MINUS_SP = "moodys-minus-sp"


@dataclass
class PairedRating:
    company_id: str
    sp_code: int
    moodys_code: int
    observation: object = None   # source row, used to build regressors


@dataclass
class ComparisonMeasures:
    delta: int
    fds: int
    split: int


def pair(observations, kind=scales.ScaleKind.GRADATIONS18):
    """Companies rated by both agencies, encoded on a common scale.

    Moody's symbols are cross-mapped before encoding. Returns the pair
    list; len() of it is the pairing count to report.
    """
    kind = scales.ScaleKind(kind)
    pairs = []
    for obs in observations:
        if obs.sp_rating is None or obs.moodys_rating is None:
            continue
        pairs.append(PairedRating(
            company_id=obs.company_id,
            sp_code=scales.encode(obs.sp_rating, kind, scales.Agency.SP),
            moodys_code=scales.encode(obs.moodys_rating, kind, scales.Agency.MOODYS),
            observation=obs,
        ))
    return pairs


def compute_measures(p: PairedRating, sign: str = SP_MINUS_MOODYS) -> ComparisonMeasures:
    delta = p.sp_code - p.moodys_code
    if sign == MOODYS_MINUS_SP:
        delta = -delta
    elif sign != SP_MINUS_MOODYS:
        raise ValueError(f"unknown delta sign convention: {sign!r}")
    return ComparisonMeasures(delta=delta, fds=abs(delta), split=int(delta != 0))


def summarize(pairs, sign: str = SP_MINUS_MOODYS):
    """Mean delta and the delta histogram over all pairs."""
    if not pairs:
        raise EmptyInput("no paired ratings")
    deltas = [compute_measures(p, sign).delta for p in pairs]
    values, counts = np.unique(deltas, return_counts=True)
    histogram = {int(v): int(c) for v, c in zip(values, counts)}
    return float(np.mean(deltas)), histogram


def measures_csv(pairs, sign: str = SP_MINUS_MOODYS) -> str:
    lines = ["company_id,delta,fds,split"]
    for p in pairs:
        m = compute_measures(p, sign)
        lines.append(f"{p.company_id},{m.delta},{m.fds},{m.split}")
    return "\n".join(lines) + "\n"


def delta_histogram_csv(pairs, sign: str = SP_MINUS_MOODYS) -> str:
    _, histogram = summarize(pairs, sign)
    lines = ["delta,count"]
    for d in sorted(histogram):
        lines.append(f"{d},{histogram[d]}")
    return "\n".join(lines) + "\n"


@dataclass
class DisagreementModels:
    delta_model: oprobit.OrderedProbitModel
    delta_diag: oprobit.FitDiagnostics
    delta_offset: int            # observed delta = category code + offset - 1
    fds_model: oprobit.OrderedProbitModel
    fds_diag: oprobit.FitDiagnostics
    split_model: oprobit.OrderedProbitModel
    split_diag: oprobit.FitDiagnostics
    n_used: int
    n_dropped: int


def fit_disagreement_models(pairs, spec: ModelSpec,
                            sign: str = SP_MINUS_MOODYS) -> DisagreementModels:
    """Fit the three disagreement models on pairs with complete regressors.

    (a) ordered probit on delta categories shifted to 1..K by the observed
    minimum, (b) ordered probit on |delta| categories, (c) binary probit
    on SPLIT. Estimation errors (EmptyCategory for gaps in the observed
    delta range, NotConverged) propagate from the core fitter.
    """
    rows, deltas = [], []
    dropped = 0
    for p in pairs:
        values = []
        for reg in spec.regressors:
            v = regressor_value(p.observation, reg)
            if v is None:
                values = None
                break
            values.append(v)
        if values is None:
            dropped += 1
            continue
        rows.append(values)
        deltas.append(compute_measures(p, sign).delta)
    if not rows:
        raise EmptyInput("no pairs with complete regressors")
    x = np.array(rows, dtype=float)
    deltas = np.array(deltas, dtype=int)

    offset = int(deltas.min())
    y_delta = deltas - offset + 1
    k_delta = int(y_delta.max())
    delta_model, delta_diag = oprobit.fit(x, y_delta, k_delta, columns=spec.regressors)

    fds = np.abs(deltas)
    y_fds = fds + 1
    k_fds = int(y_fds.max())
    fds_model, fds_diag = oprobit.fit(x, y_fds, k_fds, columns=spec.regressors)

    y_split = (deltas != 0).astype(int) + 1
    split_model, split_diag = oprobit.fit_binary_probit(
        x, y_split, columns=spec.regressors)

    return DisagreementModels(
        delta_model=delta_model, delta_diag=delta_diag, delta_offset=offset,
        fds_model=fds_model, fds_diag=fds_diag,
        split_model=split_model, split_diag=split_diag,
        n_used=len(rows), n_dropped=dropped,
    )
