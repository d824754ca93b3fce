"""Dataset ingestion, indicator derivation and design-matrix assembly.

Unit conventions (chosen to match the published descriptive statistics):
ROA, operating margin, cash-flow/sales and long-term-debt/capital are
stored in percent; debt/EBITDA, debt/assets, the current-liquidity proxy,
fixed-assets/assets, price/earnings and price/cash-flow are plain ratios;
capitalization enters models as the base-10 log of mln USD.

The liquidity proxy is stored as the direct ratio short-term assets /
short-term liabilities (the indicator-table formula), not its reciprocal.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from datetime import date, datetime

import numpy as np

from . import scales
from .errors import (
    DimensionMismatch,
    DivisionByZero,
    EmptyAfterDeletion,
    FileUnreadable,
    HeaderMismatch,
    InsufficientData,
    LengthMismatch,
    MissingField,
    RowParseError,
    ZeroMarketVariance,
)
from .modelspec import INDUSTRY_DUMMIES, ModelSpec, Regressor

INDUSTRIES = (
    "telecommunication", "oil_gas", "metal_mining",
    "consumer", "utilities", "manufacturing_chemicals",
)

# industry dummy source -> industry value
_DUMMY_INDUSTRY = {
    "telecom": "telecommunication",
    "oil_gas": "oil_gas",
    "metal_mining": "metal_mining",
    "consumer": "consumer",
    "utilities": "utilities",
}

NUMERIC_COLUMNS = (
    "mkt_cap_musd", "price", "eps", "net_earnings", "avg_assets",
    "operating_revenue", "receipts", "debt", "ebitda", "cash_flow",
    "lt_debt", "total_capital", "interest_expense", "st_assets",
    "st_liabilities", "fixed_assets", "total_assets", "beta", "volatility",
    "inflation", "gdp_growth", "cpi_corruption",
)

CSV_COLUMNS = (
    ("company_id", "as_of", "sp_rating", "moodys_rating")
    + NUMERIC_COLUMNS
    + ("sovereign_rating", "developed", "russia", "industry")
)

INDICATOR_NAMES = (
    "market_capitalization", "price_earnings", "roa", "operating_margin",
    "debt_ebitda", "cash_flow_sales", "debt_assets", "lt_debt_capital",
    "ebitda_interest", "current_ratio", "fix_assets_total_assets",
    "price_cash_flow", "beta", "volatility",
)


@dataclass
class Observation:
    company_id: str
    as_of: date
    sp_rating: str | None = None
    moodys_rating: str | None = None
    numbers: dict = field(default_factory=dict)  # NUMERIC_COLUMNS -> float|None
    sovereign_rating: str | None = None
    developed: int = 0
    russia: int = 0
    industry: str = "manufacturing_chemicals"

    def rating(self, agency):
        agency = scales.Agency(agency)
        return self.sp_rating if agency == scales.Agency.SP else self.moodys_rating


@dataclass
class LoadReport:
    loaded: int = 0
    skipped: int = 0
    errors: list = field(default_factory=list)  # RowParseError instances
    warnings: list = field(default_factory=list)


def _parse_row(row: dict, rownum: int) -> Observation:
    try:
        as_of = datetime.strptime(row["as_of"].strip(), "%Y-%m-%d").date()
    except ValueError as exc:
        raise RowParseError(rownum, f"bad as_of: {exc}") from None
    numbers = {}
    for col in NUMERIC_COLUMNS:
        raw = (row.get(col) or "").strip()
        if raw == "":
            numbers[col] = None
            continue
        try:
            numbers[col] = float(raw)
        except ValueError:
            raise RowParseError(rownum, f"non-numeric {col}: {raw!r}") from None
    industry = (row.get("industry") or "").strip()
    if industry not in INDUSTRIES:
        raise RowParseError(rownum, f"unknown industry: {industry!r}")
    try:
        developed = int(row["developed"])
        russia = int(row["russia"])
    except ValueError:
        raise RowParseError(rownum, "developed/russia must be 0 or 1") from None
    if developed not in (0, 1) or russia not in (0, 1):
        raise RowParseError(rownum, "developed/russia must be 0 or 1")
    if russia == 1 and developed == 1:
        raise RowParseError(rownum, "russia=1 implies developed=0")
    return Observation(
        company_id=row["company_id"].strip(),
        as_of=as_of,
        sp_rating=(row.get("sp_rating") or "").strip() or None,
        moodys_rating=(row.get("moodys_rating") or "").strip() or None,
        numbers=numbers,
        sovereign_rating=(row.get("sovereign_rating") or "").strip() or None,
        developed=developed,
        russia=russia,
        industry=industry,
    )


def load_csv(path, max_row_errors: int = 100):
    """Read the standard dataset CSV. Returns (observations, LoadReport).

    Rows failing type checks are skipped and reported with their row
    number; more than ``max_row_errors`` bad rows aborts the load.
    """
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise FileUnreadable(f"{path}: {exc}") from exc
    report = LoadReport()
    observations = []
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise HeaderMismatch(f"{path}: empty file, no header")
        missing = set(CSV_COLUMNS) - set(reader.fieldnames)
        if missing:
            raise HeaderMismatch(f"{path}: missing columns {sorted(missing)}")
        for rownum, row in enumerate(reader, start=2):
            try:
                observations.append(_parse_row(row, rownum))
                report.loaded += 1
            except RowParseError as exc:
                report.skipped += 1
                report.errors.append(exc)
                if report.skipped > max_row_errors:
                    raise
    if not observations:
        report.warnings.append(f"{path}: no data rows")
    return observations, report


def save_csv(observations, path):
    """Write observations in the standard CSV schema (LF line endings)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for obs in observations:
            row = [obs.company_id, obs.as_of.isoformat(),
                   obs.sp_rating or "", obs.moodys_rating or ""]
            for col in NUMERIC_COLUMNS:
                v = obs.numbers.get(col)
                row.append("" if v is None else repr(float(v)))
            row += [obs.sovereign_rating or "", obs.developed, obs.russia,
                    obs.industry]
            writer.writerow(row)


# --- market-risk indicators from return series ---

def compute_beta(r_i, r_m) -> float:
    """Cov(R_i, R_m) / Var(R_m), both with n-1 normalization."""
    r_i = np.asarray(r_i, dtype=float)
    r_m = np.asarray(r_m, dtype=float)
    if r_i.shape != r_m.shape or r_i.ndim != 1:
        raise LengthMismatch("return series must be 1-d and equally long")
    if r_i.size < 2:
        raise LengthMismatch("need at least 2 return observations")
    var_m = float(np.var(r_m, ddof=1))
    if var_m <= 0.0:
        raise ZeroMarketVariance("market return series is constant")
    cov = float(np.cov(r_i, r_m, ddof=1)[0, 1])
    return cov / var_m


def compute_volatility(r_i, exponent: float = 0.5) -> float:
    """Var(R_i) raised to ``exponent`` (0.5 = plain std deviation)."""
    r_i = np.asarray(r_i, dtype=float)
    if r_i.ndim != 1 or r_i.size < 2:
        raise LengthMismatch("need a 1-d series of at least 2 returns")
    return float(np.var(r_i, ddof=1)) ** exponent


def load_return_series(path):
    """Per-company return CSV: columns date, r_i, r_m."""
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise FileUnreadable(f"{path}: {exc}") from exc
    r_i, r_m = [], []
    with fh:
        reader = csv.DictReader(fh)
        required = {"date", "r_i", "r_m"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise HeaderMismatch(f"{path}: expected columns {sorted(required)}")
        for row in reader:
            r_i.append(float(row["r_i"]))
            r_m.append(float(row["r_m"]))
    return np.array(r_i), np.array(r_m)


def fill_market_risk(observations, returns_dir, vol_exponent: float = 0.5):
    """Fill blank beta/volatility from ``<returns_dir>/<company_id>.csv``."""
    filled = 0
    for obs in observations:
        if obs.numbers.get("beta") is not None and obs.numbers.get("volatility") is not None:
            continue
        path = os.path.join(returns_dir, f"{obs.company_id}.csv")
        if not os.path.exists(path):
            continue
        r_i, r_m = load_return_series(path)
        if obs.numbers.get("beta") is None:
            obs.numbers["beta"] = compute_beta(r_i, r_m)
        if obs.numbers.get("volatility") is None:
            obs.numbers["volatility"] = compute_volatility(r_i, vol_exponent)
        filled += 1
    return filled


# --- indicator derivation ---

def _require(obs, *names):
    vals = []
    for name in names:
        v = obs.numbers.get(name)
        if v is None:
            raise MissingField(name)
        vals.append(v)
    return vals


def _ratio(num, den, indicator, percent=False):
    if den == 0.0:
        raise DivisionByZero(indicator)
    r = num / den
    return 100.0 * r if percent else r


def derive_indicators(obs: Observation) -> dict:
    """All 14 financial/market indicators for one observation.

    Raises MissingField/DivisionByZero when a raw input is absent or a
    denominator is zero. Price/cash-flow is computed as market cap over
    total cash flow, which equals price over per-share cash flow.
    """
    mkt_cap, = _require(obs, "mkt_cap_musd")
    price, eps = _require(obs, "price", "eps")
    net, avg_assets = _require(obs, "net_earnings", "avg_assets")
    op_rev, receipts = _require(obs, "operating_revenue", "receipts")
    debt, ebitda = _require(obs, "debt", "ebitda")
    cash_flow, = _require(obs, "cash_flow")
    lt_debt, capital = _require(obs, "lt_debt", "total_capital")
    interest, = _require(obs, "interest_expense")
    st_a, st_l = _require(obs, "st_assets", "st_liabilities")
    fixed, total = _require(obs, "fixed_assets", "total_assets")
    beta, vol = _require(obs, "beta", "volatility")
    return {
        "market_capitalization": mkt_cap,
        "price_earnings": _ratio(price, eps, "price_earnings"),
        "roa": _ratio(net, avg_assets, "roa", percent=True),
        "operating_margin": _ratio(op_rev, receipts, "operating_margin", percent=True),
        "debt_ebitda": _ratio(debt, ebitda, "debt_ebitda"),
        "cash_flow_sales": _ratio(cash_flow, receipts, "cash_flow_sales", percent=True),
        "debt_assets": _ratio(debt, total, "debt_assets"),
        "lt_debt_capital": _ratio(lt_debt, capital, "lt_debt_capital", percent=True),
        "ebitda_interest": _ratio(ebitda, interest, "ebitda_interest"),
        "current_ratio": _ratio(st_a, st_l, "current_ratio"),
        "fix_assets_total_assets": _ratio(fixed, total, "fix_assets_total_assets"),
        "price_cash_flow": _ratio(mkt_cap, cash_flow, "price_cash_flow"),
        "beta": beta,
        "volatility": vol,
    }


def source_value(obs: Observation, source: str):
    """Value of one regressor source, or None when inputs are missing.

    ``mkt_cap`` is the base-10 log of market capitalization; zero
    denominators and non-positive capitalization count as missing here
    (build_design_matrix turns them into listwise deletions).
    """
    if source in _DUMMY_INDUSTRY:
        return 1.0 if obs.industry == _DUMMY_INDUSTRY[source] else 0.0
    if source == "developed":
        return float(obs.developed)
    if source == "russia":
        return float(obs.russia)
    if source in ("inflation", "gdp_growth", "cpi_corruption"):
        return obs.numbers.get(source)
    if source == "mkt_cap":
        v = obs.numbers.get("mkt_cap_musd")
        if v is None or v <= 0.0:
            return None
        return math.log10(v)
    try:
        return _indicator_one(obs, source)
    except (MissingField, DivisionByZero):
        return None


_INDICATOR_INPUTS = {
    "price_earnings": (("price", "eps"), False),
    "roa": (("net_earnings", "avg_assets"), True),
    "operating_margin": (("operating_revenue", "receipts"), True),
    "debt_ebitda": (("debt", "ebitda"), False),
    "cash_flow_sales": (("cash_flow", "receipts"), True),
    "debt_assets": (("debt", "total_assets"), False),
    "lt_debt_capital": (("lt_debt", "total_capital"), True),
    "ebitda_interest": (("ebitda", "interest_expense"), False),
    "current_ratio": (("st_assets", "st_liabilities"), False),
    "fix_assets_total_assets": (("fixed_assets", "total_assets"), False),
    "price_cash_flow": (("mkt_cap_musd", "cash_flow"), False),
}


def _indicator_one(obs, source):
    if source in ("beta", "volatility"):
        return _require(obs, source)[0]
    (num_col, den_col), percent = _INDICATOR_INPUTS[source]
    num, den = _require(obs, num_col, den_col)
    return _ratio(num, den, source, percent=percent)


def regressor_value(obs: Observation, reg: Regressor):
    v = source_value(obs, reg.source)
    if v is None:
        return None
    if reg.transform == "square":
        return v * v
    if reg.transform == "log10":
        if v <= 0.0:
            return None
        return math.log10(v)
    return v


# --- design matrix ---

@dataclass
class DesignMatrix:
    x: np.ndarray                 # (n, p)
    y: np.ndarray                 # (n,) response codes in 1..K
    columns: tuple                # Regressor descriptors
    scale_kind: scales.ScaleKind
    agency: scales.Agency
    company_ids: tuple = ()
    deleted: tuple = ()           # (input row index, reason)

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def p(self):
        return self.x.shape[1]

    @property
    def k(self):
        return scales.n_codes(self.scale_kind)


def build_design_matrix(observations, spec: ModelSpec,
                        kind: scales.ScaleKind, agency) -> DesignMatrix:
    """Assemble regressors and encoded responses with listwise deletion.

    Rows missing the selected agency's rating or any regressor input are
    dropped and reported in ``deleted``.
    """
    kind = scales.ScaleKind(kind)
    agency = scales.Agency(agency)
    rows, codes, ids, deleted = [], [], [], []
    for idx, obs in enumerate(observations):
        symbol = obs.rating(agency)
        if symbol is None:
            deleted.append((idx, "no rating"))
            continue
        values = []
        missing = None
        for reg in spec.regressors:
            v = regressor_value(obs, reg)
            if v is None:
                missing = reg.column_name
                break
            values.append(v)
        if missing is not None:
            deleted.append((idx, f"missing {missing}"))
            continue
        codes.append(scales.encode(symbol, kind, agency))
        rows.append(values)
        ids.append(obs.company_id)
    if not rows:
        raise EmptyAfterDeletion(
            f"no complete rows for spec {spec.name!r} ({len(deleted)} deleted)")
    return DesignMatrix(
        x=np.array(rows, dtype=float),
        y=np.array(codes, dtype=int),
        columns=tuple(spec.regressors),
        scale_kind=kind,
        agency=agency,
        company_ids=tuple(ids),
        deleted=tuple(deleted),
    )


# --- lag alignment ---

def _month_diff(later: date, earlier: date) -> int:
    # calendar-month difference; day of month is ignored
    return (later.year - earlier.year) * 12 + (later.month - earlier.month)


def align_lag(financials, ratings, lag_months: int = 18):
    """Join each rating to the latest financials at least ``lag_months`` older.

    Returns (joined observations, unmatched count). The joined row keeps
    the rating row's identity, ratings and date, and takes every numeric
    field plus dummies from the matched financial snapshot.
    """
    by_company = {}
    for obs in financials:
        by_company.setdefault(obs.company_id, []).append(obs)
    for snaps in by_company.values():
        snaps.sort(key=lambda o: o.as_of)
    joined, unmatched = [], 0
    for r in ratings:
        candidates = [
            f for f in by_company.get(r.company_id, ())
            if _month_diff(r.as_of, f.as_of) >= lag_months
        ]
        if not candidates:
            unmatched += 1
            continue
        f = candidates[-1]
        joined.append(Observation(
            company_id=r.company_id,
            as_of=r.as_of,
            sp_rating=r.sp_rating,
            moodys_rating=r.moodys_rating,
            numbers=dict(f.numbers),
            sovereign_rating=f.sovereign_rating or r.sovereign_rating,
            developed=f.developed,
            russia=f.russia,
            industry=f.industry,
        ))
    return joined, unmatched


# --- descriptive statistics ---

@dataclass
class SummaryStats:
    columns: tuple
    mean: np.ndarray
    median: np.ndarray
    maximum: np.ndarray
    minimum: np.ndarray
    sd: np.ndarray
    correlation: np.ndarray
    n_complete: np.ndarray

    def to_dict(self):
        per_column = {}
        for i, c in enumerate(self.columns):
            per_column[c] = {
                "mean": float(self.mean[i]),
                "median": float(self.median[i]),
                "max": float(self.maximum[i]),
                "min": float(self.minimum[i]),
                "sd": float(self.sd[i]),
                "n": int(self.n_complete[i]),
            }
        return {
            "columns": list(self.columns),
            "statistics": per_column,
            "correlation": [[float(v) for v in row] for row in self.correlation],
        }


def descriptive_stats(observations, columns) -> SummaryStats:
    """Mean/median/max/min/sd (n-1) and pairwise-complete correlations."""
    cols = tuple(columns)
    mat = np.full((len(observations), len(cols)), np.nan)
    for i, obs in enumerate(observations):
        for j, c in enumerate(cols):
            v = source_value(obs, c)
            if v is not None:
                mat[i, j] = v
    n_complete = np.sum(~np.isnan(mat), axis=0)
    for j, c in enumerate(cols):
        if n_complete[j] < 2:
            raise InsufficientData(c)
    mean = np.nanmean(mat, axis=0)
    median = np.nanmedian(mat, axis=0)
    maximum = np.nanmax(mat, axis=0)
    minimum = np.nanmin(mat, axis=0)
    sd = np.nanstd(mat, axis=0, ddof=1)
    p = len(cols)
    corr = np.eye(p)
    for a in range(p):
        for b in range(a + 1, p):
            ok = ~np.isnan(mat[:, a]) & ~np.isnan(mat[:, b])
            if ok.sum() < 2:
                raise InsufficientData(f"{cols[a]}/{cols[b]}")
            xa, xb = mat[ok, a], mat[ok, b]
            sa, sb = xa.std(ddof=1), xb.std(ddof=1)
            if sa == 0.0 or sb == 0.0:
                r = 0.0
            else:
                r = float(np.cov(xa, xb, ddof=1)[0, 1] / (sa * sb))
            corr[a, b] = corr[b, a] = min(1.0, max(-1.0, r))
    return SummaryStats(cols, mean, median, maximum, minimum, sd, corr, n_complete)
