"""Shared fixtures and helpers for the test suite."""

import csv
from datetime import date

import numpy as np
import pytest

from ratingkit import synth
from ratingkit.data import CSV_COLUMNS, NUMERIC_COLUMNS, Observation


def make_observation(**overrides):
    """A complete, internally consistent observation for unit tests."""
    numbers = {
        "mkt_cap_musd": 10000.0,
        "price": 25.0,
        "eps": 2.0,
        "net_earnings": 8.0,
        "avg_assets": 100.0,
        "operating_revenue": 180.0,
        "receipts": 1000.0,
        "debt": 50.0,
        "ebitda": 120.0,
        "cash_flow": 220.0,
        "lt_debt": 30.0,
        "total_capital": 90.0,
        "interest_expense": 10.0,
        "st_assets": 40.0,
        "st_liabilities": 40.0,
        "fixed_assets": 80.0,
        "total_assets": 200.0,
        "beta": 1.1,
        "volatility": 0.4,
        "inflation": 3.0,
        "gdp_growth": 2.5,
        "cpi_corruption": 6.0,
    }
    numbers.update(overrides.pop("numbers", {}))
    base = dict(
        company_id="TEST",
        as_of=date(2008, 3, 31),
        sp_rating="BB",
        moodys_rating="Ba2",
        numbers=numbers,
        sovereign_rating="BBB",
        developed=0,
        russia=1,
        industry="oil_gas",
    )
    base.update(overrides)
    return Observation(**base)


def write_dataset_csv(path, rows):
    """Write rows (dicts keyed by CSV column, blanks allowed) as dataset CSV."""
    defaults = {
        "company_id": "X", "as_of": "2008-03-31", "sp_rating": "BB",
        "moodys_rating": "", "sovereign_rating": "BBB",
        "developed": "0", "russia": "0", "industry": "oil_gas",
    }
    obs = make_observation()
    for col in NUMERIC_COLUMNS:
        defaults[col] = repr(obs.numbers[col])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            full = dict(defaults)
            full.update(row)
            writer.writerow(full)
    return path


@pytest.fixture(scope="session")
def synth_dataset():
    """Moderate synthetic dataset shared across tests (seed-fixed)."""
    config = synth.GeneratorConfig(n=2000, seed=11)
    observations, true_model = synth.generate_dataset(config)
    x = synth.design_rows(observations, config.model_spec)
    codes = np.array(
        [synth.scales.encode(o.sp_rating, config.scale_kind) for o in observations]
    )
    return config, observations, true_model, x, codes
