"""Model specifications: which regressors enter a rating model.

A spec file is plain text, one regressor per line, ``source[:transform]``,
with ``#`` comments. Named presets reproduce the variable sets of the
published rating-class, gradation/mixed-scale and agency-disagreement
models so any conforming dataset can be run through the same structures.

Note on capitalization: the ``mkt_cap`` source *is* the base-10 logarithm
of market capitalization in mln USD (capitalization never enters a model
in levels), so ``mkt_cap:square`` means the squared log.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SpecParseError, UnknownSource, UnknownTransform

TRANSFORMS = ("identity", "log10", "square")

# indicator sources (see data.derive_indicators for unit conventions)
INDICATOR_SOURCES = (
    "mkt_cap", "price_earnings", "roa", "operating_margin", "debt_ebitda",
    "cash_flow_sales", "debt_assets", "lt_debt_capital", "ebitda_interest",
    "current_ratio", "fix_assets_total_assets", "price_cash_flow",
    "beta", "volatility",
)
MACRO_SOURCES = ("inflation", "gdp_growth", "cpi_corruption")
INDUSTRY_DUMMIES = ("telecom", "oil_gas", "metal_mining", "consumer", "utilities")
# manufacturing_chemicals is the omitted baseline industry
OTHER_DUMMIES = ("developed", "russia")

ALL_SOURCES = INDICATOR_SOURCES + MACRO_SOURCES + INDUSTRY_DUMMIES + OTHER_DUMMIES


@dataclass(frozen=True)
class Regressor:
    source: str
    transform: str = "identity"

    def __post_init__(self):
        if self.source not in ALL_SOURCES:
            raise UnknownSource(self.source)
        if self.transform not in TRANSFORMS:
            raise UnknownTransform(self.transform)

    @property
    def column_name(self) -> str:
        if self.transform == "identity":
            return self.source
        if self.transform == "square":
            return f"{self.source}^2"
        return f"{self.transform}({self.source})"


@dataclass(frozen=True)
class ModelSpec:
    name: str
    regressors: tuple

    @property
    def column_names(self):
        return [r.column_name for r in self.regressors]


def _spec(name, entries):
    regs = []
    for e in entries:
        source, _, transform = e.partition(":")
        regs.append(Regressor(source, transform or "identity"))
    return ModelSpec(name, tuple(regs))


_BASE_SP = (
    "mkt_cap", "roa", "ebitda_interest", "lt_debt_capital", "debt_ebitda",
    "current_ratio",
    "telecom", "metal_mining", "oil_gas", "consumer", "utilities",
    "inflation", "gdp_growth", "developed",
)

PRESETS = {
    # rating-class models
    "base_sp": _spec("base_sp", _BASE_SP),
    "quadratic_sp": _spec("quadratic_sp", (
        "mkt_cap", "mkt_cap:square", "roa", "roa:square",
        "ebitda_interest", "ebitda_interest:square",
        "lt_debt_capital", "debt_ebitda",
        "telecom", "metal_mining", "oil_gas", "consumer", "utilities",
        "inflation", "gdp_growth", "developed",
    )),
    "market_sp": _spec("market_sp", (
        "mkt_cap", "ebitda_interest", "volatility", "price_cash_flow",
        "telecom", "metal_mining", "oil_gas", "consumer", "utilities",
        "inflation", "gdp_growth",
    )),
    "base_moodys": _spec("base_moodys", (
        "mkt_cap", "roa", "ebitda_interest", "lt_debt_capital",
        "cash_flow_sales", "current_ratio",
        "telecom", "metal_mining", "oil_gas", "consumer", "utilities",
        "inflation", "gdp_growth", "developed",
    )),
    # gradation / mixed-scale models
    "mixed_sp": _spec("mixed_sp", (
        "mkt_cap", "ebitda_interest", "roa", "lt_debt_capital",
        "inflation", "gdp_growth", "oil_gas", "utilities", "developed",
    )),
    "mixed_market_sp": _spec("mixed_market_sp", (
        "volatility", "price_cash_flow", "mkt_cap", "ebitda_interest", "roa",
        "inflation", "gdp_growth", "metal_mining", "oil_gas", "utilities",
    )),
    "mixed_moodys": _spec("mixed_moodys", (
        "mkt_cap", "ebitda_interest", "roa", "lt_debt_capital",
        "inflation", "gdp_growth", "oil_gas", "utilities", "developed",
    )),
    # two-agency disagreement, binary split model
    "split_1s": _spec("split_1s", ("volatility", "developed")),
}


def parse_model_spec_text(text: str, name: str = "custom") -> ModelSpec:
    """Parse spec text: one ``source[:transform]`` per line, # comments."""
    regs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        source, _, transform = line.partition(":")
        source = source.strip()
        transform = transform.strip() or "identity"
        try:
            regs.append(Regressor(source, transform))
        except (UnknownSource, UnknownTransform) as exc:
            raise SpecParseError(lineno, str(exc)) from exc
    if not regs:
        raise SpecParseError(0, "spec contains no regressors")
    if len(set(regs)) != len(regs):
        raise SpecParseError(0, "duplicate regressor in spec")
    return ModelSpec(name, tuple(regs))


def load_model_spec(path_or_preset: str) -> ModelSpec:
    """Resolve a preset name or read a spec file."""
    if path_or_preset in PRESETS:
        return PRESETS[path_or_preset]
    with open(path_or_preset, "r", encoding="utf-8") as fh:
        return parse_model_spec_text(fh.read(), name=path_or_preset)
