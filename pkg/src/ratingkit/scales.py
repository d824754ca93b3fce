"""Rating scales: agency grade ladders and their numeric encodings.

Three numeric scales are supported, all with "lower code = better rating":

* ``classes8``     -- 8 letter classes (AAA .. CC-and-below)
* ``gradations18`` -- 18 notches (AAA=1 .. CCC-and-below=18)
* ``mixed12``      -- 12 levels; AAA, the AA family and everything from B+
  down are collapsed, while A .. BB keep their +/- modifiers

Moody's symbols are always cross-mapped to their S&P equivalents before
encoding, so a single set of bucket tables serves both agencies. All
tables are immutable module constants; every function here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import CodeOutOfRange, UnknownGrade


class Agency(str, Enum):
    SP = "sp"
    MOODYS = "moodys"


class ScaleKind(str, Enum):
    CLASSES8 = "classes8"
    GRADATIONS18 = "gradations18"
    MIXED12 = "mixed12"


# Long-term ladders, best to worst. The S&P ladder carries a single
# bottom D notch; Moody's 21-notch ladder aligns with the S&P ladder
# rank-for-rank over the first 21 entries.
SP_LADDER = (
    "AAA", "AA+", "AA", "AA-", "A+", "A", "A-",
    "BBB+", "BBB", "BBB-", "BB+", "BB", "BB-",
    "B+", "B", "B-", "CCC+", "CCC", "CCC-", "CC", "C", "D",
)
MOODYS_LADDER = (
    "Aaa", "Aa1", "Aa2", "Aa3", "A1", "A2", "A3",
    "Baa1", "Baa2", "Baa3", "Ba1", "Ba2", "Ba3",
    "B1", "B2", "B3", "Caa1", "Caa2", "Caa3", "Ca", "C",
)

MOODYS_TO_SP = dict(zip(MOODYS_LADDER, SP_LADDER))
SP_TO_MOODYS = dict(zip(SP_LADDER, MOODYS_LADDER))

_SP_RANK = {g: i for i, g in enumerate(SP_LADDER)}


@dataclass(frozen=True)
class RatingGrade:
    """A canonical agency grade symbol."""

    agency: Agency
    symbol: str

    def __post_init__(self):
        ladder = SP_LADDER if self.agency == Agency.SP else MOODYS_LADDER
        if self.symbol not in ladder:
            raise UnknownGrade(self.agency.value, self.symbol)


@dataclass(frozen=True)
class Bucket:
    code: int
    representative: str
    members: tuple


def _buckets(spans):
    """spans: list of (representative, first_member, last_member)."""
    out = []
    for code, (rep, first, last) in enumerate(spans, start=1):
        members = SP_LADDER[_SP_RANK[first]:_SP_RANK[last] + 1]
        out.append(Bucket(code, rep, members))
    return tuple(out)


CLASSES8 = _buckets([
    ("AAA", "AAA", "AAA"),
    ("AA", "AA+", "AA-"),
    ("A", "A+", "A-"),
    ("BBB", "BBB+", "BBB-"),
    ("BB", "BB+", "BB-"),
    ("B", "B+", "B-"),
    ("CCC", "CCC+", "CCC-"),
    ("CC-and-below", "CC", "D"),
])

GRADATIONS18 = _buckets(
    [(g, g, g) for g in SP_LADDER[:17]] + [("CCC-and-below", "CCC", "D")]
)

MIXED12 = _buckets([
    ("AAA", "AAA", "AAA"),
    ("AA", "AA+", "AA-"),
    ("A+", "A+", "A+"),
    ("A", "A", "A"),
    ("A-", "A-", "A-"),
    ("BBB+", "BBB+", "BBB+"),
    ("BBB", "BBB", "BBB"),
    ("BBB-", "BBB-", "BBB-"),
    ("BB+", "BB+", "BB+"),
    ("BB", "BB", "BB"),
    ("BB-", "BB-", "BB-"),
    ("B-and-below", "B+", "D"),
])

SCALE_TABLES = {
    ScaleKind.CLASSES8: CLASSES8,
    ScaleKind.GRADATIONS18: GRADATIONS18,
    ScaleKind.MIXED12: MIXED12,
}

# representative labels double as encodable aliases so that
# encode(decode(k)) == k holds for the collapsed bottom buckets
_ALIAS_CODE = {
    kind: {b.representative: b.code for b in table}
    for kind, table in SCALE_TABLES.items()
}
_SYMBOL_CODE = {
    kind: {sym: b.code for b in table for sym in b.members}
    for kind, table in SCALE_TABLES.items()
}


def n_codes(kind: ScaleKind) -> int:
    """Number of codes K on the given scale (8, 18 or 12)."""
    return len(SCALE_TABLES[kind])


def crossmap_moodys_to_sp(symbol: str) -> str:
    """Rank-preserving Moody's -> S&P map over the 21-notch ladder."""
    try:
        return MOODYS_TO_SP[symbol]
    except KeyError:
        raise UnknownGrade("moodys", symbol) from None


def encode(symbol: str, kind: ScaleKind, agency: Agency = Agency.SP) -> int:
    """Numeric code of a grade on the given scale (1 = best).

    Moody's symbols are first cross-mapped to S&P equivalents. Bucket
    representative labels ("CC-and-below" etc.) are accepted as aliases.
    """
    kind = ScaleKind(kind)
    agency = Agency(agency)
    if agency == Agency.MOODYS:
        symbol = crossmap_moodys_to_sp(symbol)
    code = _SYMBOL_CODE[kind].get(symbol)
    if code is None:
        code = _ALIAS_CODE[kind].get(symbol)
    if code is None:
        raise UnknownGrade(agency.value, symbol)
    return code


def decode(code: int, kind: ScaleKind) -> str:
    """Representative grade string for a code on the given scale."""
    kind = ScaleKind(kind)
    table = SCALE_TABLES[kind]
    if not 1 <= code <= len(table):
        raise CodeOutOfRange(code, kind.value)
    return table[code - 1].representative


def bucket_members(code: int, kind: ScaleKind) -> tuple:
    """Canonical S&P symbols belonging to a bucket."""
    kind = ScaleKind(kind)
    table = SCALE_TABLES[kind]
    if not 1 <= code <= len(table):
        raise CodeOutOfRange(code, kind.value)
    return table[code - 1].members


def scale_table_csv() -> str:
    """All three tables as CSV: kind,code,representative,members."""
    lines = ["kind,code,representative,members"]
    for kind, table in SCALE_TABLES.items():
        for b in table:
            lines.append(
                f"{kind.value},{b.code},{b.representative},{'|'.join(b.members)}"
            )
    return "\n".join(lines) + "\n"
