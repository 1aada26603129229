"""
Catalog of essential groups G acting on E1 x E2 x E3 and the twist/shift symbol grammar
"""
import logging
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple

import pyparsing as pp
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from errors import CatalogError

CATALOG_PATH = Path(__file__).with_name("catalog.txt")
EXPECTED_ENTRY_COUNT = 35
DELETED_LABELS = ("3-2",)

# Table 2 order of the ten cases with h21 = 3
H21_THREE_LABELS = ("0-1", "0-4", "1-1", "1-5", "1-11", "2-1", "2-9", "2-12", "3-5", "4-1")


class FactorBase(str, Enum):
    ZERO = "0"
    ONE = "1"
    TAU = "t"
    ONE_TAU = "1t"


class Sign(str, Enum):
    PLUS = "+"
    MINUS = "-"


class Pi1Label(str, Enum):
    ZERO = "0"
    A = "A"
    B = "B"
    C = "C"
    D = "D"


# (x, tau) half-period bits of each base symbol
HALF_PERIOD_BITS = {
    FactorBase.ZERO: (0, 0),
    FactorBase.ONE: (1, 0),
    FactorBase.TAU: (0, 1),
    FactorBase.ONE_TAU: (1, 1),
}
BASE_FROM_BITS = {bits: base for base, bits in HALF_PERIOD_BITS.items()}


class FactorSymbol(BaseModel):
    """One entry of a twist or shift triple, e.g. "t-" or "1"."""
    model_config = ConfigDict(frozen=True)

    base: FactorBase = Field(..., description="Half period 0, 1/2, tau/2 or (1+tau)/2")
    sign: Optional[Sign] = Field(None, description="Sign of z on this factor; absent for shifts")

    @property
    def shift(self) -> Tuple[int, int]:
        return HALF_PERIOD_BITS[self.base]

    def render(self) -> str:
        return self.base.value + (self.sign.value if self.sign is not None else "")


Triple = Tuple[FactorSymbol, FactorSymbol, FactorSymbol]


def render_triple(triple) -> str:
    return "(" + ",".join(symbol.render() for symbol in triple) + ")"


class CatalogEntry(BaseModel):
    """One row of the case table: generators plus the expected (golden) invariants."""
    model_config = ConfigDict(frozen=True)

    label: str = Field(..., description="Case label r-n")
    rank: int = Field(..., ge=0, le=4, description="Number r of shift generators")
    index: int = Field(..., ge=1, description="Running index n within rank r")
    twist_gens: Tuple[Triple, ...] = Field(..., description="The two twist generators")
    shift_gens: Tuple[Triple, ...] = Field(..., description="The r pure shift generators")
    expected_hodge: Tuple[int, int] = Field(..., description="Golden (h11, h21)")
    expected_pi1: Pi1Label = Field(..., description="Golden fundamental group label")

    @model_validator(mode="after")
    def check_generators(self):
        if len(self.twist_gens) != 2:
            raise ValueError(f"expected 2 twist generators, found {len(self.twist_gens)}")
        for triple in self.twist_gens:
            if any(symbol.sign is None for symbol in triple):
                raise ValueError(f"twist {render_triple(triple)} needs a sign on every factor")
            minus = sum(1 for symbol in triple if symbol.sign == Sign.MINUS)
            if minus % 2:
                raise ValueError(f"odd number of minus signs in twist {render_triple(triple)}")
        for triple in self.shift_gens:
            if any(symbol.sign is not None for symbol in triple):
                raise ValueError(f"shift {render_triple(triple)} must not carry signs")
        if len(self.shift_gens) != self.rank:
            raise ValueError(
                f"label {self.label} declares r={self.rank} but has {len(self.shift_gens)} shift generators")
        if min(self.expected_hodge) < 0:
            raise ValueError(f"negative Hodge number {self.expected_hodge}")
        return self

    @property
    def h11(self) -> int:
        return self.expected_hodge[0]

    @property
    def h21(self) -> int:
        return self.expected_hodge[1]

    def render(self) -> str:
        twists = " ".join(render_triple(t) for t in self.twist_gens)
        shifts = ";".join(render_triple(t) for t in self.shift_gens) or "-"
        return (f"{self.label} | {twists} | {shifts} | "
                f"{self.expected_hodge[0]} {self.expected_hodge[1]} | {self.expected_pi1.value}")


# --- Grammar ---

_BASE = pp.Regex(r"[0-9A-Za-z]+")("base")
_SIGN = pp.one_of("+ -")("sign")
_FACTOR = pp.Group(_BASE + pp.Opt(_SIGN))
_TRIPLE = pp.Group(
    pp.Suppress("(") + _FACTOR + pp.Suppress(",") + _FACTOR + pp.Suppress(",") + _FACTOR + pp.Suppress(")")
)
_BAR = pp.Suppress("|")
_LABEL = pp.Regex(r"\d+-\d+")("label")
_TWISTS = pp.Group(pp.OneOrMore(_TRIPLE))("twists")
_SHIFTS = pp.Group(pp.Suppress("-") | pp.DelimitedList(_TRIPLE, delim=";"))("shifts")
_HODGE = pp.Group(pp.Word(pp.nums) + pp.Word(pp.nums))("hodge")
_PI1 = pp.one_of("0 A B C D")("pi1")
LINE_GRAMMAR = _LABEL + _BAR + _TWISTS + _BAR + _SHIFTS + _BAR + _HODGE + _BAR + _PI1 + pp.StringEnd()

# A standalone triple, used for rendering/parsing group elements
TRIPLE_GRAMMAR = _TRIPLE + pp.StringEnd()


def _symbol_from_tokens(tokens) -> FactorSymbol:
    base = tokens["base"]
    if base not in {b.value for b in FactorBase}:
        raise CatalogError(f"malformed symbol '{base}{tokens.get('sign', '')}': base must be one of 0, 1, t, 1t")
    sign = tokens.get("sign")
    return FactorSymbol(base=FactorBase(base), sign=Sign(sign) if sign else None)


def _triple_from_tokens(tokens) -> Triple:
    return tuple(_symbol_from_tokens(factor) for factor in tokens)


def parse_triple(text: str) -> Triple:
    """
    Parse a single symbol triple such as "(t-,0+,1-)".

    Args:
        text (str): Triple in catalog notation

    Returns:
        tuple: Three FactorSymbol values
    """
    try:
        tokens = TRIPLE_GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseException as e:
        raise CatalogError(f"cannot parse triple '{text}': {e.msg} at column {e.col}")
    return _triple_from_tokens(tokens[0])


def parse_case_notation(text: str, line_number: Optional[int] = None) -> CatalogEntry:
    """
    Parse one catalog line into a validated CatalogEntry.

    Args:
        text (str): Line of the form "label | twist1 twist2 | shifts or - | h11 h21 | pi1"
        line_number (int): Line number used in error messages

    Returns:
        CatalogEntry: The validated entry
    """
    try:
        tokens = LINE_GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseException as e:
        raise CatalogError(f"cannot parse '{text.strip()}': {e.msg} at column {e.col}", line_number)

    label = tokens["label"]
    rank, index = (int(part) for part in label.split("-"))
    try:
        twists = tuple(_triple_from_tokens(t) for t in tokens["twists"])
        shifts = tuple(_triple_from_tokens(t) for t in tokens["shifts"])
    except CatalogError as e:
        raise CatalogError(str(e), line_number)

    try:
        return CatalogEntry(
            label=label,
            rank=rank,
            index=index,
            twist_gens=twists,
            shift_gens=shifts,
            expected_hodge=(int(tokens["hodge"][0]), int(tokens["hodge"][1])),
            expected_pi1=Pi1Label(tokens["pi1"]),
        )
    except ValidationError as e:
        message = e.errors()[0]["msg"].removeprefix("Value error, ")
        raise CatalogError(message, line_number)


def canonical(text: str) -> str:
    """Canonical spelling of a catalog line (normalized whitespace)."""
    return parse_case_notation(text).render()


def parse_catalog(text: str):
    """
    Parse a whole catalog document.

    Args:
        text (str): Catalog file contents

    Returns:
        list: CatalogEntry values in document order
    """
    entries = []
    seen = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        entry = parse_case_notation(line, line_number)
        if entry.label in DELETED_LABELS:
            raise CatalogError(f"deleted case present: ({entry.label})", line_number)
        if entry.label in seen:
            raise CatalogError(f"duplicate label {entry.label} (first on line {seen[entry.label]})", line_number)
        seen[entry.label] = line_number
        entries.append(entry)

    if len(entries) != EXPECTED_ENTRY_COUNT:
        raise CatalogError(f"entry count {len(entries)} ≠ {EXPECTED_ENTRY_COUNT}")
    return entries


def load_catalog(path=None):
    """
    Load the shipped catalog (or another catalog file).

    Args:
        path (str | Path): Catalog file, defaults to catalog.txt next to this module

    Returns:
        list: The 35 CatalogEntry values in table order
    """
    path = Path(path) if path is not None else CATALOG_PATH
    entries = parse_catalog(path.read_text(encoding="utf-8"))
    logging.info(f"Loaded {len(entries)} catalog entries from {path.name}")
    return entries


def entries_by_label(entries):
    return {entry.label: entry for entry in entries}


def relabel_factors(entry: CatalogEntry, perm) -> CatalogEntry:
    """
    Move the data of factor i to factor perm[i] in every generator.

    Args:
        entry (CatalogEntry): Entry to relabel
        perm (tuple): Permutation of (0, 1, 2)

    Returns:
        CatalogEntry: Entry describing the same quotient with factors renamed
    """
    def move(triple):
        moved = [None, None, None]
        for i, symbol in enumerate(triple):
            moved[perm[i]] = symbol
        return tuple(moved)

    return entry.model_copy(update={
        "twist_gens": tuple(move(t) for t in entry.twist_gens),
        "shift_gens": tuple(move(t) for t in entry.shift_gens),
    })
