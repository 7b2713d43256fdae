"""Type-specific processing of recognized string columns.

Each processor takes a column whose winning kind is already known and
returns one or more output columns together with an encoding directive:
``numeric`` outputs are ready as-is, ``nominal`` outputs go to the
categorical encoders, ``ordinal`` is assigned later by the statistical
type predictor. Cells a processor cannot interpret become missing and are
noted, never fatal.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from importlib import resources

from . import geo as geomod
from .machines import COMPARATIVE_WORDS, MONTH_NAMES
from .table import Column, cell_text, is_number

log = logging.getLogger("stringkit")

NUMERIC = "numeric"
NOMINAL = "nominal"
ORDINAL = "ordinal"


class OutOfRangeError(ValueError):
    pass


@dataclass
class ProcessedColumns:
    """Outputs of one processor plus per-output encoding directives."""

    outputs: list
    directives: list
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if not self.outputs:
            raise ValueError("a processor must emit at least one column")
        if len(self.outputs) != len(self.directives):
            raise ValueError("one directive per output column required")

    def note(self, message):
        self.notes.append(message)


def passthrough(column: Column, directive: str = NOMINAL) -> ProcessedColumns:
    return ProcessedColumns([column], [directive])


# ---------------------------------------------------------------------------
# Coordinates


def dms_to_decimal(degrees: float, minutes: float, seconds: float,
                   direction: str) -> float:
    """Degrees-minutes-seconds plus a cardinal direction to signed decimal
    degrees (south and west are negative)."""
    if direction not in ("N", "E", "S", "W"):
        raise OutOfRangeError(f"bad cardinal direction: {direction!r}")
    if not 0 <= minutes < 60:
        raise OutOfRangeError(f"minutes out of range: {minutes}")
    if not 0 <= seconds < 60:
        raise OutOfRangeError(f"seconds out of range: {seconds}")
    if not 0 <= degrees <= 180:
        raise OutOfRangeError(f"degrees out of range: {degrees}")
    value = degrees + minutes / 60.0 + seconds / 3600.0
    if direction in ("S", "W"):
        value = -value
    if abs(value) > 180:
        raise OutOfRangeError(f"coordinate exceeds 180 degrees: {value}")
    return value


_DIR_FIRST = re.compile(
    r"^([NESW])(\d{1,2})[.:](\d{1,2})[.:](\d{1,2}(?:\.\d+)?)$")
_DMS_FORM = re.compile(
    "^(\\d{1,2})°(\\d{1,2})'(\\d{1,2}(?:\\.\\d+)?)\"([NESW])$")


def _parse_coordinate_part(part: str):
    m = _DIR_FIRST.match(part)
    if m:
        direction, d, mn, sc = m.group(1), m.group(2), m.group(3), m.group(4)
    else:
        m = _DMS_FORM.match(part)
        if not m:
            return None
        d, mn, sc, direction = m.group(1), m.group(2), m.group(3), m.group(4)
    try:
        value = dms_to_decimal(float(d), float(mn), float(sc), direction)
    except OutOfRangeError:
        return None
    axis = "lat" if direction in ("N", "S") else "lon"
    return axis, value


def process_coordinate(column: Column,
                       geo_table: geomod.GeoTable | None = None) -> ProcessedColumns:
    """Split coordinate strings into decimal latitude/longitude columns;
    when both axes are present, add ECEF and nearest postal/country data."""
    lats = [None] * len(column)
    lons = [None] * len(column)
    notes = []
    for i, cell in enumerate(column.cells):
        if cell is None:
            continue
        parsed = []
        for part in cell_text(cell).split(" "):
            if not part:
                continue
            got = _parse_coordinate_part(part)
            if got is None:
                parsed = None
                break
            parsed.append(got)
        if not parsed:
            notes.append(f"{column.name}[{i}]: unparseable coordinate, blanked")
            continue
        for axis, value in parsed:
            if axis == "lat" and lats[i] is None:
                lats[i] = value
            elif axis == "lon" and lons[i] is None:
                lons[i] = value

    outputs, directives = [], []
    has_lat = any(v is not None for v in lats)
    has_lon = any(v is not None for v in lons)
    if has_lat:
        outputs.append(Column(f"{column.name}_lat", tuple(lats)))
        directives.append(NUMERIC)
    if has_lon:
        outputs.append(Column(f"{column.name}_lon", tuple(lons)))
        directives.append(NUMERIC)
    if not outputs:
        outputs.append(Column(f"{column.name}_lat", tuple(lats)))
        directives.append(NUMERIC)

    if has_lat and has_lon:
        ex, ey, ez = [None] * len(column), [None] * len(column), [None] * len(column)
        postal = [None] * len(column)
        country = [None] * len(column)
        for i in range(len(column)):
            if lats[i] is None or lons[i] is None:
                continue
            if not (-90 <= lats[i] <= 90):
                continue
            p = geomod.latlon_to_ecef(lats[i], lons[i])
            ex[i], ey[i], ez[i] = p.x, p.y, p.z
            if geo_table is not None:
                rec = geomod.nearest_record(lats[i], lons[i], geo_table)
                postal[i] = rec.postal_code
                country[i] = rec.country_code
        for suffix, vals in (("ecef_x", ex), ("ecef_y", ey), ("ecef_z", ez)):
            outputs.append(Column(f"{column.name}_{suffix}", tuple(vals)))
            directives.append(NUMERIC)
        if geo_table is not None:
            outputs.append(Column(f"{column.name}_postal", tuple(postal)))
            directives.append(NOMINAL)
            outputs.append(Column(f"{column.name}_country", tuple(country)))
            directives.append(NOMINAL)

    result = ProcessedColumns(outputs, directives)
    result.notes.extend(notes)
    return result


# ---------------------------------------------------------------------------
# Days


_DAY_CANONICAL = ("Mo", "Tu", "We", "Th", "Fr", "Sa", "Su")


def process_day(column: Column) -> ProcessedColumns:
    """Reduce day-of-week names to their canonical two-letter prefix."""
    out = []
    result_notes = []
    for i, cell in enumerate(column.cells):
        if cell is None:
            out.append(None)
            continue
        prefix = cell_text(cell)[:2].capitalize()
        if prefix in _DAY_CANONICAL:
            out.append(prefix)
        else:
            out.append(None)
            result_notes.append(f"{column.name}[{i}]: not a day name, blanked")
    pc = ProcessedColumns([Column(column.name, tuple(out))], [NOMINAL])
    pc.notes.extend(result_notes)
    return pc


# ---------------------------------------------------------------------------
# Affix stripping (e-mails, filepaths, URLs)


_NON_ALNUM = re.compile(r"[^A-Za-z0-9]+")


def _common_prefix(values):
    first = min(values)
    last = max(values)
    i = 0
    while i < len(first) and i < len(last) and first[i] == last[i]:
        i += 1
    return first[:i]


def _common_suffix(values):
    rev = [v[::-1] for v in values]
    return _common_prefix(rev)[::-1]


def strip_common_affixes(column: Column, strip_prefix: bool = True,
                         strip_suffix: bool = True) -> Column:
    """Remove the longest common prefix/suffix shared by every entry, then
    drop all non-alphanumeric characters.

    Affix stripping is skipped when fewer than two distinct values exist or
    when it would empty every entry; character cleanup always applies.
    """
    texts = {i: cell_text(c) for i, c in enumerate(column.cells) if c is not None}
    values = list(texts.values())
    distinct = set(values)

    stripped = dict(texts)
    if len(distinct) >= 2:
        work = dict(texts)
        if strip_prefix:
            p = _common_prefix(list(distinct))
            if p:
                work = {i: v[len(p):] for i, v in work.items()}
        if strip_suffix:
            s = _common_suffix(list(set(work.values())) or [""])
            if s and len(set(work.values())) >= 2:
                work = {i: v[:len(v) - len(s)] for i, v in work.items()}
        if any(v for v in work.values()):
            stripped = work

    cells = list(column.cells)
    for i, v in stripped.items():
        cleaned = _NON_ALNUM.sub("", v)
        cells[i] = cleaned if cleaned else None
    return Column(column.name, tuple(cells))


def process_email(column: Column) -> ProcessedColumns:
    return ProcessedColumns(
        [strip_common_affixes(column, strip_prefix=False, strip_suffix=True)],
        [NOMINAL])


def process_filepath(column: Column) -> ProcessedColumns:
    return ProcessedColumns(
        [strip_common_affixes(column, strip_prefix=True, strip_suffix=True)],
        [NOMINAL])


def process_url(column: Column) -> ProcessedColumns:
    return ProcessedColumns(
        [strip_common_affixes(column, strip_prefix=True, strip_suffix=True)],
        [NOMINAL])


# ---------------------------------------------------------------------------
# Months


_MONTH_BY_PREFIX = {}
for _idx, _name in enumerate(MONTH_NAMES, start=1):
    for _ln in range(3, len(_name) + 1):
        _MONTH_BY_PREFIX[_name[:_ln]] = _idx

#: Two-digit years at or below this map to 2000+NN, above to 1900+NN.
YEAR_PIVOT = 30


def _expand_two_digit_year(nn: int) -> int:
    return 2000 + nn if nn <= YEAR_PIVOT else 1900 + nn


def parse_month_entry(text: str):
    """Split a month-style entry into (year, month, day), zero-filling the
    absent components; None when the entry cannot be read."""
    tokens = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    month = day = year = 0
    seen_month = False
    for tok in tokens:
        low = tok.lower()
        if not seen_month and low.rstrip(".") in _MONTH_BY_PREFIX:
            month = _MONTH_BY_PREFIX[low.rstrip(".")]
            seen_month = True
            continue
        if tok.startswith("'") and tok[1:].isdigit() and len(tok) == 3:
            if year:
                return None
            year = _expand_two_digit_year(int(tok[1:]))
            continue
        if tok.isdigit():
            if len(tok) <= 2 and not day and not year:
                day = int(tok)
            elif len(tok) <= 4 and not year:
                year = int(tok)
            else:
                return None
            continue
        return None
    if not seen_month:
        return None
    return year, month, day


def process_month(column: Column) -> ProcessedColumns:
    """Convert month entries to a single yyyymmdd integer column."""
    out = []
    notes = []
    for i, cell in enumerate(column.cells):
        if cell is None:
            out.append(None)
            continue
        parsed = parse_month_entry(cell_text(cell))
        if parsed is None:
            out.append(None)
            notes.append(f"{column.name}[{i}]: unparseable month entry, blanked")
            continue
        year, month, day = parsed
        out.append(year * 10000 + month * 100 + day)
    pc = ProcessedColumns([Column(column.name, tuple(out))], [NUMERIC])
    pc.notes.extend(notes)
    return pc


# ---------------------------------------------------------------------------
# Numerical strings


_NUM = r"\d+(?:\.\d+)?"
_RANGE_RE = re.compile(
    rf"^({_NUM})\s*(?:[-+_/:;&']|\s+to\s+|\s+)\s*({_NUM})$", re.IGNORECASE)
_NUM_RE = re.compile(_NUM)
_WORDS_RE = re.compile(
    "|".join(re.escape(w) for w in COMPARATIVE_WORDS), re.IGNORECASE)

#: Share of entries that must look like ranges for the column to take the
#: range branch.
RANGE_MAJORITY = 0.5


def process_numerical(column: Column) -> ProcessedColumns:
    """Turn numerical strings into numbers.

    Columns that are mostly ranges map each range to the mean of its
    endpoints. Otherwise comparative words and special characters are
    dropped and every remaining number becomes its own output column.
    """
    texts = {i: cell_text(c) for i, c in enumerate(column.cells) if c is not None}
    matches = {i: _RANGE_RE.match(v) for i, v in texts.items()}
    n_range = sum(1 for m in matches.values() if m)
    notes = []

    if texts and n_range / len(texts) >= RANGE_MAJORITY:
        out = [None] * len(column)
        for i, m in matches.items():
            if m:
                lo, hi = float(m.group(1)), float(m.group(2))
                out[i] = (lo + hi) / 2.0
            else:
                notes.append(f"{column.name}[{i}]: not a range, blanked")
        pc = ProcessedColumns([Column(column.name, tuple(out))], [NUMERIC])
        pc.notes.extend(notes)
        return pc

    per_row = {}
    width = 1
    for i, v in texts.items():
        cleaned = _WORDS_RE.sub(" ", v)
        nums = [float(x) for x in _NUM_RE.findall(cleaned)]
        per_row[i] = nums
        width = max(width, len(nums))
        if not nums:
            notes.append(f"{column.name}[{i}]: no numbers found, blanked")
    outputs = []
    for j in range(width):
        name = column.name if width == 1 else f"{column.name}_{j + 1}"
        cells = [None] * len(column)
        for i, nums in per_row.items():
            if j < len(nums):
                cells[i] = nums[j]
        outputs.append(Column(name, tuple(cells)))
    pc = ProcessedColumns(outputs, [NUMERIC] * len(outputs))
    pc.notes.extend(notes)
    return pc


# ---------------------------------------------------------------------------
# Sentences


NOUN_SUFFIXES = ("tion", "ment", "ness", "ity", "er", "or", "ism", "ist",
                 "ma", "s")

_WORD_RE = re.compile(r"[A-Za-z]+(?:'[A-Za-z]+)?")


def _load_wordlist(filename):
    path = resources.files("stringkit").joinpath(f"data/{filename}")
    return frozenset(w.strip().lower()
                     for w in path.read_text(encoding="utf-8").splitlines()
                     if w.strip())


class NounFilter:
    """Deterministic noun detector: lexicon lookup plus a suffix heuristic
    for unknown tokens."""

    def __init__(self, nouns=None, stopwords=None, suffixes=NOUN_SUFFIXES):
        self.nouns = frozenset(nouns) if nouns is not None else _load_wordlist("nouns.txt")
        self.stopwords = (frozenset(stopwords) if stopwords is not None
                          else _load_wordlist("stopwords.txt"))
        self.suffixes = tuple(suffixes)

    @classmethod
    def from_paths(cls, nouns_path=None, stopwords_path=None) -> "NounFilter":
        def read(path):
            if path is None:
                return None
            with open(path, encoding="utf-8") as fh:
                return frozenset(w.strip().lower() for w in fh if w.strip())
        return cls(nouns=read(nouns_path), stopwords=read(stopwords_path))

    def is_noun(self, token: str) -> bool:
        t = token.lower()
        if t in self.nouns:
            return True
        if t in self.stopwords:
            return False
        return any(t.endswith(sfx) for sfx in self.suffixes)

    def is_stopword(self, token: str) -> bool:
        return token.lower() in self.stopwords


_default_noun_filter = None


def default_noun_filter() -> NounFilter:
    global _default_noun_filter
    if _default_noun_filter is None:
        _default_noun_filter = NounFilter()
    return _default_noun_filter


def process_sentence(column: Column,
                     noun_filter: NounFilter | None = None) -> ProcessedColumns:
    """Reduce each sentence to its nouns, joined by single spaces."""
    nf = noun_filter or default_noun_filter()
    out = []
    notes = []
    for i, cell in enumerate(column.cells):
        if cell is None:
            out.append(None)
            continue
        tokens = _WORD_RE.findall(cell_text(cell))
        kept = [t for t in tokens if nf.is_noun(t)]
        if kept:
            out.append(" ".join(kept))
            continue
        fallback = next((t for t in tokens if not nf.is_stopword(t)),
                        tokens[0] if tokens else None)
        out.append(fallback)
        notes.append(f"{column.name}[{i}]: no nouns found, kept {fallback!r}")
    pc = ProcessedColumns([Column(column.name, tuple(out))], [NOMINAL])
    pc.notes.extend(notes)
    return pc


# ---------------------------------------------------------------------------
# Zip codes


def process_zip(column: Column,
                geo_table: geomod.GeoTable | None = None) -> ProcessedColumns:
    """Enrich postal codes with latitude/longitude, country code and ECEF
    coordinates from the offline table; the code itself stays nominal."""
    if geo_table is None:
        pc = passthrough(column, NOMINAL)
        pc.note(f"{column.name}: no geo table available, kept as nominal")
        return pc

    n = len(column)
    records = [None] * n
    # first pass resolves unambiguous codes and tallies country frequencies
    priority = {}
    pending = []
    for i, cell in enumerate(column.cells):
        if cell is None:
            continue
        candidates = geo_table.candidates(cell_text(cell))
        if len(candidates) == 1:
            records[i] = candidates[0]
            cc = candidates[0].country_code
            priority[cc] = priority.get(cc, 0) + 1
        elif candidates:
            pending.append(i)
    for i in pending:
        records[i] = zip_lookup_with_priority(column.cells[i], geo_table, priority)

    misses = sum(1 for i, c in enumerate(column.cells)
                 if c is not None and records[i] is None)
    lat = tuple(r.latitude if r else None for r in records)
    lon = tuple(r.longitude if r else None for r in records)
    country = tuple(r.country_code if r else None for r in records)
    ecef = [geomod.latlon_to_ecef(r.latitude, r.longitude) if r else None
            for r in records]

    outputs = [
        Column(column.name, column.cells),
        Column(f"{column.name}_lat", lat),
        Column(f"{column.name}_lon", lon),
        Column(f"{column.name}_ecef_x", tuple(p.x if p else None for p in ecef)),
        Column(f"{column.name}_ecef_y", tuple(p.y if p else None for p in ecef)),
        Column(f"{column.name}_ecef_z", tuple(p.z if p else None for p in ecef)),
        Column(f"{column.name}_country", country),
    ]
    directives = [NOMINAL, NUMERIC, NUMERIC, NUMERIC, NUMERIC, NUMERIC, NOMINAL]
    pc = ProcessedColumns(outputs, directives)
    if misses:
        pc.note(f"{column.name}: {misses} postal code(s) not in the geo table")
    return pc


def zip_lookup_with_priority(cell, geo_table, priority):
    return geomod.zip_lookup(cell_text(cell), geo_table, priority)
