"""Deterministic synthetic corpora for training and evaluation.

Three generators live here: a golden corpus of string-feature columns
built from the recognized formats (plus standard-text negatives), an
annotated ordinal/nominal column corpus for the statistical-type
classifier, and a suite of Likert-style scales with ground-truth
orderings. Everything is seeded, so repeated calls produce identical
data. ``data/stattype_corpus_sources.json`` records the public datasets
the original annotated corpus was assembled from, for offline download.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .table import Column, Table

# ---------------------------------------------------------------------------
# Shared word pools

CITIES = (
    "Amsterdam", "Rotterdam", "Utrecht", "Eindhoven", "Groningen", "Breda",
    "Nijmegen", "Tilburg", "Haarlem", "Arnhem", "London", "Manchester",
    "Bristol", "Leeds", "Liverpool", "Sheffield", "Edinburgh", "Glasgow",
    "Cardiff", "Belfast", "Toronto", "Montreal", "Vancouver", "Calgary",
    "Ottawa", "Winnipeg", "Halifax", "Quebec", "Hamilton", "Victoria",
    "Boston", "Denver", "Portland", "Austin", "Nashville", "Savannah",
    "Madrid", "Seville", "Valencia", "Porto", "Lisbon", "Milan", "Turin",
    "Naples", "Florence", "Munich", "Hamburg", "Cologne", "Dresden",
    "Vienna", "Salzburg", "Prague", "Krakow", "Warsaw", "Budapest",
)

COUNTRIES = (
    "Netherlands", "Belgium", "Germany", "France", "Spain", "Portugal",
    "Italy", "Austria", "Poland", "Hungary", "Denmark", "Sweden", "Norway",
    "Finland", "Ireland", "Iceland", "Croatia", "Greece", "Romania",
    "Bulgaria", "Canada", "Mexico", "Brazil", "Argentina", "Chile", "Peru",
    "Japan", "Korea", "Vietnam", "Thailand", "India", "Kenya", "Ghana",
    "Morocco", "Egypt", "Turkey", "Georgia", "Armenia",
)

COLORS = (
    "red", "blue", "green", "yellow", "orange", "purple", "black", "white",
    "brown", "pink", "gray", "violet", "indigo", "turquoise", "magenta",
    "maroon", "olive", "navy", "teal", "crimson", "beige", "coral",
)

PROFESSIONS = (
    "engineer", "teacher", "nurse", "carpenter", "plumber", "electrician",
    "farmer", "chef", "baker", "butcher", "tailor", "barber", "pilot",
    "sailor", "architect", "painter", "musician", "dancer", "actor",
    "journalist", "photographer", "programmer", "analyst", "chemist",
    "biologist", "geologist", "economist", "accountant", "cashier",
    "librarian", "translator", "surveyor", "mechanic", "welder", "florist",
)

PRODUCT_TYPES = (
    "sedan", "hatchback", "wagon", "coupe", "roadster", "minivan", "pickup",
    "lager", "stout", "porter", "pilsner", "saison", "tripel", "dubbel",
    "sofa", "armchair", "bookcase", "wardrobe", "dresser", "nightstand",
    "jazz", "blues", "folk", "techno", "ambient", "reggae", "bluegrass",
)

_NAME_START = ("An", "Bel", "Car", "Dor", "El", "Fen", "Gil", "Han", "Ines",
               "Jor", "Kal", "Lau", "Mar", "Nor", "Ol", "Pet", "Quin", "Ros",
               "Sam", "Tam", "Ugo", "Vera", "Wil", "Xen", "Yol", "Zan")
_NAME_END = ("a", "as", "en", "ette", "ia", "ik", "ine", "is", "ka", "ko",
             "la", "man", "na", "o", "ora", "os", "ra", "son", "ta", "us")

FIRST_WORDS = ("report", "review", "profile", "survey", "sample", "record",
               "entry", "note", "case", "batch")

#: Likert-style scales with their ground-truth ascending order.
LIKERT_SUITE = (
    ("agreement_5", ("strongly disagree", "disagree",
                     "neither agree nor disagree", "agree", "strongly agree")),
    ("agreement_7", ("strongly disagree", "disagree", "somewhat disagree",
                     "neutral", "somewhat agree", "agree", "strongly agree")),
    ("frequency_5", ("never", "rarely", "sometimes", "often", "always")),
    ("frequency_6", ("never", "rarely", "occasionally", "sometimes",
                     "usually", "always")),
    ("quality_5", ("terrible", "bad", "okay", "good", "excellent")),
    ("quality_4", ("poor", "fair", "good", "excellent")),
    ("valence_5", ("very bad", "bad", "neutral", "good", "very good")),
    ("level_3", ("low", "medium", "high")),
    ("level_5", ("very low", "low", "medium", "high", "very high")),
    ("size_3", ("small", "medium", "large")),
    ("satisfaction_5", ("very dissatisfied", "dissatisfied", "neutral",
                        "satisfied", "very satisfied")),
    ("happiness_5", ("very unhappy", "unhappy", "neutral", "happy",
                     "very happy")),
    ("likelihood_5", ("very unlikely", "unlikely", "possible", "likely",
                      "very likely")),
    ("temperature_4", ("cold", "cool", "warm", "hot")),
    ("comparison_5", ("much worse", "worse", "same", "better", "much better")),
    ("support_5", ("strongly oppose", "oppose", "neutral", "support",
                   "strongly support")),
    ("difficulty_5", ("very easy", "easy", "moderate", "difficult",
                      "very difficult")),
    ("damage_4", ("none", "mild", "moderate", "severe")),
)

#: Ordinal vocabularies without Likert wording (the hard cases).
PLAIN_ORDINAL_SCALES = (
    ("education_level", ("primary", "secondary", "bachelor", "master",
                         "doctorate")),
    ("car_condition", ("unacc", "acc", "vgood", "vvgood")),
    ("crop_history", ("diff-lst-year", "same-lst-yr", "same-lst-two-yrs",
                      "same-lst-sev-yrs")),
    ("precipitation", ("lt-norm", "norm", "gt-norm")),
    ("stage_label", ("stage one", "stage two", "stage three", "stage four")),
)


def likert_suite():
    """(name, ground-truth ascending values) pairs for ordering evaluation."""
    return list(LIKERT_SUITE)


# ---------------------------------------------------------------------------
# Golden string-feature corpus


def _gen_coordinate(rng, n):
    style = rng.choice(["plain_pair", "plain_single", "dms"])
    out = []
    for _ in range(n):
        d1, m1, s1 = rng.randint(0, 89), rng.randint(0, 59), rng.randint(0, 59)
        d2, m2, s2 = rng.randint(0, 89), rng.randint(0, 59), rng.randint(0, 59)
        if style == "plain_pair":
            sep = rng.choice([".", ":"])
            ns, ew = rng.choice("NS"), rng.choice("EW")
            out.append(f"{ns}{d1}{sep}{m1}{sep}{s1} {ew}{d2}{sep}{m2}{sep}{s2}")
        elif style == "plain_single":
            sep = rng.choice([".", ":"])
            out.append(f"{rng.choice('NSEW')}{d1}{sep}{m1}{sep}{s1}")
        else:
            frac = rng.randint(0, 99)
            out.append(f"{d1}\u00b0{m1}'{s1}.{frac:02d}\"{rng.choice('NSEW')}")
    return out


_DAY_BANK = (("Monday", "Mon", "Mo"), ("Tuesday", "Tue", "Tu"),
             ("Wednesday", "Wed", "We"), ("Thursday", "Thu", "Th"),
             ("Friday", "Fri", "Fr"), ("Saturday", "Sat", "Sa"),
             ("Sunday", "Sun", "Su"))


def _gen_day(rng, n):
    form = rng.randint(0, 2)
    lower = rng.random() < 0.3
    out = []
    for _ in range(n):
        v = _DAY_BANK[rng.randrange(7)][form]
        out.append(v.lower() if lower else v)
    return out


_EMAIL_DOMAINS = ("tue.nl", "gmail.com", "hotmail.co.uk", "mail.org",
                  "uni-bonn.de", "example.com", "webmail.ca", "inbox.net")
_EMAIL_WORDS = ("jane", "john", "ada", "grace", "alan", "edsger", "bario",
                "lena", "pieter", "sofia", "karel", "nils", "mira", "otto")


def _gen_email(rng, n):
    sep = rng.choice([".", "_", ""])
    domain = rng.choice(_EMAIL_DOMAINS)
    out = []
    for _ in range(n):
        a, b = rng.choice(_EMAIL_WORDS), rng.choice(_EMAIL_WORDS)
        num = str(rng.randint(1, 99)) if rng.random() < 0.4 else ""
        out.append(f"{a}{sep}{b}{num}@{domain}")
    return out


_PATH_SEGMENTS = ("data", "users", "home", "projects", "images", "exports",
                  "archive", "scans", "batch1", "batch2", "results", "raw")
_PATH_FILES = ("img", "scan", "mask", "frame", "page", "slice")
_PATH_EXTS = (".png", ".jpg", ".csv", ".txt", ".pdf")


def _gen_filepath(rng, n, confusing=False):
    out = []
    if confusing:
        # bare filenames without separators: real data the matcher misses
        for _ in range(n):
            out.append(f"{rng.choice(_PATH_FILES)}{rng.randint(1, 9999)}"
                       f"{rng.choice(_PATH_EXTS)}")
        return out
    style = rng.choice(["windows", "unix", "relative", "dots"])
    for _ in range(n):
        depth = rng.randint(1, 3)
        segs = [rng.choice(_PATH_SEGMENTS) for _ in range(depth)]
        fname = f"{rng.choice(_PATH_FILES)}{rng.randint(1, 9999)}{rng.choice(_PATH_EXTS)}"
        if style == "windows":
            out.append("C:\\" + "\\".join(segs + [fname]))
        elif style == "unix":
            out.append("/" + "/".join(segs + [fname]))
        elif style == "relative":
            out.append("/".join(segs + [fname]))
        else:
            out.append("../" + "/".join(segs + [fname]))
    return out


def _gen_month(rng, n):
    months = ("January", "February", "March", "April", "May", "June", "July",
              "August", "September", "October", "November", "December")
    style = rng.choice(["bare", "abbrev", "day_first", "day_after", "year",
                        "apostrophe", "full"])
    out = []
    for _ in range(n):
        m = months[rng.randrange(12)]
        day = rng.randint(1, 28)
        year = rng.randint(1980, 2023)
        if style == "bare":
            out.append(m)
        elif style == "abbrev":
            out.append(m[:3])
        elif style == "day_first":
            out.append(f"{day} {m}")
        elif style == "day_after":
            out.append(f"{m} {day}")
        elif style == "year":
            out.append(f"{m} {year}")
        elif style == "apostrophe":
            out.append(f"{m} '{year % 100:02d}")
        else:
            out.append(f"{m} {day}, {year}")
    return out


def _gen_numerical(rng, n):
    style = rng.choice(["range_to", "range_dash", "range_colon", "words",
                        "affix"])
    out = []
    for _ in range(n):
        lo = rng.randint(0, 400)
        hi = lo + rng.randint(1, 200)
        if style == "range_to":
            out.append(f"{lo} to {hi}")
        elif style == "range_dash":
            out.append(f"{lo}-{hi}")
        elif style == "range_colon":
            out.append(f"{lo}:{hi}")
        elif style == "words":
            w = rng.choice(("Less than", "Under", "Below", "Greater than",
                            "Over", "Above", "Higher than", "Lower than"))
            out.append(f"{w} {hi}")
        else:
            if rng.random() < 0.5:
                out.append(f"{rng.choice('<>=')}{hi}")
            else:
                out.append(f"{hi}{rng.choice('+%')}")
    return out


_SENT_OPENERS = ("this", "the", "a", "another", "every")
_SENT_ADJ = ("ripe", "bright", "soft", "dense", "dry", "fresh", "smooth",
             "bold", "light", "crisp", "warm", "subtle")
_SENT_NOUNS = ("wine", "fruit", "aroma", "palate", "finish", "cherry",
               "oak", "spice", "melon", "apple", "herb", "honey", "plum",
               "pepper", "vanilla", "caramel", "tannin", "citrus")
_SENT_VERBS = ("shows", "offers", "brings", "carries", "delivers", "keeps")


def _gen_sentence(rng, n, confusing=False):
    out = []
    for _ in range(n):
        extra = 0 if confusing else rng.randint(0, 4)
        words = [rng.choice(_SENT_OPENERS), rng.choice(_SENT_NOUNS),
                 rng.choice(_SENT_VERBS), rng.choice(_SENT_ADJ),
                 rng.choice(_SENT_NOUNS)]
        if confusing:
            # five-word entries sit just below the length threshold
            out.append(" ".join(words))
            continue
        words += ["and", rng.choice(_SENT_ADJ), rng.choice(_SENT_NOUNS)]
        for _ in range(extra):
            words.append(rng.choice(_SENT_NOUNS))
        out.append(" ".join(words))
    return out


_URL_SITES = ("tue", "google", "walmart", "sofifa", "openml", "archive",
              "kaggle", "wikipedia", "weather", "transit")
_URL_TLDS = ("com", "org", "nl", "net", "io", "edu")


def _gen_url(rng, n):
    style = rng.choice(["https", "http", "mixed"])
    out = []
    for _ in range(n):
        site = rng.choice(_URL_SITES)
        tld = rng.choice(_URL_TLDS)
        host = f"www.{site}.{tld}" if rng.random() < 0.5 else f"{site}.{tld}"
        path = ""
        if rng.random() < 0.5:
            path = "/" + "/".join(rng.choice(_PATH_SEGMENTS)
                                  for _ in range(rng.randint(1, 3)))
            if rng.random() < 0.3:
                path += f"/{rng.randint(1, 99999)}.png"
        if style == "https":
            out.append(f"https://{host}{path}")
        elif style == "http":
            out.append(f"http://{host}{path}")
        else:
            # protocol-less rows: mostly bare hosts, occasionally with a
            # path (those overlap the filepath format)
            r = rng.random()
            if r < 0.5:
                out.append(f"{rng.choice(['https', 'http'])}://{host}{path}")
            elif r < 0.8:
                out.append(host)
            else:
                out.append(f"{host}{path}")
    return out


_UPPERS = "ABCDEFGHJKLMNPRSTUVWXY"


def _gen_zipcode(rng, n):
    style = rng.choice(["uk", "nl", "ca", "bm"])
    out = []
    for _ in range(n):
        space = " " if rng.random() < 0.7 else ""
        if style == "uk":
            a = "".join(rng.choice(_UPPERS) for _ in range(rng.randint(1, 2)))
            out.append(f"{a}{rng.randint(1, 9)}{space}{rng.randint(1, 9)}"
                       f"{rng.choice(_UPPERS)}{rng.choice(_UPPERS)}")
        elif style == "nl":
            out.append(f"{rng.randint(1000, 9999)}{space}"
                       f"{rng.choice(_UPPERS)}{rng.choice(_UPPERS)}")
        elif style == "ca":
            out.append(f"{rng.choice(_UPPERS)}{rng.randint(0, 9)}"
                       f"{rng.choice(_UPPERS)}{space}{rng.randint(0, 9)}"
                       f"{rng.choice(_UPPERS)}{rng.randint(0, 9)}")
        else:
            out.append(f"{rng.choice(_UPPERS)}{rng.choice(_UPPERS)}{space}"
                       f"{rng.randint(0, 9)}{rng.randint(0, 9)}")
    return out


def _gen_standard(rng, n):
    pool = rng.choice([CITIES, COUNTRIES, COLORS, PROFESSIONS, PRODUCT_TYPES])
    values = [rng.choice(pool) for _ in range(n)]
    if rng.random() < 0.3:
        values = [f"{rng.choice(FIRST_WORDS)} {v.lower()}" for v in values]
    return values


_GOLDEN_GENERATORS = {
    "coordinate": _gen_coordinate,
    "day": _gen_day,
    "email": _gen_email,
    "filepath": _gen_filepath,
    "month": _gen_month,
    "numerical": _gen_numerical,
    "sentence": _gen_sentence,
    "url": _gen_url,
    "zipcode": _gen_zipcode,
}

#: Columns per kind whose values deliberately miss the recognized format.
_CONFUSING_COLUMNS = {"filepath": 4, "sentence": 4}


@dataclass(frozen=True)
class LabeledColumn:
    name: str
    label: str
    column: Column


def golden_string_corpus(seed: int = 0, columns_per_kind: int = 21,
                         rows_per_column: int = 25):
    """Labeled columns for every recognized kind plus standard negatives.

    A few filepath and sentence columns are intentionally off-format
    (bare filenames, five-word entries), mirroring how such data defeats
    format-based recognition in the wild.
    """
    rng = random.Random(seed)
    out = []
    for kind, gen in _GOLDEN_GENERATORS.items():
        confusing = _CONFUSING_COLUMNS.get(kind, 0)
        for i in range(columns_per_kind):
            if kind in _CONFUSING_COLUMNS:
                values = gen(rng, rows_per_column,
                             confusing=(i < confusing))
            else:
                values = gen(rng, rows_per_column)
            out.append(LabeledColumn(f"{kind}_{i}", kind,
                                     Column(f"{kind}_{i}", tuple(values))))
    for i in range(20):
        values = _gen_standard(rng, rows_per_column)
        out.append(LabeledColumn(f"standard_{i}", "standard",
                                 Column(f"standard_{i}", tuple(values))))
    return out


# ---------------------------------------------------------------------------
# Statistical-type corpus (81 ordinal / 68 nominal = 149 columns)

_ORDINAL_NAME_POOL = ("opinion", "grade", "stage", "satisfaction", "rating",
                      "severity", "quality", "education_level", "agreement",
                      "priority", "intensity", "difficulty", "rank")
_NOMINAL_NAME_POOL = ("city", "name", "type", "address", "country", "brand",
                      "category", "style", "make", "region", "department",
                      "variety", "role")
_NEUTRAL_NAMES = ("q1", "q2", "q3", "q4", "q5", "response", "field_a",
                  "field_b", "item", "answer", "col_x", "col_y", "entry",
                  "value_code", "label")


def _synthetic_name(rng):
    return rng.choice(_NAME_START) + rng.choice(_NAME_END)


def _sample_with_all(rng, pool, n):
    """n draws guaranteed to cover every pool element at least once."""
    values = [rng.choice(pool) for _ in range(n - len(pool))]
    values.extend(pool)
    rng.shuffle(values)
    return values


def stattype_corpus(seed: int = 0, n_ordinal: int = 81, n_nominal: int = 68):
    """Annotated standard-string columns matching the published class
    balance (81 ordinal, 68 nominal)."""
    rng = random.Random(seed)
    out = []

    scales = [s for _, s in LIKERT_SUITE] + [s for _, s in PLAIN_ORDINAL_SCALES]
    for i in range(n_ordinal):
        scale = scales[i % len(scales)]
        n = rng.randint(60, 320)
        values = _sample_with_all(rng, scale, n)
        hard = (i % len(scales)) >= len(LIKERT_SUITE)
        if hard or rng.random() < 0.3:
            name = rng.choice(_ORDINAL_NAME_POOL if hard else _NEUTRAL_NAMES)
        else:
            name = rng.choice(_ORDINAL_NAME_POOL + _NEUTRAL_NAMES)
        out.append(LabeledColumn(f"{name}_{i}", "ordinal",
                                 Column(f"{name}_{i}", tuple(values))))

    nominal_pools = (CITIES, COUNTRIES, COLORS, PROFESSIONS, PRODUCT_TYPES)
    for i in range(n_nominal):
        n = rng.randint(60, 320)
        kind = i % 4
        if kind == 3:
            # high-cardinality synthetic names
            values = [_synthetic_name(rng) for _ in range(n)]
            name = rng.choice(("name", "host_name", "entry", "label"))
        else:
            pool = nominal_pools[i % len(nominal_pools)]
            size = rng.randint(4, len(pool))
            sub = rng.sample(pool, size)
            values = [rng.choice(sub) for _ in range(n)]
            name = rng.choice(_NOMINAL_NAME_POOL + _NEUTRAL_NAMES)
        out.append(LabeledColumn(f"{name}_{i}", "nominal",
                                 Column(f"{name}_{i}", tuple(values))))
    return out


def write_stattype_corpus_json(path, corpus=None):
    """Serialize a labeled corpus for the training CLI."""
    corpus = corpus if corpus is not None else stattype_corpus()
    doc = {"format_version": 1,
           "columns": [{"name": lc.name, "label": lc.label,
                        "values": list(lc.column.cells)}
                       for lc in corpus]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_stattype_corpus_json(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format_version") != 1:
        raise ValueError("unsupported corpus format_version")
    out = []
    for c in doc["columns"]:
        out.append(LabeledColumn(c["name"], c["label"],
                                 Column(c["name"], tuple(c["values"]))))
    return out


# ---------------------------------------------------------------------------
# End-to-end demo fixture


def demo_table(seed: int = 0, n_rows: int = 500):
    """A dirty table exercising all nine string kinds plus numeric columns.

    Returns (table, planted) where ``planted`` records the typo and
    anomaly cells the cleaning stages are expected to flag.
    """
    rng = random.Random(seed)
    planted = {"typos": [], "anomalies": [], "missing": []}
    protected = set()  # (column, row) pairs that must keep their planted value

    def plant_missing(name, cells, count):
        pool = [r for r in range(n_rows) if (name, r) not in protected]
        rows = rng.sample(pool, count)
        for r in rows:
            cells[r] = None
        return rows

    email = _gen_email(rng, n_rows)
    day = _gen_day(rng, n_rows)
    month = _gen_month(rng, n_rows)
    coord = _gen_coordinate(rng, n_rows)
    url = _gen_url(rng, n_rows)
    path = _gen_filepath(rng, n_rows)
    size = [f"{lo} to {lo + rng.randint(10, 90)}"
            for lo in (rng.randint(10, 400) for _ in range(n_rows))]
    review = _gen_sentence(rng, n_rows)

    from .geo import bundled_geo_table
    zips = [rec.postal_code for rec in bundled_geo_table().records]
    postcode = [rng.choice(zips) for _ in range(n_rows)]

    opinion_scale = ("strongly disagree", "disagree",
                     "neither agree nor disagree", "agree", "strongly agree")
    opinion = [rng.choice(opinion_scale) for _ in range(n_rows)]
    city = [rng.choice(CITIES[:12]) for _ in range(n_rows)]

    score = [rng.randint(0, 100) for _ in range(n_rows)]
    income = [round(rng.uniform(20.0, 90.0), 2) for _ in range(n_rows)]

    columns = {
        "user_email": email, "visit_day": day, "joined": month,
        "location": coord, "homepage": url, "image_path": path,
        "company_size": size, "review": review, "postcode": postcode,
        "opinion": opinion, "city": city, "score": score, "income": income,
    }

    # anomalies: format-breaking values in recognized columns
    anomaly_plan = (("user_email", 40417), ("visit_day", "Qx"),
                    ("location", "somewhere"), ("postcode", 99999),
                    ("joined", 13131313))
    rows = rng.sample(range(n_rows), len(anomaly_plan))
    for (col, bad), r in zip(anomaly_plan, rows):
        columns[col][r] = bad
        planted["anomalies"].append({"column": col, "row": r, "value": bad})
        protected.add((col, r))

    # typos: one-off misspellings of dominant values in standard columns
    typo_plan = (("opinion", "agre"), ("city", "Amsterdaw"))
    for col, bad in typo_plan:
        while True:
            r = rng.randrange(n_rows)
            if (col, r) not in protected:
                break
        columns[col][r] = bad
        planted["typos"].append({"column": col, "row": r, "value": bad})
        protected.add((col, r))

    for col in ("score", "income", "opinion", "user_email"):
        rows = plant_missing(col, columns[col], max(2, n_rows // 50))
        planted["missing"].append({"column": col, "rows": sorted(rows)})

    table = Table(tuple(Column(name, tuple(cells))
                        for name, cells in columns.items()))
    return table, planted
