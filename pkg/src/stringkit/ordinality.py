"""Ordinal-versus-nominal signals for standard string columns.

Eight properties summarize a column: its length, distinct-value count and
their ratio, the dispersion of the value embeddings, two-way containment
of the column name in ordinal/nominal keyword lists, whether values carry
Likert-style keywords, and whether a sufficiently long substring is shared
by most values. The numeric view of these feeds the boosting classifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .embeddings import EmbeddingStore, embedding_dispersion
from .table import Column, cell_text

#: Shared-substring rule: a substring of at least this length ...
MIN_SHARED_SUBSTRING = 4
#: ... present in at least this share of the unique values.
MIN_SHARED_COVERAGE = 0.6

N_FEATURES = 8


def _load_list(filename):
    path = resources.files("stringkit").joinpath(f"data/{filename}")
    return tuple(w.strip().lower()
                 for w in path.read_text(encoding="utf-8").splitlines()
                 if w.strip())


@dataclass(frozen=True)
class KeywordConfig:
    ordinal_names: tuple
    nominal_names: tuple
    likert_keywords: tuple

    @classmethod
    def bundled(cls) -> "KeywordConfig":
        return cls(ordinal_names=_load_list("ordinal_names.txt"),
                   nominal_names=_load_list("nominal_names.txt"),
                   likert_keywords=_load_list("likert_keywords.txt"))

    @classmethod
    def from_paths(cls, ordinal_path=None, nominal_path=None,
                   likert_path=None) -> "KeywordConfig":
        def read(path, fallback):
            if path is None:
                return fallback
            with open(path, encoding="utf-8") as fh:
                return tuple(w.strip().lower() for w in fh if w.strip())
        base = cls.bundled()
        return cls(ordinal_names=read(ordinal_path, base.ordinal_names),
                   nominal_names=read(nominal_path, base.nominal_names),
                   likert_keywords=read(likert_path, base.likert_keywords))


_default_keywords = None


def default_keywords() -> KeywordConfig:
    global _default_keywords
    if _default_keywords is None:
        _default_keywords = KeywordConfig.bundled()
    return _default_keywords


@dataclass(frozen=True)
class OrdinalityFeatures:
    n_rows: int
    n_unique: int
    unique_ratio: float
    embedding_dispersion: float
    name_is_ordinal: bool
    name_is_nominal: bool
    values_have_ordinal_keywords: bool
    values_share_substring: bool

    def to_vector(self) -> np.ndarray:
        return np.array([
            float(self.n_rows),
            float(self.n_unique),
            self.unique_ratio,
            self.embedding_dispersion,
            float(self.name_is_ordinal),
            float(self.name_is_nominal),
            float(self.values_have_ordinal_keywords),
            float(self.values_share_substring),
        ])


FEATURE_NAMES = ("n_rows", "n_unique", "unique_ratio", "embedding_dispersion",
                 "name_is_ordinal", "name_is_nominal",
                 "values_have_ordinal_keywords", "values_share_substring")


def _name_matches(name: str, keywords) -> bool:
    """Two-way containment between the column name and any keyword."""
    n = name.lower().strip()
    if not n:
        return False
    return any(k in n or n in k for k in keywords)


def _values_contain_keyword(values, keywords) -> bool:
    for v in values:
        low = v.lower()
        if any(k in low for k in keywords):
            return True
    return False


def shared_substring(values, min_len: int = MIN_SHARED_SUBSTRING,
                     min_coverage: float = MIN_SHARED_COVERAGE) -> bool:
    """True when some substring of length >= min_len appears in at least
    min_coverage of the unique values.

    Checking windows of exactly min_len suffices: any longer shared
    substring contains one of them.
    """
    uniques = sorted(set(v.lower() for v in values))
    if not uniques:
        return False
    needed = min_coverage * len(uniques)
    counts = {}
    for v in uniques:
        grams = {v[i:i + min_len] for i in range(len(v) - min_len + 1)}
        for g in grams:
            c = counts.get(g, 0) + 1
            counts[g] = c
            if c >= needed:
                return True
    return False


def extract_features(column: Column, name: str | None = None,
                     store: EmbeddingStore | None = None,
                     keywords: KeywordConfig | None = None) -> OrdinalityFeatures:
    """Compute the eight-signal summary of a text column."""
    if name is None:
        name = column.name
    if store is None:
        store = EmbeddingStore()
    if keywords is None:
        keywords = default_keywords()

    values = [cell_text(c) for c in column.cells if c is not None]
    n_rows = len(column.cells)
    uniques = sorted(set(values))
    n_unique = len(uniques)
    ratio = n_unique / n_rows if n_rows else 0.0
    dispersion = embedding_dispersion(uniques, store) if uniques else 0.0

    return OrdinalityFeatures(
        n_rows=n_rows,
        n_unique=n_unique,
        unique_ratio=ratio,
        embedding_dispersion=dispersion,
        name_is_ordinal=_name_matches(name, keywords.ordinal_names),
        name_is_nominal=_name_matches(name, keywords.nominal_names),
        values_have_ordinal_keywords=_values_contain_keyword(
            uniques, keywords.likert_keywords),
        values_share_substring=shared_substring(uniques),
    )
