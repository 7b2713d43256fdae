"""Numeric encoders for categorical string columns.

Nominal columns are gated by cardinality: character-trigram Jaccard
similarity below 30 distinct values, a Gamma-Poisson factorization of the
value/trigram count matrix below 100, and min-hashing from 100 upward.
Ordinal columns are ranked by a bundled sentiment-intensity lexicon; a
lexicographic baseline ranking is kept around for comparison.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .table import Column, cell_text

SIMILARITY = "similarity"
GAMMA_POISSON = "gamma_poisson"
MINHASH = "minhash"
ORDINAL_INTENSITY = "ordinal_intensity"
ORDINAL_BASELINE = "ordinal_baseline"
TARGET_MEAN = "target_mean"
PASSTHROUGH = "numeric"

#: Cardinality breakpoints of the nominal encoder gate.
SIMILARITY_MAX = 30
GAMMA_POISSON_MAX = 100


class DegenerateInputError(ValueError):
    pass


class MismatchedItemsError(ValueError):
    pass


@dataclass(frozen=True)
class ColumnMeta:
    source: str
    encoder: str
    component: int

    @property
    def output_name(self):
        return f"{self.source}__{self.encoder}_{self.component}"


@dataclass
class EncodedMatrix:
    values: np.ndarray
    column_meta: list = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValueError("encoded values must be a 2-d matrix")
        if np.isnan(self.values).any():
            raise ValueError("encoded matrix contains NaN")
        if len(self.column_meta) != self.values.shape[1]:
            raise ValueError("one meta entry per output column required")

    @property
    def n_rows(self):
        return self.values.shape[0]

    @property
    def n_cols(self):
        return self.values.shape[1]

    def output_names(self):
        return [m.output_name for m in self.column_meta]


def hstack_encoded(parts) -> EncodedMatrix:
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to stack")
    values = np.hstack([p.values for p in parts])
    meta = [m for p in parts for m in p.column_meta]
    return EncodedMatrix(values, meta)


def select_nominal_encoder(cardinality: int) -> str:
    """Cardinality gate: below 30 similarity, below 100 Gamma-Poisson,
    otherwise min-hash."""
    if cardinality < 1:
        raise ValueError(f"cardinality must be positive: {cardinality}")
    if cardinality < SIMILARITY_MAX:
        return SIMILARITY
    if cardinality < GAMMA_POISSON_MAX:
        return GAMMA_POISSON
    return MINHASH


# ---------------------------------------------------------------------------
# Character n-grams


def ngram_set(s: str, n: int = 3) -> frozenset:
    """Set of length-n substrings of the space-padded, lowercased string;
    a string too short after padding yields the padded string itself."""
    padded = f" {s.lower()} "
    if len(padded) < n:
        return frozenset((padded,))
    return frozenset(padded[i:i + n] for i in range(len(padded) - n + 1))


def ngram_counts(s: str, n: int = 3) -> dict:
    """Multiset of padded n-grams (counts per gram)."""
    padded = f" {s.lower()} "
    out = {}
    if len(padded) < n:
        out[padded] = 1
        return out
    for i in range(len(padded) - n + 1):
        g = padded[i:i + n]
        out[g] = out.get(g, 0) + 1
    return out


def jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 1.0
    inter = len(a & b)
    union = len(a) + len(b) - inter
    return inter / union if union else 0.0


def _column_strings(column: Column):
    return ["" if c is None else cell_text(c) for c in column.cells]


def _unique_in_order(values):
    seen = {}
    for v in values:
        seen.setdefault(v, None)
    return list(seen)


# ---------------------------------------------------------------------------
# Similarity encoder


def similarity_encode(column: Column, categories=None) -> EncodedMatrix:
    """One output column per category, valued by trigram Jaccard overlap."""
    strings = _column_strings(column)
    if categories is None:
        categories = _unique_in_order(strings)
    cat_grams = [ngram_set(c) for c in categories]
    grams = {s: ngram_set(s) for s in set(strings)}
    values = np.empty((len(strings), len(categories)))
    for i, s in enumerate(strings):
        gs = grams[s]
        for j, cg in enumerate(cat_grams):
            values[i, j] = jaccard(gs, cg)
    meta = [ColumnMeta(column.name, SIMILARITY, j) for j in range(len(categories))]
    return EncodedMatrix(values, meta)


# ---------------------------------------------------------------------------
# Min-hash encoder


def _gram_fingerprint(gram: str) -> int:
    return int.from_bytes(hashlib.blake2b(gram.encode("utf-8"),
                                          digest_size=8).digest(), "big")


def minhash_signature(s: str, k: int = 64, seed: int = 0) -> np.ndarray:
    """k min-hash components in [0, 1) over the string's trigram set."""
    rng = np.random.default_rng(seed)
    a = rng.integers(1, 2**63, size=k, dtype=np.uint64) * np.uint64(2) + np.uint64(1)
    b = rng.integers(0, 2**63, size=k, dtype=np.uint64)
    grams = sorted(ngram_set(s))
    x = np.array([_gram_fingerprint(g) for g in grams], dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = x[:, None] * a[None, :] + b[None, :]
    return h.min(axis=0).astype(float) / float(2**64)


def minhash_encode(column: Column, k: int = 64, seed: int = 0) -> EncodedMatrix:
    """k-component min-hash signature per cell; equal strings share rows."""
    if k < 1:
        raise ValueError("k must be at least 1")
    strings = _column_strings(column)
    cache = {}
    for s in _unique_in_order(strings):
        cache[s] = minhash_signature(s, k=k, seed=seed)
    values = np.stack([cache[s] for s in strings])
    meta = [ColumnMeta(column.name, MINHASH, j) for j in range(k)]
    return EncodedMatrix(values, meta)


# ---------------------------------------------------------------------------
# Gamma-Poisson encoder


_EPS = 1e-12


def generalized_kl(V: np.ndarray, R: np.ndarray) -> float:
    """Generalized Kullback-Leibler divergence D(V || R)."""
    R = np.maximum(R, _EPS)
    mask = V > 0
    term = np.where(mask, V * np.log(np.maximum(V, _EPS) / R) - V + R, R)
    return float(term.sum())


def gamma_poisson_fit(V, d: int = 10, iterations: int = 100, seed: int = 0,
                      return_objective: bool = False):
    """Nonnegative factorization V ~ A @ W under a Poisson likelihood.

    Multiplicative updates keep the generalized KL divergence
    non-increasing. Returns (W, A): W holds d L1-normalized topic rows
    over the vocabulary, A holds one activation row per input row.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2:
        raise ValueError("count matrix must be 2-d")
    if (V < 0).any():
        raise DegenerateInputError("count matrix must be nonnegative")
    if not V.any():
        raise DegenerateInputError("count matrix is all zeros")
    if d < 1:
        raise ValueError("d must be at least 1")

    n, g = V.shape
    rng = np.random.default_rng(seed)
    scale = np.sqrt(V.mean() / d)
    A = scale * rng.uniform(0.5, 1.5, size=(n, d))
    W = scale * rng.uniform(0.5, 1.5, size=(d, g))

    history = [generalized_kl(V, A @ W)]
    for _ in range(iterations):
        R = np.maximum(A @ W, _EPS)
        A *= (V / R) @ W.T / np.maximum(W.sum(axis=1)[None, :], _EPS)
        R = np.maximum(A @ W, _EPS)
        W *= A.T @ (V / R) / np.maximum(A.sum(axis=0)[:, None], _EPS)
        history.append(generalized_kl(V, A @ W))

    norms = np.maximum(W.sum(axis=1), _EPS)
    W = W / norms[:, None]
    A = A * norms[None, :]
    if return_objective:
        return W, A, history
    return W, A


def gamma_poisson_encode(column: Column, d: int = 10, iterations: int = 100,
                         seed: int = 0) -> EncodedMatrix:
    """Activation vector of each cell's unique value under the fitted
    trigram topic model."""
    strings = _column_strings(column)
    uniques = _unique_in_order(strings)
    vocab = sorted({g for s in uniques for g in ngram_counts(s)})
    index = {g: j for j, g in enumerate(vocab)}
    V = np.zeros((len(uniques), len(vocab)))
    for i, s in enumerate(uniques):
        for g, c in ngram_counts(s).items():
            V[i, index[g]] = c
    _, A = gamma_poisson_fit(V, d=d, iterations=iterations, seed=seed)
    row_of = {s: i for i, s in enumerate(uniques)}
    values = np.stack([A[row_of[s]] for s in strings])
    meta = [ColumnMeta(column.name, GAMMA_POISSON, j) for j in range(A.shape[1])]
    return EncodedMatrix(values, meta)


# ---------------------------------------------------------------------------
# Sentiment-intensity lexicon and ordinal encoders


@dataclass(frozen=True)
class SentimentLexicon:
    scores: dict
    modifiers: dict
    negators: frozenset

    def __post_init__(self):
        if not self.scores:
            raise ValueError("empty lexicon")
        bad = [t for t, v in self.scores.items() if not -4.0 <= v <= 4.0]
        if bad:
            raise ValueError(f"scores out of [-4, 4] for: {bad[:5]}")
        nonpos = [t for t, v in self.modifiers.items() if v <= 0]
        if nonpos:
            raise ValueError(f"booster factors must be positive: {nonpos[:5]}")


def load_lexicon(path) -> SentimentLexicon:
    """Parse the sectioned lexicon file ([scores], [boosters], [negators])."""
    scores, modifiers, negators = {}, {}, set()
    section = None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1].lower()
                continue
            parts = line.split("\t")
            token = parts[0].strip().lower()
            if section == "scores" and len(parts) >= 2:
                scores[token] = float(parts[1])
            elif section == "boosters" and len(parts) >= 2:
                modifiers[token] = float(parts[1])
            elif section == "negators":
                negators.add(token)
    return SentimentLexicon(scores=scores, modifiers=modifiers,
                            negators=frozenset(negators))


_bundled_lexicon = None


def bundled_lexicon() -> SentimentLexicon:
    global _bundled_lexicon
    if _bundled_lexicon is None:
        path = resources.files("stringkit").joinpath("data/sentiment_lexicon.tsv")
        with resources.as_file(path) as p:
            _bundled_lexicon = load_lexicon(p)
    return _bundled_lexicon


_TOKEN_RE = re.compile(r"[a-z]+(?:'[a-z]+)?")

#: How many preceding tokens a booster or negator can act across.
MODIFIER_WINDOW = 2


def sentiment_intensity(s: str, lexicon: SentimentLexicon | None = None) -> float:
    """Summed intensity of the lexicon tokens in a string.

    Boosters within the preceding two tokens multiply a score; a negator in
    that window flips its sign. Strings without lexicon tokens score zero.
    """
    lex = lexicon or bundled_lexicon()
    tokens = _TOKEN_RE.findall(s.lower())
    total = 0.0
    for i, tok in enumerate(tokens):
        v = lex.scores.get(tok)
        if v is None:
            continue
        window = tokens[max(0, i - MODIFIER_WINDOW):i]
        for w in window:
            factor = lex.modifiers.get(w)
            if factor is not None:
                v *= factor
        if any(w in lex.negators for w in window):
            v = -v
        total += v
    return total


def ordinal_encode(column: Column,
                   lexicon: SentimentLexicon | None = None) -> EncodedMatrix:
    """Rank each value by sentiment intensity (ties keep first-appearance
    order) and emit one rank column."""
    strings = _column_strings(column)
    uniques = _unique_in_order(strings)
    scored = sorted(uniques,
                    key=lambda v: (sentiment_intensity(v, lexicon),
                                   uniques.index(v)))
    rank = {v: float(r) for r, v in enumerate(scored)}
    values = np.array([[rank[s]] for s in strings])
    return EncodedMatrix(values, [ColumnMeta(column.name, ORDINAL_INTENSITY, 0)])


def baseline_ordinal_encode(column: Column) -> EncodedMatrix:
    """Lexicographic rank column, the comparison arm for ordinal encoding."""
    strings = _column_strings(column)
    rank = {v: float(r) for r, v in enumerate(sorted(set(strings)))}
    values = np.array([[rank[s]] for s in strings])
    return EncodedMatrix(values, [ColumnMeta(column.name, ORDINAL_BASELINE, 0)])


def ordering_of(matrix: EncodedMatrix, column: Column) -> list:
    """Unique values of the column sorted by their encoded rank."""
    strings = _column_strings(column)
    rank = {}
    for s, row in zip(strings, matrix.values):
        rank.setdefault(s, float(row[0]))
    return sorted(rank, key=lambda v: rank[v])


def target_encode(column: Column, target) -> EncodedMatrix:
    """Mean-target encoding; optional, outside the default cardinality gate."""
    strings = _column_strings(column)
    target = np.asarray(target, dtype=float)
    if len(target) != len(strings):
        raise ValueError("target length mismatch")
    sums, counts = {}, {}
    for s, t in zip(strings, target):
        sums[s] = sums.get(s, 0.0) + t
        counts[s] = counts.get(s, 0) + 1
    overall = float(target.mean()) if len(target) else 0.0
    mean = {s: sums[s] / counts[s] for s in sums}
    values = np.array([[mean.get(s, overall)] for s in strings])
    return EncodedMatrix(values, [ColumnMeta(column.name, TARGET_MEAN, 0)])


# ---------------------------------------------------------------------------
# Rank correlation


def _to_ranks(order) -> dict:
    if isinstance(order, dict):
        raw = {k: float(v) for k, v in order.items()}
    else:
        raw = {item: float(i) for i, item in enumerate(order)}
        if len(raw) != len(list(order)):
            raise MismatchedItemsError("duplicate items in ranking")
    # average ranks for tied rank values
    by_value = {}
    for item, v in raw.items():
        by_value.setdefault(v, []).append(item)
    ranks = {}
    position = 0
    for v in sorted(by_value):
        items = by_value[v]
        avg = position + (len(items) - 1) / 2.0
        for item in items:
            ranks[item] = avg
        position += len(items)
    return ranks


def spearman_rank_correlation(order_a, order_b) -> float:
    """Spearman rho between two rankings of the same item set, with
    average ranks for ties."""
    ra, rb = _to_ranks(order_a), _to_ranks(order_b)
    if set(ra) != set(rb):
        raise MismatchedItemsError("rankings cover different items")
    u = len(ra)
    if u < 2:
        return 1.0
    d2 = sum((ra[i] - rb[i]) ** 2 for i in ra)
    return 1.0 - 6.0 * d2 / (u * (u * u - 1))
