"""Word-embedding store with a seeded fallback for unknown tokens.

The on-disk format is the common plain-text one: a token followed by its
vector components, whitespace separated, one token per line. Tokens absent
from the store map to a pseudo-random point that is stable per
(token, seed), so pipelines stay deterministic without a vector file.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

DEFAULT_DIMENSION = 50


class DimensionMismatchError(ValueError):
    """Embedding file with inconsistent vector lengths."""


@dataclass
class EmbeddingStore:
    dimension: int = DEFAULT_DIMENSION
    vectors: dict = field(default_factory=dict)
    fallback_seed: int = 0

    def __len__(self):
        return len(self.vectors)

    def lookup(self, token: str) -> np.ndarray:
        t = token.lower()
        vec = self.vectors.get(t)
        if vec is not None:
            return vec
        seed = zlib.crc32(f"{self.fallback_seed}:{t}".encode("utf-8"))
        rng = np.random.default_rng(seed)
        return rng.uniform(-1.0, 1.0, size=self.dimension)

    def embed_entry(self, entry: str) -> np.ndarray:
        """Mean of the word vectors of an entry's whitespace-split words."""
        words = entry.split()
        if not words:
            return np.zeros(self.dimension)
        return np.mean([self.lookup(w) for w in words], axis=0)


def load_embeddings(path, fallback_seed: int = 0) -> EmbeddingStore:
    """Parse a token-plus-floats text file; first duplicate of a token wins."""
    vectors = {}
    dimension = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            token, comps = parts[0], parts[1:]
            if dimension is None:
                dimension = len(comps)
                if dimension == 0:
                    raise DimensionMismatchError(f"line {lineno}: no components")
            elif len(comps) != dimension:
                raise DimensionMismatchError(
                    f"line {lineno}: expected {dimension} components, "
                    f"got {len(comps)}")
            if token not in vectors:
                vectors[token] = np.array([float(x) for x in comps])
    if dimension is None:
        raise DimensionMismatchError("empty embedding file")
    return EmbeddingStore(dimension=dimension, vectors=vectors,
                          fallback_seed=fallback_seed)


def embedding_dispersion(unique_values, store: EmbeddingStore) -> float:
    """Mean per-dimension population variance of the entry points.

    Each entry becomes one point (the mean of its word vectors); the
    return value is the mean over dimensions of the variance across
    entries. Zero for a single entry or identical entries.
    """
    values = sorted(set(unique_values))
    if not values:
        raise ValueError("no values to embed")
    points = np.stack([store.embed_entry(v) for v in values])
    if len(values) == 1:
        return 0.0
    return float(points.var(axis=0, ddof=0).mean())
