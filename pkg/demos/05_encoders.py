"""Numeric encoders: the cardinality gate, trigram similarity, min-hash,
Gamma-Poisson topics, and sentiment-ordered ranks."""

import numpy as np

from stringkit import (Column, baseline_ordinal_encode, gamma_poisson_encode,
                       minhash_encode, ngram_set, ordinal_encode,
                       select_nominal_encoder, sentiment_intensity,
                       similarity_encode, spearman_rank_correlation)
from stringkit.encoders import ordering_of

# The gate: which encoder handles which cardinality.
for cardinality in (5, 29, 30, 99, 100, 4000):
    print(f"  {cardinality:>5} distinct values -> {select_nominal_encoder(cardinality)}")

# Trigram sets and the similarity encoder.
print("\ntrigrams of 'agree':", sorted(ngram_set("agree")))
col = Column("answer", ("agree", "disagree", "agree", "neutral"))
m = similarity_encode(col)
print("similarity matrix:\n", np.round(m.values, 3))

# Min-hash signatures approximate trigram Jaccard at scale.
col = Column("tag", tuple(f"item-{i}" for i in range(200)))
m = minhash_encode(col, k=8, seed=1)
print("\nmin-hash rows (first 2):\n", np.round(m.values[:2], 4))

# Gamma-Poisson activations for mid-cardinality columns.
col = Column("style", tuple(f"style{i % 40}" for i in range(120)))
m = gamma_poisson_encode(col, d=5, iterations=50, seed=2)
print("\nGamma-Poisson shape:", m.values.shape)

# Sentiment intensities order Likert answers; the baseline cannot.
scale = ("strongly disagree", "disagree", "neither agree nor disagree",
         "agree", "strongly agree")
for s in scale:
    print(f"  intensity({s!r}) = {sentiment_intensity(s):+.3f}")
col = Column("opinion", scale)
learned = ordering_of(ordinal_encode(col), col)
base = ordering_of(baseline_ordinal_encode(col), col)
print("intensity order:", learned)
print("  spearman vs truth:", spearman_rank_correlation(learned, list(scale)))
print("baseline order:", base)
print("  spearman vs truth:", spearman_rank_correlation(base, list(scale)))
