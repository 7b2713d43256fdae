"""Ordinal-versus-nominal prediction for standard string columns.

Eight signals summarize a column; a from-scratch gradient boosting
classifier trained on the bundled annotated corpus predicts whether the
values carry an order.
"""

from stringkit import Column, extract_features, predict_stat_type
from stringkit.corpus import stattype_corpus
from stringkit.gbc import train_gbc
from stringkit.ordinality import FEATURE_NAMES

# The eight signals for a Likert-style column.
column = Column("opinion", ("strongly disagree", "disagree", "agree",
                            "strongly agree", "agree", "disagree") * 10)
features = extract_features(column)
for name, value in zip(FEATURE_NAMES, features.to_vector()):
    print(f"  {name:<28} = {value:.4f}")

# Train on the bundled synthetic corpus and predict fresh columns.
corpus = stattype_corpus(seed=0)
model = train_gbc([extract_features(c.column, c.name) for c in corpus],
                  [c.label for c in corpus])
print(f"\ntrained {len(model.trees)} trees, "
      f"final training loss {model.train_loss[-1]:.4f}")

probes = [
    Column("satisfaction", ("low", "medium", "high", "medium", "low") * 8),
    Column("city", ("Amsterdam", "Utrecht", "Breda", "Haarlem", "Arnhem") * 8),
    Column("grade", ("poor", "fair", "good", "excellent") * 10),
    Column("club", ("Ajax", "Feyenoord", "PSV", "Twente", "Utrecht") * 8),
]
for probe in probes:
    label, prob = predict_stat_type(model, extract_features(probe))
    print(f"  {probe.name:>13}: {label:<8} (P(ordinal) = {prob:.3f})")
