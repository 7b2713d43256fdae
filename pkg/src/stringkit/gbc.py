"""Gradient boosting classifier for the ordinal/nominal decision.

Plain gradient boosting with logistic loss: the model starts from the
class-prior log-odds and each round fits a depth-limited regression tree
to the current residuals using exact greedy variance-reduction splits.
Everything is deterministic for a fixed dataset order, so training twice
yields identical models. Models round-trip through a versioned JSON file.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .ordinality import N_FEATURES, OrdinalityFeatures

ORDINAL = "ordinal"
NOMINAL = "nominal"

MODEL_FORMAT_VERSION = 1

#: Minimum variance reduction for a split to be worth keeping.
_MIN_GAIN = 1e-12


class DegenerateLabelsError(ValueError):
    """Training data with fewer than two classes."""


class SchemaError(ValueError):
    """Model file that does not match the expected schema."""


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def _fit_tree(X, residuals, max_depth):
    """Exact greedy regression tree on the residuals, as nested dicts."""

    def build(rows, depth):
        r = residuals[rows]
        if depth >= max_depth or len(rows) < 2 or np.ptp(r) == 0.0:
            return {"value": float(r.mean())}
        best = None  # (gain, feature, threshold, left_rows, right_rows)
        total = r.sum()
        n = len(rows)
        base = (total * total) / n
        for f in range(X.shape[1]):
            col = X[rows, f]
            order = np.argsort(col, kind="stable")
            xs = col[order]
            rs = r[order]
            cuts = np.nonzero(np.diff(xs))[0]
            if cuts.size == 0:
                continue
            prefix = np.cumsum(rs)
            nl = cuts + 1
            left_sum = prefix[cuts]
            right_sum = total - left_sum
            gains = left_sum**2 / nl + right_sum**2 / (n - nl) - base
            k = int(np.argmax(gains))
            gain = float(gains[k])
            if gain > _MIN_GAIN and (best is None or gain > best[0] + 1e-15):
                threshold = float((xs[cuts[k]] + xs[cuts[k] + 1]) / 2.0)
                mask = col <= threshold
                best = (gain, f, threshold, rows[mask], rows[~mask])
        if best is None:
            return {"value": float(r.mean())}
        _, f, threshold, left_rows, right_rows = best
        return {
            "feature": f,
            "threshold": threshold,
            "left": build(left_rows, depth + 1),
            "right": build(right_rows, depth + 1),
        }

    return build(np.arange(len(residuals)), 0)


def _tree_apply(node, X):
    out = np.empty(len(X))
    stack = [(node, np.arange(len(X)))]
    while stack:
        nd, rows = stack.pop()
        if "value" in nd:
            out[rows] = nd["value"]
            continue
        mask = X[rows, nd["feature"]] <= nd["threshold"]
        stack.append((nd["left"], rows[mask]))
        stack.append((nd["right"], rows[~mask]))
    return out


@dataclass
class GbcModel:
    trees: list = field(default_factory=list)
    learning_rate: float = 0.1
    base_score: float = 0.0
    n_features: int = N_FEATURES
    train_loss: list = field(default_factory=list, repr=False)

    def decision_value(self, X: np.ndarray) -> np.ndarray:
        z = np.full(len(X), self.base_score)
        for tree in self.trees:
            z += self.learning_rate * _tree_apply(tree, X)
        return z

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Probability of the ordinal class per row."""
        return _sigmoid(self.decision_value(X))

    def to_json(self) -> dict:
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
            "n_features": self.n_features,
            "trees": self.trees,
        }

    @classmethod
    def from_json(cls, doc) -> "GbcModel":
        if not isinstance(doc, dict):
            raise SchemaError("model document is not an object")
        if doc.get("format_version") != MODEL_FORMAT_VERSION:
            raise SchemaError(
                f"unsupported model format_version: {doc.get('format_version')!r}")
        try:
            model = cls(trees=list(doc["trees"]),
                        learning_rate=float(doc["learning_rate"]),
                        base_score=float(doc["base_score"]),
                        n_features=int(doc["n_features"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad model document: {exc}") from exc
        for tree in model.trees:
            _check_tree(tree, model.n_features)
        return model


def _check_tree(node, n_features):
    if not isinstance(node, dict):
        raise SchemaError("tree node is not an object")
    if "value" in node:
        float(node["value"])
        return
    try:
        f = int(node["feature"])
        float(node["threshold"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad tree node: {exc}") from exc
    if not 0 <= f < n_features:
        raise SchemaError(f"feature index out of range: {f}")
    _check_tree(node["left"], n_features)
    _check_tree(node["right"], n_features)


def _as_matrix(dataset):
    X = np.stack([f.to_vector() if isinstance(f, OrdinalityFeatures)
                  else np.asarray(f, dtype=float) for f in dataset])
    return X


def _log_loss(y, z):
    p = np.clip(_sigmoid(z), 1e-15, 1 - 1e-15)
    return float(-(y * np.log(p) + (1 - y) * np.log(1 - p)).mean())


def train_gbc(dataset, labels, n_trees: int = 100, max_depth: int = 3,
              learning_rate: float = 0.1, seed: int = 0) -> GbcModel:
    """Train the booster on (features, label) pairs.

    ``labels`` contains "ordinal"/"nominal" strings or 1/0. Training is
    deterministic (exact greedy splits, no subsampling); ``seed`` is
    accepted for interface stability.
    """
    X = _as_matrix(dataset)
    y = np.array([1.0 if lab in (ORDINAL, 1, True) else 0.0 for lab in labels])
    if len(set(y.tolist())) < 2:
        raise DegenerateLabelsError("training data needs both classes")
    if len(X) != len(y):
        raise ValueError("features and labels differ in length")

    prior = y.mean()
    base = math.log(prior / (1.0 - prior))
    model = GbcModel(learning_rate=learning_rate, base_score=base,
                     n_features=X.shape[1])

    z = np.full(len(y), base)
    model.train_loss.append(_log_loss(y, z))
    for _ in range(n_trees):
        residuals = y - _sigmoid(z)
        tree = _fit_tree(X, residuals, max_depth)
        model.trees.append(tree)
        z += learning_rate * _tree_apply(tree, X)
        model.train_loss.append(_log_loss(y, z))
    return model


def predict_stat_type(model: GbcModel, features) -> tuple[str, float]:
    """(label, probability of ordinal) for one feature vector."""
    if isinstance(features, OrdinalityFeatures):
        X = features.to_vector()[None, :]
    else:
        X = np.asarray(features, dtype=float).reshape(1, -1)
    prob = float(model.predict_proba(X)[0])
    return (ORDINAL if prob >= 0.5 else NOMINAL), prob


def save_model(model: GbcModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_json(), fh)


def load_model(path) -> GbcModel:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    return GbcModel.from_json(doc)
