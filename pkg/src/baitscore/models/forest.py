"""Random forest of Gini-split binary trees on bootstrap samples.

Trees are plain nested dicts so serialization is direct JSON; determinism
comes from one generator per tree seeded at seed + tree index.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class ForestConfig:
    n_trees: int = 200
    max_depth: int = 7
    max_features: int = 19
    seed: int = 1


@dataclass
class ForestModel:
    trees: list[dict]
    n_features: int
    config: ForestConfig
    importances: np.ndarray = field(default=None)


def _gini(p1: np.ndarray | float):
    # binary Gini, 1 - p0^2 - p1^2 == 2 p (1 - p)
    return 2.0 * p1 * (1.0 - p1)


def _leaf(y_node: np.ndarray) -> dict:
    n = len(y_node)
    n1 = int(np.sum(y_node))
    return {"leaf": [(n - n1) / n, n1 / n], "n": n}


def _best_split(X_node: np.ndarray, y_node: np.ndarray, feature_ids: np.ndarray):
    """Best (decrease, feature, threshold) over candidate features, or None.

    Thresholds are midpoints between consecutive distinct values. Ties break
    to the lowest feature index, then the lowest threshold.
    """
    n = len(y_node)
    total1 = float(np.sum(y_node))
    parent_gini = _gini(total1 / n)
    best = None
    for f in np.sort(feature_ids):
        v = X_node[:, f]
        order = np.argsort(v, kind="stable")
        sv = v[order]
        sy = y_node[order]
        boundaries = np.flatnonzero(sv[:-1] < sv[1:])
        if len(boundaries) == 0:
            continue
        left_n = boundaries + 1
        left_1 = np.cumsum(sy)[boundaries]
        right_n = n - left_n
        right_1 = total1 - left_1
        weighted = (left_n * _gini(left_1 / left_n) + right_n * _gini(right_1 / right_n)) / n
        decrease = parent_gini - weighted
        k = int(np.argmax(decrease))
        if decrease[k] <= 0.0:
            continue
        threshold = 0.5 * (sv[boundaries[k]] + sv[boundaries[k] + 1])
        if best is None or decrease[k] > best[0]:
            best = (float(decrease[k]), int(f), float(threshold))
    return best


def _grow(X, y, idx, depth, cfg, rng, importance, n_total):
    y_node = y[idx]
    n = len(idx)
    if depth >= cfg.max_depth or n < 2 or len(np.unique(y_node)) == 1:
        return _leaf(y_node)
    k = min(cfg.max_features, X.shape[1])
    feature_ids = rng.choice(X.shape[1], size=k, replace=False)
    found = _best_split(X[idx], y_node, feature_ids)
    if found is None:
        return _leaf(y_node)
    decrease, f, threshold = found
    importance[f] += (n / n_total) * decrease
    mask = X[idx, f] < threshold
    left = _grow(X, y, idx[mask], depth + 1, cfg, rng, importance, n_total)
    right = _grow(X, y, idx[~mask], depth + 1, cfg, rng, importance, n_total)
    return {
        "feature": f,
        "threshold": threshold,
        "n": n,
        "decrease": decrease,
        "left": left,
        "right": right,
    }


def train_forest(X, y, cfg: ForestConfig | None = None) -> ForestModel:
    """Each tree sees n bootstrap draws and greedy Gini splits over
    max_features features sampled without replacement per split; growth stops
    at max_depth, purity, or fewer than 2 samples."""
    cfg = cfg or ForestConfig()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n, d = X.shape
    if n < 2:
        raise ValueError("need at least 2 rows")
    trees = []
    raw_importance = np.zeros(d)
    for t in range(cfg.n_trees):
        rng = np.random.default_rng(cfg.seed + t)
        sample = rng.integers(0, n, size=n)
        tree_importance = np.zeros(d)
        tree = _grow(X, y, sample, 0, cfg, rng, tree_importance, n)
        trees.append(tree)
        raw_importance += tree_importance
    raw_importance /= cfg.n_trees
    total = raw_importance.sum()
    importances = raw_importance / total if total > 0 else np.zeros(d)
    return ForestModel(trees=trees, n_features=d, config=cfg, importances=importances)


def _walk(tree: dict, x: np.ndarray) -> float:
    node = tree
    while "leaf" not in node:
        node = node["left"] if x[node["feature"]] < node["threshold"] else node["right"]
    return node["leaf"][1]


def predict_forest(model: ForestModel, x) -> float | np.ndarray:
    """Mean over trees of the leaf class-1 frequency."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.n_features:
        raise ValueError(f"expected {model.n_features} features, got {x.shape[-1]}")
    if x.ndim == 1:
        return float(np.mean([_walk(t, x) for t in model.trees]))
    return np.array([np.mean([_walk(t, row) for t in model.trees]) for row in x])


def forest_importances(model: ForestModel) -> np.ndarray:
    """Mean decrease in Gini impurity per feature, sample-count weighted and
    normalized to sum 1 (recomputed from the stored trees)."""
    raw = np.zeros(model.n_features)

    def visit(node, n_root):
        if "leaf" in node:
            return
        raw[node["feature"]] += (node["n"] / n_root) * node["decrease"]
        visit(node["left"], n_root)
        visit(node["right"], n_root)

    for tree in model.trees:
        visit(tree, tree["n"] if "n" in tree else 1)
    raw /= len(model.trees)
    total = raw.sum()
    return raw / total if total > 0 else raw
