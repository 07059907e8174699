"""Logistic regression trained by full-batch gradient descent on
class-weighted binary cross-entropy with L2 regularization."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .common import TrainConfig, TrainingError, sigmoid

GRAD_TOL = 1e-6


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    class_weights: tuple[float, float]
    schema_version: str = ""
    n_iterations: int = 0
    final_loss: float = field(default=float("nan"))


def balanced_class_weights(labels) -> tuple[float, float]:
    """w_c = n / (2 * n_c); inverse-frequency weights that give both classes
    equal total mass."""
    y = np.asarray(labels)
    n = len(y)
    n1 = int(np.sum(y == 1))
    n0 = n - n1
    if n0 == 0 or n1 == 0:
        raise ValueError("both classes must be present to balance weights")
    return n / (2.0 * n0), n / (2.0 * n1)


def _loss(X, y, sw, w, b, l2):
    z = X @ w + b
    # log(1 + e^z) - y*z, stable for either sign of z
    per_row = np.logaddexp(0.0, z) - y * z
    return float(np.mean(sw * per_row) + 0.5 * l2 * np.dot(w, w))


def train_logistic(
    X,
    y,
    cfg: TrainConfig | None = None,
    class_weights: tuple[float, float] | None = None,
    schema_version: str = "",
) -> LogisticModel:
    """Full-batch gradient descent from zero weights until the gradient
    infinity-norm drops below 1e-6 or the epoch cap. The step is halved
    whenever it would increase the loss, so descent is monotone."""
    cfg = cfg or TrainConfig()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, d = X.shape
    if class_weights is None:
        class_weights = balanced_class_weights(y)
    w0, w1 = class_weights
    sw = np.where(y == 1, w1, w0)

    w = np.zeros(d)
    b = 0.0
    lr = cfg.learning_rate
    loss = _loss(X, y, sw, w, b, cfg.l2_lambda)
    iters = 0
    for epoch in range(cfg.epochs):
        p = sigmoid(X @ w + b)
        r = sw * (p - y)
        gw = X.T @ r / n + cfg.l2_lambda * w
        gb = float(np.sum(r) / n)
        if max(np.max(np.abs(gw)), abs(gb)) < GRAD_TOL:
            break
        w_new = w - lr * gw
        b_new = b - lr * gb
        new_loss = _loss(X, y, sw, w_new, b_new, cfg.l2_lambda)
        if not np.isfinite(new_loss):
            raise TrainingError(f"non-finite loss at iteration {epoch}")
        if new_loss > loss:
            lr *= 0.5
            continue
        w, b, loss = w_new, b_new, new_loss
        iters = epoch + 1
    return LogisticModel(
        weights=w,
        bias=b,
        class_weights=(float(w0), float(w1)),
        schema_version=schema_version,
        n_iterations=iters,
        final_loss=loss,
    )


def predict_logistic(model: LogisticModel, x) -> float | np.ndarray:
    """Probability of class 1: sigmoid(w . x + b). Accepts one vector or a
    row matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != len(model.weights):
        raise ValueError(f"expected {len(model.weights)} features, got {x.shape[-1]}")
    z = x @ model.weights + model.bias
    p = sigmoid(z)
    return float(p) if np.ndim(p) == 0 else p
