"""Feed-forward network: dense(in->50), dropout 0.2, batch-norm, dense(50->300),
dropout 0.3, batch-norm, dense(300->2), softmax. Trained with minibatch Adam
on categorical cross-entropy.

Batch norm uses batch statistics in train mode (moving statistics updated with
momentum 0.99) and moving statistics at inference; dropout is inverted, so
inference needs no rescaling. Hidden activation defaults to ReLU and can be
set to linear, which together with zero dropout and batch-norm bypass gives
the exactly-differentiable configuration the gradient check calibrates on.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .common import TrainConfig, TrainingError

TRAINABLE_NAMES = ("W1", "b1", "gamma1", "beta1", "W2", "b2", "gamma2", "beta2", "W3", "b3")


@dataclass
class MlpConfig:
    hidden1: int = 50
    hidden2: int = 300
    n_classes: int = 2
    dropout1: float = 0.2
    dropout2: float = 0.3
    bn_momentum: float = 0.99
    bn_eps: float = 1e-5
    hidden_activation: str = "relu"  # "relu" or "linear"
    batchnorm: bool = True


@dataclass
class AdamState:
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    t: int = 0


@dataclass
class MlpModel:
    params: dict[str, np.ndarray]
    moving: dict[str, np.ndarray]
    config: MlpConfig
    input_dim: int
    adam: AdamState = field(default_factory=AdamState)
    schema_version: str = ""


def _glorot(rng, fan_in, fan_out):
    s = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-s, s, size=(fan_in, fan_out))


def build_mlp(input_dim: int, seed: int = 1, config: MlpConfig | None = None) -> MlpModel:
    """Glorot-uniform weights, zero biases, unit gamma, zero beta, unit
    moving variance."""
    if input_dim < 1:
        raise ValueError("input_dim must be at least 1")
    cfg = config or MlpConfig()
    rng = np.random.default_rng(seed)
    h1, h2, c = cfg.hidden1, cfg.hidden2, cfg.n_classes
    params = {
        "W1": _glorot(rng, input_dim, h1),
        "b1": np.zeros(h1),
        "gamma1": np.ones(h1),
        "beta1": np.zeros(h1),
        "W2": _glorot(rng, h1, h2),
        "b2": np.zeros(h2),
        "gamma2": np.ones(h2),
        "beta2": np.zeros(h2),
        "W3": _glorot(rng, h2, c),
        "b3": np.zeros(c),
    }
    moving = {
        "mean1": np.zeros(h1),
        "var1": np.ones(h1),
        "mean2": np.zeros(h2),
        "var2": np.ones(h2),
    }
    return MlpModel(params=params, moving=moving, config=cfg, input_dim=input_dim)


def param_counts(model: MlpModel) -> dict:
    """Layer-wise and total parameter counts, from the actual array shapes."""
    p = model.params
    mv = model.moving
    dense1 = p["W1"].size + p["b1"].size
    bn1 = p["gamma1"].size + p["beta1"].size + mv["mean1"].size + mv["var1"].size
    dense2 = p["W2"].size + p["b2"].size
    bn2 = p["gamma2"].size + p["beta2"].size + mv["mean2"].size + mv["var2"].size
    dense3 = p["W3"].size + p["b3"].size
    trainable = sum(p[name].size for name in TRAINABLE_NAMES)
    non_trainable = sum(a.size for a in mv.values())
    return {
        "dense1": dense1,
        "batchnorm1": bn1,
        "dense2": dense2,
        "batchnorm2": bn2,
        "dense3": dense3,
        "trainable": trainable,
        "non_trainable": non_trainable,
        "total": trainable + non_trainable,
    }


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _activate(z, kind):
    if kind == "relu":
        return np.maximum(z, 0.0)
    return z


def _forward(
    model: MlpModel,
    X: np.ndarray,
    train: bool,
    rng=None,
    dropout_off: bool = False,
    update_moving: bool = True,
):
    """Returns (probabilities, cache) where cache holds everything the
    backward pass needs."""
    cfg = model.config
    p = model.params
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.input_dim:
        raise ValueError(f"expected batch of {model.input_dim}-dim rows")
    if train and X.shape[0] < 2:
        raise ValueError("train-mode forward needs a batch of at least 2 rows")

    cache = {"X": X, "train": train}

    def dropout(a, rate, key):
        if not train or dropout_off or rate == 0.0:
            cache[key] = None
            return a
        if rng is None:
            raise ValueError("train-mode dropout needs a generator")
        scaled_mask = (rng.random(a.shape) >= rate) / (1.0 - rate)
        cache[key] = scaled_mask
        return a * scaled_mask

    def batchnorm(x, layer):
        gamma, beta = p[f"gamma{layer}"], p[f"beta{layer}"]
        if not cfg.batchnorm:
            cache[f"bn{layer}"] = None
            return x
        if train:
            mean = x.mean(axis=0)
            var = x.var(axis=0)
            if update_moving:
                mom = cfg.bn_momentum
                model.moving[f"mean{layer}"] = mom * model.moving[f"mean{layer}"] + (1 - mom) * mean
                model.moving[f"var{layer}"] = mom * model.moving[f"var{layer}"] + (1 - mom) * var
        else:
            mean = model.moving[f"mean{layer}"]
            var = model.moving[f"var{layer}"]
        inv = 1.0 / np.sqrt(var + cfg.bn_eps)
        xhat = (x - mean) * inv
        cache[f"bn{layer}"] = {"xhat": xhat, "inv": inv}
        return gamma * xhat + beta

    z1 = X @ p["W1"] + p["b1"]
    a1 = _activate(z1, cfg.hidden_activation)
    d1 = dropout(a1, cfg.dropout1, "mask1")
    n1 = batchnorm(d1, 1)
    z2 = n1 @ p["W2"] + p["b2"]
    a2 = _activate(z2, cfg.hidden_activation)
    d2 = dropout(a2, cfg.dropout2, "mask2")
    n2 = batchnorm(d2, 2)
    z3 = n2 @ p["W3"] + p["b3"]
    probs = _softmax(z3)
    cache.update({"z1": z1, "n1": n1, "z2": z2, "n2": n2, "probs": probs})
    return probs, cache


def mlp_forward(model: MlpModel, batch, mode: str = "infer", seed: int = 0) -> np.ndarray:
    """Class-probability rows for a batch. Train mode applies seeded inverted
    dropout and batch statistics (updating the moving statistics); infer mode
    uses the moving statistics and no dropout."""
    if mode not in ("train", "infer"):
        raise ValueError(f"mode must be 'train' or 'infer', got {mode!r}")
    rng = np.random.default_rng(seed) if mode == "train" else None
    probs, _ = _forward(model, batch, train=(mode == "train"), rng=rng)
    return probs


def cross_entropy(probs: np.ndarray, y_onehot: np.ndarray) -> float:
    clipped = np.clip(probs, 1e-12, 1.0)
    return float(-np.mean(np.sum(y_onehot * np.log(clipped), axis=1)))


def _bn_backward(dout, bn_cache, gamma):
    xhat, inv = bn_cache["xhat"], bn_cache["inv"]
    B = dout.shape[0]
    dgamma = np.sum(dout * xhat, axis=0)
    dbeta = np.sum(dout, axis=0)
    dxhat = dout * gamma
    dx = (inv / B) * (B * dxhat - dxhat.sum(axis=0) - xhat * np.sum(dxhat * xhat, axis=0))
    return dx, dgamma, dbeta


def _backward(model: MlpModel, cache, y_onehot: np.ndarray) -> dict[str, np.ndarray]:
    """Gradients of mean categorical cross-entropy w.r.t. every trainable
    parameter, matching the exact forward configuration in the cache."""
    cfg = model.config
    p = model.params
    B = y_onehot.shape[0]
    grads: dict[str, np.ndarray] = {}

    dz3 = (cache["probs"] - y_onehot) / B
    grads["W3"] = cache["n2"].T @ dz3
    grads["b3"] = dz3.sum(axis=0)
    dn2 = dz3 @ p["W3"].T

    if cache["bn2"] is not None:
        dd2, grads["gamma2"], grads["beta2"] = _bn_backward(dn2, cache["bn2"], p["gamma2"])
    else:
        dd2 = dn2
        grads["gamma2"] = np.zeros_like(p["gamma2"])
        grads["beta2"] = np.zeros_like(p["beta2"])
    if cache["mask2"] is not None:
        dd2 = dd2 * cache["mask2"]
    if cfg.hidden_activation == "relu":
        dd2 = dd2 * (cache["z2"] > 0)
    grads["W2"] = cache["n1"].T @ dd2
    grads["b2"] = dd2.sum(axis=0)
    dn1 = dd2 @ p["W2"].T

    if cache["bn1"] is not None:
        dd1, grads["gamma1"], grads["beta1"] = _bn_backward(dn1, cache["bn1"], p["gamma1"])
    else:
        dd1 = dn1
        grads["gamma1"] = np.zeros_like(p["gamma1"])
        grads["beta1"] = np.zeros_like(p["beta1"])
    if cache["mask1"] is not None:
        dd1 = dd1 * cache["mask1"]
    if cfg.hidden_activation == "relu":
        dd1 = dd1 * (cache["z1"] > 0)
    grads["W1"] = cache["X"].T @ dd1
    grads["b1"] = dd1.sum(axis=0)
    return grads


def adam_step(
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    state: AdamState,
    cfg: TrainConfig,
) -> tuple[dict[str, np.ndarray], AdamState]:
    """One Adam update: biased first/second moments, bias correction, then
    theta <- theta - lr * mhat / (sqrt(vhat) + eps). Mutates in place."""
    state.t += 1
    t = state.t
    for name, g in grads.items():
        if name not in state.m:
            state.m[name] = np.zeros_like(params[name])
            state.v[name] = np.zeros_like(params[name])
        state.m[name] = cfg.beta1 * state.m[name] + (1 - cfg.beta1) * g
        state.v[name] = cfg.beta2 * state.v[name] + (1 - cfg.beta2) * g * g
        m_hat = state.m[name] / (1 - cfg.beta1**t)
        v_hat = state.v[name] / (1 - cfg.beta2**t)
        params[name] = params[name] - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)
    return params, state


def train_mlp(
    X,
    y,
    cfg: TrainConfig | None = None,
    mlp_config: MlpConfig | None = None,
    schema_version: str = "",
) -> MlpModel:
    """Minibatch Adam on categorical cross-entropy with a deterministic
    per-epoch shuffle. A trailing batch of one row is folded away (batch
    statistics need at least two rows)."""
    cfg = cfg or TrainConfig(learning_rate=0.001, epochs=50)
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n = len(X)
    y_onehot = np.zeros((n, 2))
    y_onehot[np.arange(n), y] = 1.0

    model = build_mlp(X.shape[1], seed=cfg.seed, config=mlp_config)
    model.schema_version = schema_version
    rng = np.random.default_rng(cfg.seed)
    for epoch in range(cfg.epochs):
        perm = rng.permutation(n)
        for k, start in enumerate(range(0, n, cfg.batch_size)):
            idx = perm[start:start + cfg.batch_size]
            if len(idx) < 2:
                continue
            probs, cache = _forward(model, X[idx], train=True, rng=rng)
            loss = cross_entropy(probs, y_onehot[idx])
            if not np.isfinite(loss):
                raise TrainingError(f"non-finite loss at epoch {epoch} batch {k}")
            grads = _backward(model, cache, y_onehot[idx])
            adam_step(model.params, grads, model.adam, cfg)
    return model


def mlp_predict(model: MlpModel, X) -> np.ndarray:
    """Class-1 probability per row (inference mode)."""
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    probs = mlp_forward(model, X.reshape(1, -1) if single else X, mode="infer")
    return float(probs[0, 1]) if single else probs[:, 1]


def gradient_check(
    model: MlpModel,
    X,
    y,
    n_samples: int = 200,
    h: float = 1e-5,
    seed: int = 0,
    analytic_scale: float = 1.0,
) -> float:
    """Max relative error between backprop and central finite differences over
    randomly sampled trainable parameters. Dropout is disabled and batch norm
    runs on the fixed batch's statistics, so the loss is a deterministic
    function of the parameters. analytic_scale exists for fault-injection
    self-tests (a scale of 2 simulates a broken backward pass)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if len(X) < 2:
        raise ValueError("gradient check needs a batch of at least 2 rows")
    y_onehot = np.zeros((len(y), model.config.n_classes))
    y_onehot[np.arange(len(y)), y] = 1.0

    def loss_at() -> float:
        probs, _ = _forward(model, X, train=True, dropout_off=True, update_moving=False)
        return cross_entropy(probs, y_onehot)

    probs, cache = _forward(model, X, train=True, dropout_off=True, update_moving=False)
    grads = _backward(model, cache, y_onehot)

    coords = []
    for name in TRAINABLE_NAMES:
        coords.extend((name, i) for i in range(model.params[name].size))
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(coords), size=min(n_samples, len(coords)), replace=False)

    pairs = []
    for ci in chosen:
        name, flat = coords[ci]
        tensor = model.params[name]
        original = tensor.flat[flat]
        tensor.flat[flat] = original + h
        loss_plus = loss_at()
        tensor.flat[flat] = original - h
        loss_minus = loss_at()
        tensor.flat[flat] = original
        numeric = (loss_plus - loss_minus) / (2.0 * h)
        analytic = grads[name].flat[flat] * analytic_scale
        pairs.append((analytic, numeric))

    # relative error floored at 1% of the gradient scale: coordinates much
    # smaller than the overall gradient sit below finite-difference noise
    scale = max((abs(n) for _, n in pairs), default=0.0)
    max_err = 0.0
    for analytic, numeric in pairs:
        if max(abs(analytic), abs(numeric)) < 1e-9:
            continue
        err = abs(analytic - numeric) / max(abs(numeric), 0.01 * scale, 1e-8)
        max_err = max(max_err, err)
    return max_err
