"""Shared training configuration and numerics for the classifiers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class TrainingError(RuntimeError):
    """Non-finite loss or invalid state during training."""


@dataclass
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 2000
    batch_size: int = 64
    l2_lambda: float = 1e-4
    seed: int = 1
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")


def sigmoid(z):
    """Numerically stable logistic function."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out
