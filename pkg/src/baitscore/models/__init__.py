from .common import TrainConfig, TrainingError, sigmoid
from .forest import ForestConfig, ForestModel, forest_importances, predict_forest, train_forest
from .logistic import LogisticModel, balanced_class_weights, predict_logistic, train_logistic
from .mlp import (
    AdamState,
    MlpConfig,
    MlpModel,
    adam_step,
    build_mlp,
    cross_entropy,
    gradient_check,
    mlp_forward,
    mlp_predict,
    param_counts,
    train_mlp,
)

__all__ = [
    "TrainConfig", "TrainingError", "sigmoid",
    "ForestConfig", "ForestModel", "forest_importances", "predict_forest", "train_forest",
    "LogisticModel", "balanced_class_weights", "predict_logistic", "train_logistic",
    "AdamState", "MlpConfig", "MlpModel", "adam_step", "build_mlp", "cross_entropy",
    "gradient_check", "mlp_forward", "mlp_predict", "param_counts", "train_mlp",
]
