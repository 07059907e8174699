"""Versioned JSON model envelopes: {formatVersion, modelType, featureSchema,
preprocessor, parameters}. Loading rejects unknown format versions; floats
round-trip exactly through repr, so a reloaded model predicts bitwise
identically."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .features import FeatureSchema, Preprocessor
from .models import ForestConfig, ForestModel, LogisticModel, MlpConfig, MlpModel

FORMAT_VERSION = "1"

MODEL_TYPES = ("lr", "rf", "mlp")


class ModelFormatError(Exception):
    """Unreadable, truncated, or wrong-version model file."""


@dataclass
class ModelBundle:
    model: object
    preprocessor: Preprocessor
    schema: FeatureSchema
    model_type: str
    metadata: dict

    def predict(self, preprocessed) -> float | np.ndarray:
        from .models import mlp_predict, predict_forest, predict_logistic

        if self.model_type == "lr":
            return predict_logistic(self.model, preprocessed)
        if self.model_type == "rf":
            return predict_forest(self.model, preprocessed)
        return mlp_predict(self.model, preprocessed)


def _arr(a) -> list:
    return [float(x) for x in np.asarray(a).ravel()]


def _tensor(a) -> dict:
    a = np.asarray(a)
    return {"shape": list(a.shape), "data": _arr(a)}


def _untensor(d) -> np.ndarray:
    return np.array(d["data"], dtype=np.float64).reshape(d["shape"])


def _model_type(model) -> str:
    if isinstance(model, LogisticModel):
        return "lr"
    if isinstance(model, ForestModel):
        return "rf"
    if isinstance(model, MlpModel):
        return "mlp"
    raise TypeError(f"unsupported model {type(model).__name__}")


def _parameters(model) -> dict:
    kind = _model_type(model)
    if kind == "lr":
        return {
            "weights": _arr(model.weights),
            "bias": float(model.bias),
            "classWeights": [float(model.class_weights[0]), float(model.class_weights[1])],
            "schemaVersion": model.schema_version,
        }
    if kind == "rf":
        return {
            "trees": model.trees,
            "nFeatures": model.n_features,
            "config": {
                "nTrees": model.config.n_trees,
                "maxDepth": model.config.max_depth,
                "maxFeatures": model.config.max_features,
                "seed": model.config.seed,
            },
            "importances": _arr(model.importances),
        }
    return {
        "inputDim": model.input_dim,
        "schemaVersion": model.schema_version,
        "config": {
            "hidden1": model.config.hidden1,
            "hidden2": model.config.hidden2,
            "nClasses": model.config.n_classes,
            "dropout1": model.config.dropout1,
            "dropout2": model.config.dropout2,
            "bnMomentum": model.config.bn_momentum,
            "bnEps": model.config.bn_eps,
            "hiddenActivation": model.config.hidden_activation,
            "batchnorm": model.config.batchnorm,
        },
        "tensors": {name: _tensor(arr) for name, arr in model.params.items()},
        "moving": {name: _tensor(arr) for name, arr in model.moving.items()},
    }


def envelope_bytes(model, preprocessor: Preprocessor, schema: FeatureSchema, metadata: dict | None = None) -> bytes:
    """Canonical serialized form; byte-identical for identical models."""
    envelope = {
        "formatVersion": FORMAT_VERSION,
        "modelType": _model_type(model),
        "featureSchema": schema.to_dict(),
        "preprocessor": preprocessor.to_dict(),
        "parameters": _parameters(model),
        "metadata": metadata or {},
    }
    return json.dumps(envelope, sort_keys=True, separators=(",", ":")).encode("utf-8")


def save_model(model, preprocessor: Preprocessor, schema: FeatureSchema, path, metadata: dict | None = None) -> None:
    data = envelope_bytes(model, preprocessor, schema, metadata)
    with open(path, "wb") as fh:
        fh.write(data)


def _rebuild_model(model_type: str, params: dict):
    if model_type == "lr":
        return LogisticModel(
            weights=np.array(params["weights"], dtype=np.float64),
            bias=float(params["bias"]),
            class_weights=(float(params["classWeights"][0]), float(params["classWeights"][1])),
            schema_version=params.get("schemaVersion", ""),
        )
    if model_type == "rf":
        cfg = params["config"]
        return ForestModel(
            trees=params["trees"],
            n_features=int(params["nFeatures"]),
            config=ForestConfig(
                n_trees=int(cfg["nTrees"]),
                max_depth=int(cfg["maxDepth"]),
                max_features=int(cfg["maxFeatures"]),
                seed=int(cfg["seed"]),
            ),
            importances=np.array(params["importances"], dtype=np.float64),
        )
    cfg = params["config"]
    model = MlpModel(
        params={name: _untensor(t) for name, t in params["tensors"].items()},
        moving={name: _untensor(t) for name, t in params["moving"].items()},
        config=MlpConfig(
            hidden1=int(cfg["hidden1"]),
            hidden2=int(cfg["hidden2"]),
            n_classes=int(cfg["nClasses"]),
            dropout1=float(cfg["dropout1"]),
            dropout2=float(cfg["dropout2"]),
            bn_momentum=float(cfg["bnMomentum"]),
            bn_eps=float(cfg["bnEps"]),
            hidden_activation=cfg["hiddenActivation"],
            batchnorm=bool(cfg["batchnorm"]),
        ),
        input_dim=int(params["inputDim"]),
        schema_version=params.get("schemaVersion", ""),
    )
    return model


def load_model(path) -> ModelBundle:
    try:
        with open(path, "rb") as fh:
            envelope = json.loads(fh.read().decode("utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"{path}: unreadable model file: {exc}") from exc
    version = envelope.get("formatVersion")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"{path}: unknown formatVersion {version!r}")
    model_type = envelope.get("modelType")
    if model_type not in MODEL_TYPES:
        raise ModelFormatError(f"{path}: unknown modelType {model_type!r}")
    try:
        schema = FeatureSchema.from_dict(envelope["featureSchema"])
        preprocessor = Preprocessor.from_dict(envelope["preprocessor"])
        model = _rebuild_model(model_type, envelope["parameters"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"{path}: malformed model envelope: {exc}") from exc
    return ModelBundle(
        model=model,
        preprocessor=preprocessor,
        schema=schema,
        model_type=model_type,
        metadata=envelope.get("metadata", {}),
    )
