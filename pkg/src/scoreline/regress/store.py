"""Versioned JSON persistence for trained models."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .base import ModelBase, Scaler
from .forest import forest_from_payload
from .knn import KnnModel
from .linear import LinearModel
from .svr import SvrModel
from .tree import TreeModel, node_from_dict

FORMAT_VERSION = 1


class StoreError(Exception):
    pass


class BadArtifact(StoreError):
    pass


class UnsupportedVersion(StoreError):
    pass


def save_model(model: ModelBase, path) -> None:
    envelope = {
        "format_version": FORMAT_VERSION,
        "technique": model.technique,
        "n_features": model.n_features,
        "feature_names": list(model.feature_names) if model.feature_names else None,
        "fingerprint": model.fingerprint,
        "payload": model.payload(),
    }
    Path(path).write_text(json.dumps(envelope, sort_keys=True, indent=1) + "\n")


def _scaler_from(payload: dict) -> Scaler:
    return Scaler(mean=np.asarray(payload["scaler_mean"], dtype=np.float64),
                  std=np.asarray(payload["scaler_std"], dtype=np.float64))


def load_model(path) -> ModelBase:
    try:
        envelope = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise BadArtifact(f"cannot read model artifact {path}: {exc}") from exc
    if not isinstance(envelope, dict) or "format_version" not in envelope:
        raise BadArtifact(f"{path} is not a model artifact")
    version = envelope["format_version"]
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(
            f"{path} uses format_version={version}, this build reads {FORMAT_VERSION}")
    try:
        technique = envelope["technique"]
        names = envelope["feature_names"]
        payload = envelope["payload"]
        n_features = int(envelope["n_features"])
        if technique == "lr":
            model = LinearModel(
                coef=np.asarray(payload["coef"], dtype=np.float64),
                intercept=payload["intercept"], ridged=payload["ridged"],
                feature_names=names)
        elif technique == "knn":
            model = KnnModel(
                train_X=np.asarray(payload["train_X"], dtype=np.float64),
                train_y=np.asarray(payload["train_y"], dtype=np.float64),
                k=payload["k"], scaler=_scaler_from(payload),
                feature_names=names)
        elif technique == "dtr":
            model = TreeModel(
                root=node_from_dict(payload["root"]), n_features=n_features,
                max_depth=payload["max_depth"], min_leaf=payload["min_leaf"],
                feature_names=names)
        elif technique == "rfr":
            model = forest_from_payload(payload, n_features, feature_names=names)
        elif technique == "svr":
            kernel = payload["kernel"]
            model = SvrModel(
                kernel, _scaler_from(payload), payload["params"],
                payload["status"], n_features, feature_names=names,
                w=payload.get("w"), b=payload["b"], beta=payload.get("beta"),
                train_X=payload.get("train_X"), gamma=payload.get("gamma"))
        else:
            raise BadArtifact(f"{path} holds unknown technique {technique!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise BadArtifact(f"{path} is missing fields: {exc}") from exc
    if model.n_features != n_features:
        raise BadArtifact(
            f"{path} declares {n_features} features but payload encodes {model.n_features}")
    if envelope.get("fingerprint") != model.fingerprint:
        raise BadArtifact(f"{path} fingerprint does not match its feature layout")
    return model
