"""k-nearest-neighbours regression on standardized features."""

from __future__ import annotations

import numpy as np

from .base import KTooLarge, ModelBase, Scaler, as_xy, standardize_apply, standardize_fit
from .kernels import knn_neighbor_means


class KnnModel(ModelBase):
    technique = "knn"

    def __init__(self, train_X: np.ndarray, train_y: np.ndarray, k: int,
                 scaler: Scaler, feature_names=None):
        super().__init__(train_X.shape[1], feature_names)
        self.train_X = np.ascontiguousarray(train_X, dtype=np.float64)
        self.train_y = np.ascontiguousarray(train_y, dtype=np.float64)
        self.k = int(k)
        self.scaler = scaler

    def _predict(self, X: np.ndarray) -> np.ndarray:
        Xs = np.ascontiguousarray(standardize_apply(self.scaler, X))
        return knn_neighbor_means(self.train_X, self.train_y, Xs, self.k)

    def payload(self) -> dict:
        return {
            "k": self.k,
            "train_X": self.train_X.tolist(),
            "train_y": self.train_y.tolist(),
            "scaler_mean": self.scaler.mean.tolist(),
            "scaler_std": self.scaler.std.tolist(),
        }


def fit_knn(X, y, k: int = 5, feature_names=None) -> KnnModel:
    """Memorize the training set; prediction averages the k nearest targets.

    Distances are Euclidean on standardized columns. Ties at the k-th
    distance keep the earlier training row.
    """
    X, y = as_xy(X, y)
    if k < 1:
        raise KTooLarge(f"k must be at least 1, got {k}")
    if k > X.shape[0]:
        raise KTooLarge(f"k={k} exceeds the {X.shape[0]} training rows")
    scaler = standardize_fit(X)
    Xs = standardize_apply(scaler, X)
    return KnnModel(Xs, y, k, scaler, feature_names=feature_names)
