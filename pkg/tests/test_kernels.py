"""The numba kernels and the pure-NumPy fallback must agree bitwise.

Both paths run in subprocesses because the flag is read once at import.
Floats travel as hex strings so the comparison is exact, not approximate.
"""

import json
import os
import subprocess
import sys

import pytest

PROBE = r"""
import json
import numpy as np

from scoreline.regress.kernels import (
    NUMBA_ENABLED,
    best_split,
    knn_neighbor_means,
    rbf_kernel,
    svr_kernel_train,
    svr_linear_train,
)

def hexify(value):
    arr = np.asarray(value, dtype=np.float64)
    return [v.hex() for v in arr.ravel().tolist()]

rng = np.random.default_rng(2024)
out = {"numba_enabled": NUMBA_ENABLED}

X = rng.normal(size=(60, 8))
y = rng.normal(size=60)
feat, thr, sse = best_split(X, y, np.arange(8, dtype=np.int64), 2)
out["best_split"] = [int(feat), float(thr).hex(), float(sse).hex()]

train_X = rng.normal(size=(50, 5))
train_y = rng.normal(size=50)
queries = rng.normal(size=(20, 5))
out["knn"] = hexify(knn_neighbor_means(train_X, train_y, queries, 5))

Xs = rng.normal(size=(40, 4))
ys = Xs @ np.array([1.0, -0.5, 2.0, 0.0]) + rng.normal(scale=0.2, size=40)
w, b, obj, it, conv = svr_linear_train(Xs, ys, 1.0, 0.1, 0.5, 2000, 1e-9, 100)
out["svr_linear"] = {
    "w": hexify(w), "b": float(b).hex(), "obj": float(obj).hex(),
    "it": int(it), "conv": bool(conv),
}

K = rbf_kernel(Xs, Xs, 0.3)
out["rbf"] = hexify(K[:3])
beta, kb, kobj, kit, kconv = svr_kernel_train(K, ys, 1.0, 0.1, 0.5, 500, 1e-9, 100)
out["svr_kernel"] = {
    "beta": hexify(beta), "b": float(kb).hex(), "obj": float(kobj).hex(),
    "it": int(kit), "conv": bool(kconv),
}

print(json.dumps(out))
"""


def run_probe(no_numba: str) -> dict:
    env = dict(os.environ, SCORELINE_NO_NUMBA=no_numba)
    proc = subprocess.run([sys.executable, "-c", PROBE], env=env,
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


@pytest.fixture(scope="module")
def outputs():
    return run_probe("0"), run_probe("1")


def test_flag_controls_backend(outputs):
    jitted, fallback = outputs
    assert fallback["numba_enabled"] is False
    import importlib.util
    assert jitted["numba_enabled"] is (importlib.util.find_spec("numba") is not None)


def test_best_split_identical(outputs):
    jitted, fallback = outputs
    assert jitted["best_split"] == fallback["best_split"]


def test_knn_identical(outputs):
    jitted, fallback = outputs
    assert jitted["knn"] == fallback["knn"]


def test_svr_linear_identical(outputs):
    jitted, fallback = outputs
    assert jitted["svr_linear"] == fallback["svr_linear"]


def test_rbf_and_kernel_svr_identical(outputs):
    jitted, fallback = outputs
    assert jitted["rbf"] == fallback["rbf"]
    assert jitted["svr_kernel"] == fallback["svr_kernel"]
