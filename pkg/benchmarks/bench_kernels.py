#!/usr/bin/env python3
"""Time the numba-compiled kernels against the pure-NumPy fallback.

The kernel implementation is selected once per process (the
SCORELINE_NO_NUMBA flag is read at import), so this script re-invokes
itself in two subprocesses, one per path, and prints a comparison table.
JIT compilation happens before timing starts; the first numba run on a
cold cache therefore spends a few extra seconds before results appear.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))


def make_inputs():
    import numpy as np

    rng = np.random.default_rng(42)
    n, p = 600, 52
    X = rng.normal(size=(n, p))
    y = X @ rng.normal(size=p) + rng.normal(scale=0.5, size=n)
    Q = rng.normal(size=(200, p))
    feat_idx = np.arange(p, dtype=np.int64)
    return X, y, Q, feat_idx


def run_benchmarks(repeat: int) -> dict:
    import numpy as np

    from scoreline.regress import kernels

    X, y, Q, feat_idx = make_inputs()
    Xc = np.ascontiguousarray(X)
    yc = np.ascontiguousarray(y)
    Qc = np.ascontiguousarray(Q)

    cases = {
        "best_split (600x52)": lambda: kernels.best_split(Xc, yc, feat_idx, 5),
        "knn_neighbor_means (600 train, 200 query, k=5)":
            lambda: kernels.knn_neighbor_means(Xc, yc, Qc, 5),
        "svr_linear_train (600x52, 2000 iter)":
            lambda: kernels.svr_linear_train(Xc, yc, 1.0, 0.1, 0.5, 2000,
                                             0.0, 2001),
    }

    results = {}
    for name, fn in cases.items():
        fn()  # warmup / JIT compile outside the timed region
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        results[name] = best
    return {"numba": kernels.NUMBA_ENABLED, "timings": results}


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--inner", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.inner:
        print(json.dumps(run_benchmarks(args.repeat)))
        return 0

    rows = {}
    for label, extra_env in (("numba", {"SCORELINE_NO_NUMBA": "0"}),
                             ("fallback", {"SCORELINE_NO_NUMBA": "1"})):
        env = dict(os.environ)
        env.update(extra_env)
        proc = subprocess.run(
            [sys.executable, __file__, "--inner", "--repeat", str(args.repeat)],
            capture_output=True, text=True, env=env)
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            return proc.returncode
        payload = json.loads(proc.stdout.strip().splitlines()[-1])
        if label == "numba" and not payload["numba"]:
            print("note: numba unavailable in this environment; both runs "
                  "use the NumPy fallback")
        rows[label] = payload["timings"]

    width = max(len(name) for name in rows["numba"])
    print(f"{'kernel':<{width}}  {'numba':>10}  {'fallback':>10}  speedup")
    for name in rows["numba"]:
        jit = rows["numba"][name]
        plain = rows["fallback"][name]
        print(f"{name:<{width}}  {jit * 1e3:>8.2f}ms  {plain * 1e3:>8.2f}ms  "
              f"{plain / jit:>6.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
