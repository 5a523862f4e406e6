"""Hot numeric kernels behind the regression engines.

Each kernel is single-source: the same function body is compiled with
numba's ``@njit`` when available and runs as plain NumPy otherwise, so both
paths return identical results. Set ``SCORELINE_NO_NUMBA=1`` before import
to force the fallback (the flag is read once, at import time). The
``benchmarks/bench_kernels.py`` script times one path against the other.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = "SCORELINE_NO_NUMBA"


def _jit_factory():
    if os.environ.get(_FLAG, "") == "1":
        return None
    try:
        from numba import njit
    except ImportError:
        return None
    return njit


_njit = _jit_factory()
NUMBA_ENABLED = _njit is not None


def _maybe_jit(fn):
    if _njit is None:
        return fn
    return _njit(cache=True)(fn)


@_maybe_jit
def best_split(X, y, feat_idx, min_leaf):
    """Exhaustive CART split search for one node.

    Scans the given features in order; candidate thresholds are midpoints
    between consecutive distinct sorted values. Returns
    ``(feature, threshold, children_sse)`` minimizing the summed child SSE,
    or feature ``-1`` when no split keeps both children at ``min_leaf``
    rows. Ties resolve to the earliest feature in ``feat_idx`` and then the
    lowest threshold, guaranteed by the strict-improvement scan order.
    """
    n = X.shape[0]
    best_feat = -1
    best_thr = 0.0
    best_sse = np.inf
    for fi in range(feat_idx.shape[0]):
        j = feat_idx[fi]
        v = X[:, j].copy()
        order = np.argsort(v)
        vs = v[order]
        ys = y[order]
        cs = np.cumsum(ys)
        cs2 = np.cumsum(ys * ys)
        total = cs[n - 1]
        total2 = cs2[n - 1]
        for i in range(min_leaf, n - min_leaf + 1):
            if vs[i] <= vs[i - 1]:
                continue
            sl = cs[i - 1]
            sse_left = cs2[i - 1] - sl * sl / i
            sr = total - sl
            nr = n - i
            sse_right = (total2 - cs2[i - 1]) - sr * sr / nr
            sse = sse_left + sse_right
            if sse < best_sse:
                best_sse = sse
                best_feat = j
                thr = 0.5 * (vs[i - 1] + vs[i])
                # adjacent floats can round the midpoint up to vs[i]; keep
                # "value <= threshold goes left" consistent with this scan
                if thr >= vs[i]:
                    thr = vs[i - 1]
                best_thr = thr
    return best_feat, best_thr, best_sse


@_maybe_jit
def knn_neighbor_means(train_X, train_y, query_X, k):
    """Mean target of the k nearest training rows per query row.

    Euclidean distance on the given (already standardized) features.
    Distance ties prefer the lower training-row index: selection scans
    rows in index order with strict improvement.
    """
    n, p = train_X.shape
    m = query_X.shape[0]
    out = np.empty(m, dtype=np.float64)
    d2 = np.empty(n, dtype=np.float64)
    taken = np.zeros(n, dtype=np.bool_)
    for qi in range(m):
        for i in range(n):
            acc = 0.0
            for j in range(p):
                diff = train_X[i, j] - query_X[qi, j]
                acc += diff * diff
            d2[i] = acc
            taken[i] = False
        total = 0.0
        for _pick in range(k):
            best = -1
            best_d = np.inf
            for i in range(n):
                if not taken[i] and d2[i] < best_d:
                    best_d = d2[i]
                    best = i
            taken[best] = True
            total += train_y[best]
        out[qi] = total / k
    return out


@_maybe_jit
def svr_objective(X, y, w, b, c_reg, epsilon):
    """Primal objective 0.5*||w||^2 + C * sum(max(0, |y - Xw - b| - eps))."""
    r = y - (X @ w + b)
    excess = np.abs(r) - epsilon
    loss = 0.0
    for i in range(excess.shape[0]):
        if excess[i] > 0.0:
            loss += excess[i]
    return 0.5 * (w @ w) + c_reg * loss


@_maybe_jit
def svr_linear_train(X, y, c_reg, epsilon, lr, max_iter, tol, check_every):
    """Full-batch subgradient descent on the linear epsilon-tube objective.

    Steps follow lr/sqrt(t) on the 1/n-scaled objective (same minimizer,
    row-count-independent step scale) and the best iterate seen is kept.
    Stops early once the best objective improves by less than ``tol``
    across a ``check_every``-iteration window. Returns
    ``(w, b, best_objective, iterations, converged)``.
    """
    n, p = X.shape
    w = np.zeros(p, dtype=np.float64)
    b = 0.0
    for i in range(n):
        b += y[i]
    b /= n

    best_w = w.copy()
    best_b = b
    best_obj = svr_objective(X, y, w, b, c_reg, epsilon)
    window_best = best_obj
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        r = y - (X @ w + b)
        s = np.where(r > epsilon, 1.0, 0.0) - np.where(r < -epsilon, 1.0, 0.0)
        gw = (w - c_reg * (X.T @ s)) / n
        gb = -c_reg * np.sum(s) / n
        step = lr / np.sqrt(it)
        w = w - step * gw
        b = b - step * gb
        obj = svr_objective(X, y, w, b, c_reg, epsilon)
        if obj < best_obj:
            best_obj = obj
            best_w = w.copy()
            best_b = b
        if it % check_every == 0:
            if window_best - best_obj < tol:
                converged = True
                break
            window_best = best_obj
    return best_w, best_b, best_obj, it, converged


@_maybe_jit
def svr_kernel_objective(K, y, beta, b, c_reg, epsilon):
    """Kernelized objective 0.5*beta'Kbeta + C * sum(max(0, |y - Kbeta - b| - eps))."""
    f = K @ beta + b
    r = y - f
    excess = np.abs(r) - epsilon
    loss = 0.0
    for i in range(excess.shape[0]):
        if excess[i] > 0.0:
            loss += excess[i]
    return 0.5 * (beta @ (K @ beta)) + c_reg * loss


@_maybe_jit
def svr_kernel_train(K, y, c_reg, epsilon, lr, max_iter, tol, check_every):
    """Subgradient descent on the kernel-expansion coefficients.

    Same schedule and stopping rule as :func:`svr_linear_train`; ``K`` is
    the precomputed train-by-train kernel matrix. Returns
    ``(beta, b, best_objective, iterations, converged)``.
    """
    n = K.shape[0]
    beta = np.zeros(n, dtype=np.float64)
    b = 0.0
    for i in range(n):
        b += y[i]
    b /= n

    best_beta = beta.copy()
    best_b = b
    best_obj = svr_kernel_objective(K, y, beta, b, c_reg, epsilon)
    window_best = best_obj
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        f = K @ beta + b
        r = y - f
        s = np.where(r > epsilon, 1.0, 0.0) - np.where(r < -epsilon, 1.0, 0.0)
        gbeta = (K @ (beta - c_reg * s)) / n
        gb = -c_reg * np.sum(s) / n
        step = lr / np.sqrt(it)
        beta = beta - step * gbeta
        b = b - step * gb
        obj = svr_kernel_objective(K, y, beta, b, c_reg, epsilon)
        if obj < best_obj:
            best_obj = obj
            best_beta = beta.copy()
            best_b = b
        if it % check_every == 0:
            if window_best - best_obj < tol:
                converged = True
                break
            window_best = best_obj
    return best_beta, best_b, best_obj, it, converged


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """exp(-gamma * squared euclidean distance), computed row-vs-row."""
    a2 = np.sum(A * A, axis=1)[:, None]
    b2 = np.sum(B * B, axis=1)[None, :]
    d2 = np.maximum(a2 + b2 - 2.0 * (A @ B.T), 0.0)
    return np.exp(-gamma * d2)
