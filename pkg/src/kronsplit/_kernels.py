"""Float hot loops: batched minors and Kalmanson scans.

Each kernel has a numba-compiled loop version and a vectorised numpy
version. ``batch_minors`` and ``kalmanson_scan`` dispatch on ``USE_JIT``.
"""
from itertools import combinations

import numpy as np

from ._jit import USE_JIT, njit


@njit
def _det_small(a):
    # LU with partial pivoting on a private copy
    k = a.shape[0]
    m = a.copy()
    det = 1.0
    for c in range(k):
        p = c
        best = abs(m[c, c])
        for r in range(c + 1, k):
            if abs(m[r, c]) > best:
                best = abs(m[r, c])
                p = r
        if best == 0.0:
            return 0.0
        if p != c:
            for t in range(k):
                tmp = m[c, t]
                m[c, t] = m[p, t]
                m[p, t] = tmp
            det = -det
        piv = m[c, c]
        det *= piv
        for r in range(c + 1, k):
            f = m[r, c] / piv
            if f != 0.0:
                for t in range(c + 1, k):
                    m[r, t] -= f * m[c, t]
    return det


@njit
def _batch_minors_jit(a, rows, cols):
    count, k = rows.shape
    dets = np.empty(count)
    scales = np.empty(count)
    sub = np.empty((k, k))
    for b in range(count):
        s = 1.0
        for i in range(k):
            acc = 0.0
            for j in range(k):
                v = a[rows[b, i], cols[b, j]]
                sub[i, j] = v
                acc += v * v
            s *= np.sqrt(acc)
        dets[b] = _det_small(sub)
        scales[b] = s
    return dets, scales


def _batch_minors_numpy(a, rows, cols):
    if rows.shape[0] == 0:
        return np.empty(0), np.empty(0)
    sub = a[rows[:, :, None], cols[:, None, :]]
    dets = np.linalg.det(sub)
    scales = np.prod(np.sqrt((sub * sub).sum(axis=2)), axis=1)
    return dets, scales


def batch_minors(a, rows, cols, jit=None):
    """Determinants of ``a[rows[b]][:, cols[b]]`` for every batch row ``b``.

    Also returns the Hadamard bound (product of submatrix row norms) used to
    scale zero tests. ``rows`` and ``cols`` are int arrays of shape (count, k).
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    use = USE_JIT if jit is None else jit
    if use and rows.shape[0]:
        return _batch_minors_jit(a, rows, cols)
    return _batch_minors_numpy(a, rows, cols)


@njit
def _kalmanson_scan_jit(w, pos):
    # pos lists matrix indices in circular order; returns (min slack, quad)
    n = pos.shape[0]
    best = np.inf
    quad = np.array([-1, -1, -1, -1])
    for a in range(n):
        i = pos[a]
        for b in range(a + 1, n):
            j = pos[b]
            for c in range(b + 1, n):
                k = pos[c]
                for d in range(c + 1, n):
                    l = pos[d]
                    cross = w[i, k] + w[j, l]
                    s1 = cross - w[i, j] - w[k, l]
                    s2 = cross - w[j, k] - w[i, l]
                    s = s1 if s1 < s2 else s2
                    if s < best:
                        best = s
                        quad[0] = a
                        quad[1] = b
                        quad[2] = c
                        quad[3] = d
    return best, quad


def _kalmanson_scan_numpy(w, pos):
    n = pos.shape[0]
    if n < 4:
        return np.inf, np.array([-1, -1, -1, -1])
    q = np.array(list(combinations(range(n), 4)), dtype=np.int64)
    i, j, k, l = (pos[q[:, t]] for t in range(4))
    cross = w[i, k] + w[j, l]
    s = np.minimum(cross - w[i, j] - w[k, l], cross - w[j, k] - w[i, l])
    at = int(np.argmin(s))
    return float(s[at]), q[at]


def kalmanson_scan(w, pos, jit=None):
    """Smallest Kalmanson slack over all 4-subsets taken in circular order.

    ``pos`` holds matrix indices in circular order. Returns ``(slack, quad)``
    where ``quad`` gives positions into ``pos`` of the worst quadruple.
    """
    w = np.ascontiguousarray(w, dtype=np.float64)
    pos = np.ascontiguousarray(pos, dtype=np.int64)
    use = USE_JIT if jit is None else jit
    if use:
        return _kalmanson_scan_jit(w, pos)
    return _kalmanson_scan_numpy(w, pos)
