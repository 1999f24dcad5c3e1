"""Pure numpy fallback for ``ksexplain._kernels``.

Same arithmetic order as the compiled loops, so both backends return
identical integers on every input.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"

SNAP_TOL = 1e-9


def _tol(x):
    return SNAP_TOL * np.maximum(1.0, np.abs(x))


def ceil_snap(x):
    x = np.asarray(x, dtype=np.float64)
    r = np.floor(x + 0.5)
    return np.where(np.abs(x - r) <= _tol(x), r, np.ceil(x)).astype(np.int64)


def floor_snap(x):
    x = np.asarray(x, dtype=np.float64)
    r = np.floor(x + 0.5)
    return np.where(np.abs(x - r) <= _tol(x), r, np.floor(x)).astype(np.int64)


def _gamma_running_max(C_T, C_R, h, m, n):
    gam = C_T[1:] - ((m - h) * C_R[1:]) / n
    return gam, np.maximum.accumulate(gam)


def bounds(C_T, C_R, h, m, n, omega):
    q = C_T.size - 1
    gam, M = _gamma_running_max(C_T, C_R, h, m, n)
    l = np.zeros(q + 1, dtype=np.int64)
    u = np.zeros(q + 1, dtype=np.int64)
    l[1:] = np.maximum(np.maximum(ceil_snap(M - omega), h - m + C_T[1:]), 0)
    u[1:] = np.minimum(np.minimum(floor_snap(gam + omega), C_T[1:]), h)
    return l, u


def exists(C_T, C_R, h, m, n, omega):
    l, u = bounds(C_T, C_R, h, m, n, omega)
    return bool(np.all(l <= u))


def necessary(C_T, C_R, h, m, n, omega):
    gam, M = _gamma_running_max(C_T, C_R, h, m, n)
    lo = M - omega
    up = gam + omega
    if np.any(floor_snap(up) < 0):
        return False
    if np.any(ceil_snap(lo) > h):
        return False
    return bool(np.all(lo <= up + _tol(np.maximum(np.abs(lo), np.abs(up)))))


def _suffix_min(b):
    return np.minimum.accumulate(b[::-1])[::-1]


def partial_ok(l, u, cs):
    # Backward recursion ub[i-1] = min(u[i-1], ub[i] - cs[i] + cs[i-1]) unrolls
    # to ub[i] = cs[i] + min_{j >= i} (u[j] - cs[j]).
    return bool(np.all(l - cs <= _suffix_min(u - cs)))


def greedy_select(l, u, pos, k):
    q = l.size - 1
    cs = np.zeros(q + 1, dtype=np.int64)
    a = l.copy()  # l - cs
    b = u.copy()  # u - cs
    selected = []
    checks = 0
    if k <= 0:
        return np.zeros(0, dtype=np.int64), 0
    for j, p in enumerate(np.asarray(pos).tolist()):
        checks += 1
        ta = a.copy()
        tb = b.copy()
        ta[p:] -= 1
        tb[p:] -= 1
        if np.all(ta <= _suffix_min(tb)):
            a = ta
            b = tb
            cs[p:] += 1
            selected.append(j)
            if len(selected) == k:
                break
    return np.asarray(selected, dtype=np.int64), checks


def witness(l, u, dT):
    q = l.size - 1
    C = np.zeros(q + 1, dtype=np.int64)
    C[q] = u[q]
    for i in range(q, 0, -1):
        c = min(int(u[i - 1]), int(C[i]))
        C[i - 1] = max(c, int(l[i - 1]), int(C[i] - dT[i]))
    return C
