# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops for the bound, existence and partial-explanation checks.

Signatures and results match ``ksexplain._pykernels`` exactly.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor, ceil, fabs, INFINITY
from libc.stdint cimport int64_t

cnp.import_array()

BACKEND = "cython"

cdef double SNAP_TOL = 1e-9


cdef inline double _snap_tol(double x) nogil:
    cdef double ax = fabs(x)
    return SNAP_TOL * (ax if ax > 1.0 else 1.0)


cdef inline int64_t _ceil_snap(double x) nogil:
    cdef double r = floor(x + 0.5)
    if fabs(x - r) <= _snap_tol(x):
        return <int64_t>r
    return <int64_t>ceil(x)


cdef inline int64_t _floor_snap(double x) nogil:
    cdef double r = floor(x + 0.5)
    if fabs(x - r) <= _snap_tol(x):
        return <int64_t>r
    return <int64_t>floor(x)


cdef inline int64_t _max3(int64_t a, int64_t b, int64_t c) nogil:
    if b > a:
        a = b
    if c > a:
        a = c
    return a


cdef inline int64_t _min3(int64_t a, int64_t b, int64_t c) nogil:
    if b < a:
        a = b
    if c < a:
        a = c
    return a


def bounds(const int64_t[::1] C_T, const int64_t[::1] C_R, int64_t h, int64_t m,
           int64_t n, double omega):
    cdef Py_ssize_t q = C_T.shape[0] - 1
    cdef Py_ssize_t i
    cdef double gam, M = -INFINITY
    l_arr = np.zeros(q + 1, dtype=np.int64)
    u_arr = np.zeros(q + 1, dtype=np.int64)
    cdef int64_t[::1] l = l_arr
    cdef int64_t[::1] u = u_arr
    with nogil:
        for i in range(1, q + 1):
            gam = <double>C_T[i] - (<double>((m - h) * C_R[i])) / <double>n
            if gam > M:
                M = gam
            l[i] = _max3(_ceil_snap(M - omega), h - m + C_T[i], 0)
            u[i] = _min3(_floor_snap(gam + omega), C_T[i], h)
    return l_arr, u_arr


cdef bint _exists(const int64_t[::1] C_T, const int64_t[::1] C_R, int64_t h, int64_t m,
                  int64_t n, double omega) nogil:
    cdef Py_ssize_t q = C_T.shape[0] - 1
    cdef Py_ssize_t i
    cdef double gam, M = -INFINITY
    cdef int64_t lo, up
    for i in range(1, q + 1):
        gam = <double>C_T[i] - (<double>((m - h) * C_R[i])) / <double>n
        if gam > M:
            M = gam
        lo = _max3(_ceil_snap(M - omega), h - m + C_T[i], 0)
        up = _min3(_floor_snap(gam + omega), C_T[i], h)
        if lo > up:
            return False
    return True


def exists(const int64_t[::1] C_T, const int64_t[::1] C_R, int64_t h, int64_t m,
           int64_t n, double omega):
    cdef bint ok
    with nogil:
        ok = _exists(C_T, C_R, h, m, n, omega)
    return ok


cdef bint _necessary(const int64_t[::1] C_T, const int64_t[::1] C_R, int64_t h, int64_t m,
                     int64_t n, double omega) nogil:
    cdef Py_ssize_t q = C_T.shape[0] - 1
    cdef Py_ssize_t i
    cdef double gam, lo_real, up_real, big, M = -INFINITY
    for i in range(1, q + 1):
        gam = <double>C_T[i] - (<double>((m - h) * C_R[i])) / <double>n
        if gam > M:
            M = gam
        lo_real = M - omega
        up_real = gam + omega
        if _floor_snap(up_real) < 0:
            return False
        if _ceil_snap(lo_real) > h:
            return False
        big = fabs(lo_real) if fabs(lo_real) > fabs(up_real) else fabs(up_real)
        if lo_real > up_real + _snap_tol(big):
            return False
    return True


def necessary(const int64_t[::1] C_T, const int64_t[::1] C_R, int64_t h, int64_t m,
              int64_t n, double omega):
    cdef bint ok
    with nogil:
        ok = _necessary(C_T, C_R, h, m, n, omega)
    return ok


cdef bint _partial_ok(const int64_t[::1] l, const int64_t[::1] u, const int64_t[::1] cs) nogil:
    cdef Py_ssize_t q = l.shape[0] - 1
    cdef Py_ssize_t i
    cdef int64_t ub = u[q]
    if l[q] > ub:
        return False
    for i in range(q, 0, -1):
        ub = ub - cs[i] + cs[i - 1]
        if u[i - 1] < ub:
            ub = u[i - 1]
        if l[i - 1] > ub:
            return False
    return True


def partial_ok(const int64_t[::1] l, const int64_t[::1] u, const int64_t[::1] cs):
    cdef bint ok
    with nogil:
        ok = _partial_ok(l, u, cs)
    return ok


cdef bint _trial_ok(const int64_t[::1] l, const int64_t[::1] u, int64_t[::1] cs,
                    Py_ssize_t q, Py_ssize_t p) nogil:
    # cs with one extra copy of V[p - 1], without materialising it
    cdef Py_ssize_t i
    cdef int64_t ub = u[q]
    if l[q] > ub:
        return False
    for i in range(q, 0, -1):
        ub = ub - cs[i] + cs[i - 1]
        if i == p:
            ub -= 1
        if u[i - 1] < ub:
            ub = u[i - 1]
        if l[i - 1] > ub:
            return False
    return True


def greedy_select(const int64_t[::1] l, const int64_t[::1] u, const int64_t[::1] pos,
                  int64_t k):
    """Scan candidates in order; keep each one whose addition stays a partial explanation.

    ``pos[j]`` is the 1-based base-vector position of the j-th candidate.
    Returns (indices into ``pos`` of kept candidates, number of checks).
    """
    cdef Py_ssize_t q = l.shape[0] - 1
    cdef Py_ssize_t ncand = pos.shape[0]
    cdef Py_ssize_t j, i, p
    cdef int64_t taken = 0, checks = 0
    cs_arr = np.zeros(q + 1, dtype=np.int64)
    sel_arr = np.empty(k if k > 0 else 0, dtype=np.int64)
    cdef int64_t[::1] cs = cs_arr
    cdef int64_t[::1] sel = sel_arr
    if k <= 0:
        return sel_arr, 0
    with nogil:
        for j in range(ncand):
            p = pos[j]
            checks += 1
            if _trial_ok(l, u, cs, q, p):
                for i in range(p, q + 1):
                    cs[i] += 1
                sel[taken] = j
                taken += 1
                if taken == k:
                    break
    return sel_arr[:taken], checks


def witness(const int64_t[::1] l, const int64_t[::1] u, const int64_t[::1] dT):
    cdef Py_ssize_t q = l.shape[0] - 1
    cdef Py_ssize_t i
    cdef int64_t c
    C_arr = np.zeros(q + 1, dtype=np.int64)
    cdef int64_t[::1] C = C_arr
    C[q] = u[q]
    for i in range(q, 0, -1):
        c = u[i - 1] if u[i - 1] < C[i] else C[i]
        if c < l[i - 1]:
            c = l[i - 1]
        if c < C[i] - dT[i]:
            c = C[i] - dT[i]
        C[i - 1] = c
    return C_arr
