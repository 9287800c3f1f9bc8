# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same signatures and layout as ``detrep._pykernels``."""

import numpy as np


def poly_mul(a, b):
    cdef const double complex[:, ::1] av = np.ascontiguousarray(a, dtype=complex)
    cdef const double complex[:, ::1] bv = np.ascontiguousarray(b, dtype=complex)
    cdef Py_ssize_t n = av.shape[0] - 1
    cdef Py_ssize_t m = bv.shape[0] - 1
    out = np.zeros((n + m + 1, n + m + 1), dtype=complex)
    cdef double complex[:, ::1] ov = out
    cdef Py_ssize_t i, j, k, l
    cdef double complex aij
    for i in range(n + 1):
        for j in range(n + 1 - i):
            aij = av[i, j]
            if aij == 0:
                continue
            for k in range(m + 1):
                for l in range(m + 1 - k):
                    ov[i + k, j + l] += aij * bv[k, l]
    return out


def poly_eval(c, pts):
    cdef const double complex[:, ::1] cv = np.ascontiguousarray(c, dtype=complex)
    cdef const double complex[:, ::1] pv = np.ascontiguousarray(np.atleast_2d(pts), dtype=complex)
    cdef Py_ssize_t n = cv.shape[0] - 1
    cdef Py_ssize_t npts = pv.shape[0]
    out = np.empty(npts, dtype=complex)
    cdef double complex[::1] ov = out
    cdef double complex zpow[16]
    cdef double complex x, y, z, h, r
    cdef Py_ssize_t p, i, j, k, d
    if n > 15:
        raise ValueError("degree too large for compiled kernel")
    for p in range(npts):
        x = pv[p, 0]
        y = pv[p, 1]
        z = pv[p, 2]
        zpow[0] = 1
        for k in range(1, n + 1):
            zpow[k] = zpow[k - 1] * z
        r = 0
        for i in range(n, -1, -1):
            d = n - i
            h = cv[i, d]
            for j in range(d - 1, -1, -1):
                h = h * y + cv[i, j] * zpow[d - j]
            r = r * x + h
        ov[p] = r
    return out


cdef void _mul_into(const double complex[:, ::1] a, Py_ssize_t n,
                    const double complex[:, ::1] b, Py_ssize_t m,
                    double complex[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t i, j, k, l
    cdef double complex aij
    for i in range(n + m + 1):
        for j in range(n + m + 1):
            out[i, j] = 0
    for i in range(n + 1):
        for j in range(n + 1 - i):
            aij = a[i, j]
            if aij == 0:
                continue
            for k in range(m + 1):
                for l in range(m + 1 - k):
                    out[i + k, j + l] += aij * b[k, l]


def poly_substitute(c, T):
    cdef const double complex[:, ::1] cv = np.ascontiguousarray(c, dtype=complex)
    cdef const double complex[:, ::1] tv = np.ascontiguousarray(T, dtype=complex)
    cdef Py_ssize_t n = cv.shape[0] - 1
    cdef Py_ssize_t s = n + 1
    # powers[v, e] holds (row v of T)^e as an s-by-s coefficient array
    pw_arr = np.zeros((3, s, s, s), dtype=complex)
    cdef double complex[:, :, :, ::1] pw = pw_arr
    lin_arr = np.zeros((3, 2, 2), dtype=complex)
    cdef double complex[:, :, ::1] lin = lin_arr
    cdef Py_ssize_t v, e, i, j, a, b
    for v in range(3):
        lin[v, 1, 0] = tv[v, 0]
        lin[v, 0, 1] = tv[v, 1]
        lin[v, 0, 0] = tv[v, 2]
        pw[v, 0, 0, 0] = 1
        for e in range(1, s):
            _mul_into(pw[v, e - 1], e - 1, lin[v], 1, pw[v, e])
    out = np.zeros((s, s), dtype=complex)
    cdef double complex[:, ::1] ov = out
    tmp_arr = np.zeros((s, s), dtype=complex)
    cdef double complex[:, ::1] tmp = tmp_arr
    tmp2_arr = np.zeros((s, s), dtype=complex)
    cdef double complex[:, ::1] tmp2 = tmp2_arr
    cdef double complex cij
    with nogil:
        for i in range(n + 1):
            for j in range(n + 1 - i):
                cij = cv[i, j]
                if cij == 0:
                    continue
                _mul_into(pw[0, i], i, pw[1, j], j, tmp)
                _mul_into(tmp, i + j, pw[2, n - i - j], n - i - j, tmp2)
                for a in range(s):
                    for b in range(s - a):
                        ov[a, b] += cij * tmp2[a, b]
    return out


cdef void _kron_diff(const double complex[:, ::1] P, const double complex[:, ::1] Q,
                     const double complex[:, ::1] R, const double complex[:, ::1] S,
                     double complex[:, ::1] out) noexcept nogil:
    # out = kron(P, Q) - kron(R, S)
    cdef Py_ssize_t n1 = P.shape[0]
    cdef Py_ssize_t n2 = Q.shape[0]
    cdef Py_ssize_t i, j, k, l
    cdef double complex p, r
    for i in range(n1):
        for j in range(n1):
            p = P[i, j]
            r = R[i, j]
            for k in range(n2):
                for l in range(n2):
                    out[i * n2 + k, j * n2 + l] = p * Q[k, l] - r * S[k, l]


def kron_deltas(A1, B1, C1, A2, B2, C2):
    cdef const double complex[:, ::1] a1 = np.ascontiguousarray(A1, dtype=complex)
    cdef const double complex[:, ::1] b1 = np.ascontiguousarray(B1, dtype=complex)
    cdef const double complex[:, ::1] c1 = np.ascontiguousarray(C1, dtype=complex)
    cdef const double complex[:, ::1] a2 = np.ascontiguousarray(A2, dtype=complex)
    cdef const double complex[:, ::1] b2 = np.ascontiguousarray(B2, dtype=complex)
    cdef const double complex[:, ::1] c2 = np.ascontiguousarray(C2, dtype=complex)
    cdef Py_ssize_t N = a1.shape[0] * a2.shape[0]
    d0 = np.empty((N, N), dtype=complex)
    d1 = np.empty((N, N), dtype=complex)
    d2 = np.empty((N, N), dtype=complex)
    cdef double complex[:, ::1] v0 = d0
    cdef double complex[:, ::1] v1 = d1
    cdef double complex[:, ::1] v2 = d2
    with nogil:
        _kron_diff(b1, c2, c1, b2, v0)
        _kron_diff(c1, a2, a1, c2, v1)
        _kron_diff(a1, b2, b1, a2, v2)
    return d0, d1, d2
