"""NumPy implementation of the hot kernels.

Homogeneous polynomials of degree n are stored as dense complex arrays ``c``
of shape ``(n + 1, n + 1)`` where ``c[i, j]`` multiplies ``x**i y**j
z**(n-i-j)``; entries with ``i + j > n`` are zero.  Every function here has a
twin with the same signature in ``_ckernels.pyx``.
"""

import numpy as np


def poly_mul(a, b):
    """Product of two homogeneous polynomials (2-D triangular convolution)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = a.shape[0] - 1
    m = b.shape[0] - 1
    out = np.zeros((n + m + 1, n + m + 1), dtype=complex)
    for i in range(n + 1):
        for j in range(n + 1 - i):
            aij = a[i, j]
            if aij != 0:
                out[i:i + m + 1, j:j + m + 1] += aij * b
    return out


def poly_eval(c, pts):
    """Evaluate at each row ``(x, y, z)`` of ``pts`` with a homogeneous Horner scheme."""
    c = np.asarray(c, dtype=complex)
    pts = np.atleast_2d(np.asarray(pts, dtype=complex))
    n = c.shape[0] - 1
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    zpow = np.ones((n + 1, len(pts)), dtype=complex)
    for k in range(1, n + 1):
        zpow[k] = zpow[k - 1] * z
    result = np.zeros(len(pts), dtype=complex)
    for i in range(n, -1, -1):
        d = n - i
        h = np.full(len(pts), c[i, d], dtype=complex)
        for j in range(d - 1, -1, -1):
            h = h * y + c[i, j] * zpow[d - j]
        result = result * x + h
    return result


def _linear(row):
    f = np.zeros((2, 2), dtype=complex)
    f[1, 0], f[0, 1], f[0, 0] = row
    return f


def poly_substitute(c, T):
    """Coefficients of ``v -> p(T v)``."""
    c = np.asarray(c, dtype=complex)
    T = np.asarray(T, dtype=complex)
    n = c.shape[0] - 1
    forms = [_linear(T[k]) for k in range(3)]
    powers = []
    for f in forms:
        pw = [np.ones((1, 1), dtype=complex)]
        for _ in range(n):
            pw.append(poly_mul(pw[-1], f))
        powers.append(pw)
    out = np.zeros((n + 1, n + 1), dtype=complex)
    for i in range(n + 1):
        for j in range(n + 1 - i):
            if c[i, j] == 0:
                continue
            term = poly_mul(poly_mul(powers[0][i], powers[1][j]), powers[2][n - i - j])
            out += c[i, j] * term
    return out


def kron_deltas(A1, B1, C1, A2, B2, C2):
    """Operator determinants of a two-parameter pencil pair."""
    d0 = np.kron(B1, C2) - np.kron(C1, B2)
    d1 = np.kron(C1, A2) - np.kron(A1, C2)
    d2 = np.kron(A1, B2) - np.kron(B1, A2)
    return d0, d1, d2
