"""Shared helpers: random inputs and oracles written independently of the package."""

import itertools

import numpy as np
import pytest

from detrep.polycore import HomoPoly, LinearForm


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rand_coeffs(rng, n, field="complex"):
    c = rng.standard_normal((n + 1, n + 1))
    if field == "complex":
        c = c + 1j * rng.standard_normal((n + 1, n + 1))
    i, j = np.indices((n + 1, n + 1))
    c[i + j > n] = 0
    return c.astype(complex)


def rand_homo(rng, n, field="complex"):
    return HomoPoly(rand_coeffs(rng, n, field))


def rand_form(rng, field="complex"):
    v = rng.standard_normal(3)
    if field == "complex":
        v = v + 1j * rng.standard_normal(3)
    return LinearForm(*v)


def sphere(rng, count):
    v = rng.standard_normal((count, 3)) + 1j * rng.standard_normal((count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def naive_eval(coeffs, x, y, z):
    """Monomial-sum oracle."""
    n = coeffs.shape[0] - 1
    return sum(coeffs[i, j] * x**i * y**j * z ** (n - i - j) for i in range(n + 1) for j in range(n + 1 - i))


def dict_mul(a, b):
    """Product of two coefficient triangles through a term dictionary."""
    terms = {}
    for (i, j), u in np.ndenumerate(a):
        for (k, l), v in np.ndenumerate(b):
            if u != 0 and v != 0:
                terms[(i + k, j + l)] = terms.get((i + k, j + l), 0) + u * v
    n = a.shape[0] + b.shape[0] - 2
    out = np.zeros((n + 1, n + 1), dtype=complex)
    for (i, j), v in terms.items():
        out[i, j] = v
    return out


def forms_product(forms):
    out = np.ones((1, 1), dtype=complex)
    for f in forms:
        lin = np.zeros((2, 2), dtype=complex)
        lin[1, 0], lin[0, 1], lin[0, 0] = f.r, f.s, f.t
        out = dict_mul(out, lin)
    return out


def det_oracle(M, v):
    """Determinant of ``v_x A + v_y B + v_z C`` by permutation expansion (n <= 5)."""
    P = v[0] * M[0] + v[1] * M[1] + v[2] * M[2]
    n = P.shape[0]
    total = 0j
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = (-1) ** inv
        for r in range(n):
            term = term * P[r, perm[r]]
        total += term
    return total


def rep_residual(p, M, pts):
    vals = np.array([naive_eval(p.coeffs, *v) for v in pts])
    dets = np.array([det_oracle(M, v) for v in pts])
    return float(np.max(np.abs(dets - vals) / (1 + np.abs(vals))))
