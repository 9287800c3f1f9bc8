"""Bivariate polynomials in homogeneous form and projective changes of coordinates.

A homogeneous polynomial of degree ``n`` in ``x, y, z`` is stored as a dense
``(n + 1, n + 1)`` complex array ``c`` with ``c[i, j]`` the coefficient of
``x**i * y**j * z**(n - i - j)``.  The affine polynomial ``p(x, y)`` uses the
same layout with ``c[i, j]`` multiplying ``x**i * y**j``, so homogenization
and dehomogenization only change the interpretation of the array.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .errors import DegenerateInput
from .rng import SplitMix64


def _triangle_mask(n):
    i, j = np.indices((n + 1, n + 1))
    return i + j <= n


def _frozen(arr):
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class HomoPoly:
    """Homogeneous polynomial in ``x, y, z``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
            raise ValueError(f"coefficient array must be square, got shape {c.shape}")
        n = c.shape[0] - 1
        if np.any(c[~_triangle_mask(n)] != 0):
            raise ValueError("coefficients with i + j > degree must be zero")
        object.__setattr__(self, "coeffs", _frozen(c))

    @classmethod
    def zero(cls, degree):
        return cls(np.zeros((degree + 1, degree + 1), dtype=complex))

    @classmethod
    def from_terms(cls, degree, terms):
        """Build from a mapping ``{(i, j): coefficient}``."""
        c = np.zeros((degree + 1, degree + 1), dtype=complex)
        for (i, j), v in terms.items():
            if i < 0 or j < 0 or i + j > degree:
                raise ValueError(f"monomial ({i}, {j}) out of range for degree {degree}")
            c[i, j] += v
        return cls(c)

    @property
    def degree(self):
        return self.coeffs.shape[0] - 1

    def coef(self, i, j):
        """Coefficient of ``x**i y**j z**(n-i-j)``."""
        return complex(self.coeffs[i, j])

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs)))

    def is_zero(self, tol=0.0):
        return self.max_abs() <= tol

    @property
    def is_deficient(self):
        """True when all coefficients of total x,y-degree n vanish (z divides p)."""
        n = self.degree
        return all(self.coeffs[i, n - i] == 0 for i in range(n + 1))

    def __call__(self, x, y, z):
        return complex(kernels.poly_eval(self.coeffs, [[x, y, z]])[0])

    def evaluate_many(self, pts):
        return kernels.poly_eval(self.coeffs, pts)

    def _check_same_degree(self, other):
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if not isinstance(other, HomoPoly):
            return NotImplemented
        self._check_same_degree(other)
        return HomoPoly(self.coeffs + other.coeffs)

    def __sub__(self, other):
        if not isinstance(other, HomoPoly):
            return NotImplemented
        self._check_same_degree(other)
        return HomoPoly(self.coeffs - other.coeffs)

    def __neg__(self):
        return HomoPoly(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, HomoPoly):
            return HomoPoly(kernels.poly_mul(self.coeffs, other.coeffs))
        if isinstance(other, LinearForm):
            return self * other.as_poly()
        if np.isscalar(other):
            return HomoPoly(self.coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return HomoPoly(self.coeffs * other)
        return NotImplemented

    def allclose(self, other, rtol=1e-10):
        self._check_same_degree(other)
        scale = max(self.norm(), other.norm(), 1e-300)
        return float(np.linalg.norm(self.coeffs - other.coeffs)) <= rtol * scale

    def __repr__(self):
        terms = []
        n = self.degree
        for i in range(n, -1, -1):
            for j in range(n - i, -1, -1):
                v = self.coeffs[i, j]
                if v != 0:
                    terms.append(f"({v:.6g})x^{i}y^{j}z^{n - i - j}")
        return f"HomoPoly(degree={n}: {' + '.join(terms) or '0'})"


@dataclass(frozen=True, eq=False)
class AffinePoly:
    """Polynomial ``p(x, y) = sum p_ij x**i y**j`` with declared degree."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
            raise ValueError(f"coefficient array must be square, got shape {c.shape}")
        if np.any(c[~_triangle_mask(c.shape[0] - 1)] != 0):
            raise ValueError("coefficients with i + j > degree must be zero")
        object.__setattr__(self, "coeffs", _frozen(c))

    @classmethod
    def from_terms(cls, degree, terms):
        return cls(HomoPoly.from_terms(degree, terms).coeffs)

    @property
    def degree(self):
        return self.coeffs.shape[0] - 1

    def effective_degree(self):
        """Largest ``i + j`` with a nonzero coefficient (-1 for the zero polynomial)."""
        i, j = np.nonzero(self.coeffs)
        return int(np.max(i + j)) if len(i) else -1

    def trimmed(self):
        d = self.effective_degree()
        if d < 0:
            raise DegenerateInput("zero polynomial")
        return AffinePoly(self.coeffs[: d + 1, : d + 1])

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def __call__(self, x, y):
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        n = self.degree
        result = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        # Horner in x over polynomials in y
        for i in range(n, -1, -1):
            h = np.zeros_like(result)
            for j in range(n - i, -1, -1):
                h = h * y + self.coeffs[i, j]
            result = result * x + h
        return result if result.ndim else complex(result)

    def gradient(self, x, y):
        """``(dp/dx, dp/dy)`` at ``(x, y)``."""
        n = self.degree
        c = self.coeffs
        dx = np.zeros((max(n, 1), max(n, 1)), dtype=complex)
        dy = np.zeros((max(n, 1), max(n, 1)), dtype=complex)
        for i in range(n + 1):
            for j in range(n + 1 - i):
                if i > 0:
                    dx[i - 1, j] = i * c[i, j]
                if j > 0:
                    dy[i, j - 1] = j * c[i, j]
        return AffinePoly(dx)(x, y), AffinePoly(dy)(x, y)


@dataclass(frozen=True)
class LinearForm:
    """``r*x + s*y + t*z``."""

    r: complex
    s: complex
    t: complex

    @classmethod
    def from_vector(cls, v):
        r, s, t = (complex(a) for a in v)
        return cls(r, s, t)

    @property
    def vector(self):
        return np.array([self.r, self.s, self.t], dtype=complex)

    def is_zero(self, tol=0.0):
        return float(np.max(np.abs(self.vector))) <= tol

    def as_poly(self):
        c = np.zeros((2, 2), dtype=complex)
        c[1, 0], c[0, 1], c[0, 0] = self.r, self.s, self.t
        return HomoPoly(c)

    def __call__(self, x, y, z):
        return self.r * x + self.s * y + self.t * z

    def __mul__(self, other):
        if isinstance(other, (LinearForm, HomoPoly)):
            return self.as_poly() * other
        if np.isscalar(other):
            return LinearForm.from_vector(self.vector * other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return LinearForm.from_vector(self.vector * other)
        return NotImplemented

    def __neg__(self):
        return LinearForm(-self.r, -self.s, -self.t)

    def substitute(self, matrix):
        """The form ``v -> self(matrix @ v)``."""
        return LinearForm.from_vector(self.vector @ np.asarray(matrix, dtype=complex))

    def proportional_to(self, other, tol=1e-9):
        a, b = self.vector, other.vector
        cross = np.abs(np.outer(a, b) - np.outer(b, a)).max()
        return cross <= tol * np.linalg.norm(a) * np.linalg.norm(b)


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    x: complex
    y: complex
    z: complex

    def __post_init__(self):
        if self.x == 0 and self.y == 0 and self.z == 0:
            raise ValueError("(0, 0, 0) is not a projective point")

    @property
    def vector(self):
        return np.array([self.x, self.y, self.z], dtype=complex)

    def normalized(self):
        v = self.vector
        return v / v[np.argmax(np.abs(v))]

    def isclose(self, other, tol=1e-9):
        return bool(np.max(np.abs(self.normalized() - other.normalized())) <= tol)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class ProjectiveTransform:
    """Invertible 3x3 matrix ``T`` acting by ``v -> T v``.

    :func:`apply_transform` with ``T`` turns ``p`` into ``v -> p(T v)``.
    """

    matrix: np.ndarray
    inverse: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got {m.shape}")
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] <= 1e-14 * s[0]:
            raise ValueError("singular projective transform")
        inv = np.linalg.inv(m) if self.inverse is None else np.array(self.inverse, dtype=complex)
        err = np.linalg.norm(m @ inv - np.eye(3))
        if err > 1e-12 * max(1.0, np.linalg.norm(m) * np.linalg.norm(inv)):
            raise ValueError("inverse does not match matrix")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "inverse", _frozen(inv))

    @classmethod
    def identity(cls):
        return cls(np.eye(3))

    def inv(self):
        return ProjectiveTransform(self.inverse, self.matrix)

    def __matmul__(self, other):
        return ProjectiveTransform(self.matrix @ other.matrix, other.inverse @ self.inverse)

    def map_point(self, v):
        return self.matrix @ np.asarray(v, dtype=complex)


def compose(t1, t2):
    """Transform whose action on polynomials is ``t2`` followed by ``t1``.

    ``apply_transform(p, compose(t1, t2)) == apply_transform(apply_transform(p, t2), t1)``.
    """
    return t2 @ t1


def homogenize(q):
    """``z**n q(x/z, y/z)`` for an affine polynomial of declared degree ``n``."""
    if q.degree < 1:
        raise ValueError("degree must be at least 1")
    if not np.any(q.coeffs):
        raise DegenerateInput("cannot homogenize the zero polynomial")
    return HomoPoly(q.coeffs)


def dehomogenize(p):
    """The affine slice ``p(x, y, 1)``."""
    return AffinePoly(p.coeffs)


def evaluate(p, v):
    """Value of ``p`` at a projective point or a length-3 vector."""
    if isinstance(v, ProjectivePoint):
        v = v.vector
    x, y, z = v
    return p(x, y, z)


def apply_transform(p, T):
    """Polynomial ``v -> p(T v)`` (same degree)."""
    if not isinstance(T, ProjectiveTransform):
        T = ProjectiveTransform(T)
    return HomoPoly(kernels.poly_substitute(p.coeffs, T.matrix))


def rotation(axis, phi):
    """Rotation by ``phi`` of ``x, y`` around ``z`` or of ``y, z`` around ``x``."""
    c, s = math.cos(phi), math.sin(phi)
    if axis == "z":
        m = [[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]]
    elif axis == "x":
        m = [[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]]
    else:
        raise ValueError(f"axis must be 'x' or 'z', got {axis!r}")
    m = np.array(m)
    return ProjectiveTransform(m, m.T)


def random_rotation(axis, seed):
    """Seeded rotation around ``axis`` with a pseudo-random angle."""
    return rotation(axis, SplitMix64(seed).angle())


def random_orthogonal(seed):
    """Seeded real orthogonal 3x3 transform (product of three axis rotations)."""
    g = SplitMix64(seed)
    a, b, c = g.angle(), g.angle(), g.angle()
    m = rotation("z", a).matrix @ rotation("x", b).matrix @ rotation("z", c).matrix
    m = np.real(m)
    return ProjectiveTransform(m, m.T)


def power_of_form(form, n):
    """Coefficients of ``form**n`` via the multinomial theorem."""
    c = np.zeros((n + 1, n + 1), dtype=complex)
    for i in range(n + 1):
        for j in range(n + 1 - i):
            k = n - i - j
            mult = math.factorial(n) // (math.factorial(i) * math.factorial(j) * math.factorial(k))
            c[i, j] = mult * form.r**i * form.s**j * form.t**k
    return HomoPoly(c)


def _nth_root(a, n):
    return complex(a) ** (1.0 / n) if a != 0 else 0j


def is_power_of_line(p, tol=1e-10) -> Optional[LinearForm]:
    """Return ``l`` with ``p == l**n`` (up to ``tol * ||p||``), else ``None``.

    Candidate forms use the principal n-th root of ``a_n0`` and every branch of
    the n-th roots of ``a_0n`` and ``a_00``; the best residual is kept.
    """
    n = p.degree
    norm = p.norm()
    if norm == 0:
        return None
    rho = _nth_root(p.coef(n, 0), n)
    sig0 = _nth_root(p.coef(0, n), n)
    tau0 = _nth_root(p.coef(0, 0), n)
    units = [cmath.exp(2j * math.pi * k / n) for k in range(n)]
    best, best_res = None, math.inf
    for us in units if sig0 != 0 else [1.0]:
        for ut in units if tau0 != 0 else [1.0]:
            form = LinearForm(rho, sig0 * us, tau0 * ut)
            res = float(np.linalg.norm(p.coeffs - power_of_form(form, n).coeffs))
            if res < best_res:
                best, best_res = form, res
    return best if best_res <= tol * norm else None
