"""Conics as symmetric quadratic forms, factorization of degenerate conics,
and degeneracy analysis of pencils of conics."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotDecomposable, ZeroConic
from .polycore import HomoPoly, LinearForm, ProjectiveTransform, apply_transform
from .rootfind import poly_roots, quadratic_roots

#: default relative singular-value threshold for "rank deficient"
RANK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ConicForm:
    """Symmetric ``M`` with ``source(v) == v.T @ M @ v``."""

    M: np.ndarray
    source: HomoPoly
    singular_values: np.ndarray = field(repr=False)

    def rank(self, tol=RANK_TOL):
        s = self.singular_values
        if s[0] == 0:
            return 0
        return int(np.sum(s > tol * s[0]))

    def __call__(self, v):
        v = np.asarray(v, dtype=complex)
        return complex(v @ self.M @ v)


def conic_matrix(p2):
    """Quadratic form of a degree-2 homogeneous polynomial."""
    if p2.degree != 2:
        raise ValueError(f"conic_matrix needs a quadratic, got degree {p2.degree}")
    c = p2.coeffs
    M = np.array(
        [
            [c[2, 0], c[1, 1] / 2, c[1, 0] / 2],
            [c[1, 1] / 2, c[0, 2], c[0, 1] / 2],
            [c[1, 0] / 2, c[0, 1] / 2, c[0, 0]],
        ],
        dtype=complex,
    )
    M.setflags(write=False)
    return ConicForm(M, p2, np.linalg.svd(M, compute_uv=False))


def _as_conic(c):
    return c if isinstance(c, ConicForm) else conic_matrix(c)


def _permutation(order):
    """Transform whose new variable ``k`` is the old variable ``order[k]``."""
    P = np.zeros((3, 3))
    for new, old in enumerate(order):
        P[old, new] = 1.0
    return ProjectiveTransform(P, P.T)


def factor_degenerate_conic(p2, rank_tol=RANK_TOL, check_rank=True):
    """Split a rank-deficient conic into two linear forms with ``l1 * l2 == p2``.

    Follows the two branches of the classical algorithm: when some pure
    square coefficient is nonzero, the variables are permuted so that the
    largest one sits at ``x**2`` and the lines through the intersections
    with ``z = 0`` and ``y = 0`` are paired to cancel the ``yz`` term;
    otherwise ``p2`` is ``a10 xz + a01 yz + a11 xy`` with one of the mixed
    coefficients zero and factors directly.
    """
    if p2.degree != 2:
        raise ValueError("factor_degenerate_conic needs a quadratic")
    norm = p2.norm()
    if norm <= np.finfo(float).tiny:
        raise ZeroConic("conic is numerically zero")
    conic = conic_matrix(p2)
    if check_rank and conic.rank(rank_tol) == 3:
        s = conic.singular_values
        raise NotDecomposable(f"conic has full rank (sigma3/sigma1 = {s[2] / s[0]:.3e})")

    c = p2.coeffs
    squares = np.abs([c[2, 0], c[0, 2], c[0, 0]])
    if squares.max() > 1e-12 * norm:
        order = {0: (0, 1, 2), 1: (1, 0, 2), 2: (2, 1, 0)}[int(np.argmax(squares))]
        P = _permutation(order)
        h = apply_transform(p2, P).coeffs
        a20, a11, a02 = h[2, 0], h[1, 1], h[0, 2]
        a10, a01, a00 = h[1, 0], h[0, 1], h[0, 0]
        al = quadratic_roots(a02, a11, a20)
        be = quadratic_roots(a00, a10, a20)
        # q0 = a01 - a20 (al1 be2 + al2 be1) is the yz residue of the pairing
        cur = abs(a01 - a20 * (al[0] * be[1] + al[1] * be[0]))
        swapped = abs(a01 - a20 * (al[0] * be[0] + al[1] * be[1]))
        if swapped < cur:
            be = be[::-1]
        l1 = LinearForm(a20, -a20 * al[0], -a20 * be[0])
        l2 = LinearForm(1.0, -al[1], -be[1])
    else:
        mixed = np.abs([c[1, 1], c[1, 0], c[0, 1]])  # xy, xz, yz
        order = {0: (0, 2, 1), 1: (0, 1, 2), 2: (1, 0, 2)}[int(np.argmin(mixed))]
        P = _permutation(order)
        h = apply_transform(p2, P).coeffs
        l1 = LinearForm(0.0, 1.0, 0.0)
        l2 = LinearForm(h[1, 1], 0.0, h[0, 1])
    return l1.substitute(P.inverse), l2.substitute(P.inverse)


def _det3(m):
    return (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def _csum(values):
    # correctly rounded, hence independent of summation order
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def pencil_degeneracy_cubic(p2, q2):
    """Coefficients ``(c_sss, c_sst, c_stt, c_ttt)`` of ``det(s 2M_p + t 2M_q)``.

    Exact multilinear (column-wise) expansion of the determinant.
    """
    return pencil_degeneracy_cubic_from_matrices(_as_conic(p2).M, _as_conic(q2).M)


class PencilKind(enum.Enum):
    THREE_DISTINCT = "ThreeDistinct"
    REPEATED_DEGENERATE = "RepeatedDegenerate"
    SINGLE_DEGENERATE = "SingleDegenerate"
    IDENTICALLY_DEGENERATE = "IdenticallyDegenerate"


@dataclass(frozen=True)
class PencilClass:
    kind: PencilKind
    degeneracy_cubic: tuple
    roots: tuple  # unit-norm (s, t) pairs


def _normalized(p2):
    c = _as_conic(p2)
    n = np.linalg.norm(c.M)
    return c.M / n if n > 0 else c.M


def _binary_cubic_roots(c, tol):
    """Roots of ``sum c[k] s**(3-k) t**k`` as unit vectors ``(s, t)``."""
    c = np.asarray(c, dtype=complex)
    scale = np.abs(c).max()
    # in u = s/t the polynomial is c[3] + c[2] u + c[1] u^2 + c[0] u^3
    asc = [c[3], c[2], c[1], c[0]]
    deg = 3
    while deg > 0 and abs(asc[deg]) <= tol * scale:
        deg -= 1
    finite = poly_roots(asc[: deg + 1]) if deg > 0 else []
    pts = [np.array([u, 1.0]) / math.hypot(abs(u), 1.0) for u in finite]
    pts += [np.array([1.0 + 0j, 0j])] * (3 - deg)
    return pts


def classify_pencil(p2, q2, tol=1e-10, cluster_tol=1e-6):
    """Classify the pencil ``s p2 + t q2`` by its degenerate members."""
    cubic = pencil_degeneracy_cubic(p2, q2)
    Pn, Qn = _normalized(p2), _normalized(q2)
    c = np.array(pencil_degeneracy_cubic_from_matrices(Pn, Qn))
    scale = np.abs(c).max()
    if scale <= tol:
        return PencilClass(PencilKind.IDENTICALLY_DEGENERATE, cubic, ())
    cn = c / np.linalg.norm(c)
    a, b, cc, d = cn[0], cn[1] / 3, cn[2] / 3, cn[3]
    hessian = np.array([a * cc - b * b, a * d - b * cc, b * d - cc * cc])
    roots = _binary_cubic_roots(cn, 1e-14)
    if np.linalg.norm(hessian) <= cluster_tol**2:
        # perfect cube k (x s + y t)^3: the root is (-y, x) for any nonzero coefficient pair
        if abs(a) >= abs(d):
            root = np.array([-b, a])
        else:
            root = np.array([-d, cc])
        root = root / np.linalg.norm(root)
        return PencilClass(PencilKind.SINGLE_DEGENERATE, cubic, (tuple(root),))
    close = False
    for i in range(3):
        for j in range(i + 1, 3):
            u, v = roots[i], roots[j]
            if abs(u[0] * v[1] - u[1] * v[0]) < cluster_tol:
                close = True
    kind = PencilKind.REPEATED_DEGENERATE if close else PencilKind.THREE_DISTINCT
    return PencilClass(kind, cubic, tuple(tuple(r) for r in roots))


def pencil_degeneracy_cubic_from_matrices(P, Q):
    """Same as :func:`pencil_degeneracy_cubic` for raw symmetric matrices ``M_p, M_q``."""
    P = 2 * np.asarray(P, dtype=complex)
    Q = 2 * np.asarray(Q, dtype=complex)
    terms = [[], [], [], []]  # indexed by the number of columns taken from Q
    for mask in range(8):
        m = np.array(P)
        k = 0
        for col in range(3):
            if mask >> col & 1:
                m[:, col] = Q[:, col]
                k += 1
        terms[k].append(_det3(m))
    return tuple(_csum(t) for t in terms)


def find_mu(q2, line1, line2, tol=1e-11):
    """Finite ``mu`` with ``q2 - mu * line1 * line2`` decomposable.

    The pencil ``s q2 + t line1*line2`` always has the degenerate member
    ``(0, 1)``; it is removed by dropping the leading coefficient of the
    cubic in ``mu``.  An empty result means ``line1*line2`` is the only
    degenerate member (one of the lines is tangent to ``q2`` at their
    common point).  If every member is degenerate, ``[0]`` is returned.
    """
    Mq = conic_matrix(q2).M
    Ml = conic_matrix((line1 * line2)).M
    nq, nl = np.linalg.norm(Mq), np.linalg.norm(Ml)
    if nl == 0:
        return np.zeros(0, dtype=complex)
    if nq == 0:
        return np.zeros(1, dtype=complex)
    c3, c2, c1, _ = pencil_degeneracy_cubic_from_matrices(Mq / nq, Ml / nl)
    scale = max(abs(c3), abs(c2), abs(c1))
    if scale <= tol:
        return np.zeros(1, dtype=complex)
    # s = 1, t = -nu:  c3 - c2 nu + c1 nu^2  (the nu^3 term is the deflated root at infinity)
    asc = [c3, -c2, c1]
    if abs(c1) <= tol * scale:
        asc = asc[:2]
        if abs(c2) <= tol * scale:
            return np.zeros(0, dtype=complex)
    nu = poly_roots(asc)
    return nu * (nq / nl)
