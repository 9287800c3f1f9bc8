"""Bivariate systems as two-parameter eigenvalue problems.

With representations ``p(x, y) = det(A1 + x B1 + y C1)`` and
``q(x, y) = det(A2 + x B2 + y C2)``, a common root ``(x, y)`` is an
eigenvalue pair of the operator determinants

    D0 = B1 (x) C2 - C1 (x) B2,  D1 = C1 (x) A2 - A1 (x) C2,  D2 = A1 (x) B2 - B1 (x) A2

in the sense ``D1 w = x D0 w`` and ``D2 w = y D0 w`` for a common
eigenvector ``w``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .errors import SingularDelta0, UnsupportedDegree
from .polycore import AffinePoly, dehomogenize
from .representation import BuildOptions, build

#: relative smallest singular value of D0 below which the problem is singular
SINGULAR_TOL = 1e-10
#: relative eigenvalue distance below which roots are flagged as clustered
CLUSTER_TOL = 1e-6
#: relative backward error above which an eigenvalue is dropped as spurious
SPURIOUS_TOL = 1e-4
#: reciprocal condition of the Jacobian below which a root is unreliable
JACOBIAN_RCOND = 1e-13
#: a neighbour this close (relative) with a Jacobian rcond below NEAR_RCOND is a split multiple root
NEAR_TOL = 1e-2
NEAR_RCOND = 1e-3


@dataclass(frozen=True, eq=False)
class TwoParProblem:
    A1: np.ndarray
    B1: np.ndarray
    C1: np.ndarray
    A2: np.ndarray
    B2: np.ndarray
    C2: np.ndarray
    D0: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    p: Optional[AffinePoly] = None
    q: Optional[AffinePoly] = None


@dataclass(frozen=True, eq=False)
class RootSet:
    """Roots with per-root diagnostics.

    ``residuals[k] = (|p|, |q|)`` at the root, ``condition[k] = ||J^-1||``
    (2-norm, ``inf`` when ``J`` is singular), ``backward[k]`` the larger
    relative backward error ``|p| / sum |p_ij x^i y^j|``, and ``flags[k]``
    one of ``"simple"``, ``"clustered"``, ``"unreliable"``.  ``dropped``
    counts the eigenvalues discarded as spurious; ``info`` carries
    end-to-end details such as the verification residuals of the two
    representations.
    """

    roots: np.ndarray
    residuals: np.ndarray
    condition: np.ndarray
    backward: np.ndarray
    flags: tuple
    dropped: int = 0
    timings: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.roots)


@dataclass(frozen=True)
class Accuracy:
    accuracy: float  # max of max(|p|, |q|) / ||J^-1||
    forward_error_estimate: float  # max of max(|p|, |q|) * ||J^-1||
    excluded: int  # unreliable roots left out


def _affine_triple(rep):
    if isinstance(rep, tuple):
        return tuple(np.asarray(m, dtype=complex) for m in rep)
    return rep.affine()


def build_deltas(rep1, rep2, p=None, q=None):
    """Assemble the operator determinants of two representations.

    ``rep1`` and ``rep2`` are :class:`DetRep` objects or affine triples
    ``(A, B, C)`` with ``det(A + x B + y C)`` equal to the polynomial.
    """
    A1, B1, C1 = _affine_triple(rep1)
    A2, B2, C2 = _affine_triple(rep2)
    D0, D1, D2 = kernels.kron_deltas(A1, B1, C1, A2, B2, C2)
    if p is None and not isinstance(rep1, tuple):
        p = dehomogenize(rep1.poly)
    if q is None and not isinstance(rep2, tuple):
        q = dehomogenize(rep2.poly)
    return TwoParProblem(A1, B1, C1, A2, B2, C2, D0, D1, D2, p, q)


def _derivs(poly):
    c = poly.coeffs
    n = poly.degree
    dx = np.zeros((max(n, 1), max(n, 1)), dtype=complex)
    dy = np.zeros_like(dx)
    for i in range(n + 1):
        for j in range(n + 1 - i):
            if i:
                dx[i - 1, j] = i * c[i, j]
            if j:
                dy[i, j - 1] = j * c[i, j]
    return AffinePoly(dx), AffinePoly(dy)


class _System:
    """Vectorized values, Jacobians and backward-error scales of ``(p, q)``."""

    def __init__(self, p, q):
        self.p, self.q = p, q
        self.dp = _derivs(p)
        self.dq = _derivs(q)
        self.abs_p = AffinePoly(np.abs(p.coeffs))
        self.abs_q = AffinePoly(np.abs(q.coeffs))

    def values(self, x, y):
        return np.asarray(self.p(x, y)), np.asarray(self.q(x, y))

    def jacobians(self, x, y):
        J = np.empty(np.shape(x) + (2, 2), dtype=complex)
        J[..., 0, 0] = self.dp[0](x, y)
        J[..., 0, 1] = self.dp[1](x, y)
        J[..., 1, 0] = self.dq[0](x, y)
        J[..., 1, 1] = self.dq[1](x, y)
        return J

    def backward(self, x, y):
        ax, ay = np.abs(x), np.abs(y)
        fp, fq = self.values(x, y)
        sp = np.real(self.abs_p(ax, ay))
        sq = np.real(self.abs_q(ax, ay))
        with np.errstate(divide="ignore", invalid="ignore"):
            bp = np.where(sp > 0, np.abs(fp) / sp, np.abs(fp))
            bq = np.where(sq > 0, np.abs(fq) / sq, np.abs(fq))
        return np.maximum(bp, bq)


def _newton(system, x, y, steps=2):
    """Damped Newton on ``(p, q)``; a step is halved while it increases the residual."""
    for _ in range(steps):
        fp, fq = system.values(x, y)
        J = system.jacobians(x, y)
        r0 = np.maximum(np.abs(fp), np.abs(fq))
        F = np.stack([fp, fq], axis=-1)
        ok = np.abs(np.linalg.det(J)) > 0
        delta = np.zeros_like(F)
        if np.any(ok):
            delta[ok] = np.linalg.solve(J[ok], -F[ok][..., None])[..., 0]
        lam = np.ones(len(x))
        accepted = np.zeros(len(x), dtype=bool)
        for _ in range(5):
            xn = x + lam * delta[:, 0]
            yn = y + lam * delta[:, 1]
            gp, gq = system.values(xn, yn)
            better = np.maximum(np.abs(gp), np.abs(gq)) < r0
            take = better & ~accepted & ok
            x = np.where(take, xn, x)
            y = np.where(take, yn, y)
            accepted |= take
            lam = np.where(accepted, lam, lam / 2)
            if accepted[ok].all():
                break
    return x, y


def _neighbour_distance(xs, ys):
    """Distance of each root to its nearest neighbour, relative to the root scale."""
    n = len(xs)
    if n < 2:
        return np.full(n, np.inf)
    scale = max(1.0, float(np.max(np.abs(np.concatenate([xs, ys])))))
    d = np.hypot(np.abs(xs[:, None] - xs[None, :]), np.abs(ys[:, None] - ys[None, :]))
    np.fill_diagonal(d, np.inf)
    return d.min(axis=1) / scale


def solve_two_param(prob, polish=True, cluster_tol=CLUSTER_TOL, spurious_tol=SPURIOUS_TOL):
    """Roots of the two-parameter problem.

    ``x`` are the eigenvalues of ``D0^-1 D1`` (via a solve with ``D0``);
    ``y`` is the Rayleigh quotient of ``D0^-1 D2`` at the eigenvector.
    When the polynomials are attached to ``prob`` the roots are polished by
    two Newton steps, spurious eigenvalues (backward error above
    ``spurious_tol``) are dropped, and diagnostics are recorded.

    A root is flagged ``"clustered"`` when its nearest neighbour lies within
    ``cluster_tol`` (relative to the root scale), or within ``NEAR_TOL``
    while the Jacobian there is nearly singular: rounding splits a double
    root into two close copies that both sit where ``J`` degenerates.
    """
    timings = {}
    t0 = time.perf_counter()
    s = np.linalg.svd(prob.D0, compute_uv=False)
    if s[0] == 0 or s[-1] <= SINGULAR_TOL * s[0]:
        ratio = s[-1] / s[0] if s[0] > 0 else 0.0
        raise SingularDelta0(ratio)
    G1 = np.linalg.solve(prob.D0, prob.D1)
    G2 = np.linalg.solve(prob.D0, prob.D2)
    xs, W = np.linalg.eig(G1)
    GW = G2 @ W
    ys = np.einsum("ik,ik->k", W.conj(), GW) / np.einsum("ik,ik->k", W.conj(), W)
    timings["eigensolve"] = time.perf_counter() - t0

    if prob.p is None or prob.q is None:
        roots = np.stack([xs, ys], axis=1)
        n = len(xs)
        dist = _neighbour_distance(xs, ys)
        clustered = dist < cluster_tol
        return RootSet(roots, np.full((n, 2), np.nan), np.full(n, np.nan), np.full(n, np.nan),
                       tuple("clustered" if c else "simple" for c in clustered), 0, timings)

    system = _System(prob.p, prob.q)
    t0 = time.perf_counter()
    if polish:
        xs, ys = _newton(system, xs, ys)
    timings["polish"] = time.perf_counter() - t0

    back = system.backward(xs, ys)
    keep = back <= spurious_tol
    dropped = int(np.count_nonzero(~keep))
    xs, ys, back = xs[keep], ys[keep], back[keep]
    fp, fq = system.values(xs, ys)
    J = system.jacobians(xs, ys)
    sv = np.linalg.svd(J, compute_uv=False) if len(xs) else np.zeros((0, 2))
    with np.errstate(divide="ignore", invalid="ignore"):
        rcond = np.where(sv[:, 0] > 0, sv[:, 1] / sv[:, 0], 0.0)
    dist = _neighbour_distance(xs, ys)
    clustered = (dist < cluster_tol) | ((dist < NEAR_TOL) & (rcond < NEAR_RCOND))
    cond = np.full(len(xs), np.inf)
    flags = []
    for k in range(len(xs)):
        reliable = rcond[k] > JACOBIAN_RCOND
        if reliable:
            cond[k] = 1.0 / sv[k, 1]
        if clustered[k]:
            flags.append("clustered")
        elif not reliable:
            flags.append("unreliable")
        else:
            flags.append("simple")
    residuals = np.stack([np.abs(fp), np.abs(fq)], axis=1) if len(xs) else np.zeros((0, 2))
    return RootSet(np.stack([xs, ys], axis=1), residuals, cond, back, tuple(flags), dropped, timings)


def accuracy_metric(p, q, roots):
    """Residual-times-conditioning summaries over the reliable roots.

    ``accuracy`` is the maximum of ``max(|p|, |q|) * ||J^-1||^-1``;
    ``forward_error_estimate`` multiplies by ``||J^-1||`` instead.
    Roots with a singular Jacobian are excluded and counted.
    """
    if len(roots) == 0:
        raise ValueError("no roots")
    x, y = roots.roots[:, 0], roots.roots[:, 1]
    system = _System(p, q)
    fp, fq = system.values(x, y)
    res = np.maximum(np.abs(fp), np.abs(fq))
    J = system.jacobians(x, y)
    acc, fwd, excluded = 0.0, 0.0, 0
    for k in range(len(x)):
        sv = np.linalg.svd(J[k], compute_uv=False)
        if not (sv[0] > 0 and sv[1] > JACOBIAN_RCOND * sv[0]):
            excluded += 1
            continue
        acc = max(acc, float(res[k] * sv[1]))
        fwd = max(fwd, float(res[k] / sv[1]))
    if excluded == len(x):
        acc = fwd = math.nan
    return Accuracy(acc, fwd, excluded)


def _linear_triple(poly):
    c = poly.coeffs
    return tuple(np.array([[c[idx]]], dtype=complex) for idx in ((0, 0), (1, 0), (0, 1)))


def balance_triple(triple, sweeps=6):
    """Row and column scaling of an affine triple by powers of two.

    Rows and columns of ``|B| + |C|`` are driven towards unit norm, which
    keeps ``D0`` far from singular when a representation has widely varying
    entries.  The determinant changes by a power of two only, so the zero
    set (and the two-parameter eigenvalues) are unchanged and no rounding
    is introduced.
    """
    A, B, C = (np.array(m, dtype=complex) for m in triple)
    for _ in range(sweeps):
        for axis in (1, 0):
            norms = np.sqrt(((np.abs(B) + np.abs(C)) ** 2).sum(axis=axis))
            norms[norms == 0] = 1.0
            d = np.exp2(np.round(-np.log2(norms)))
            d = d[:, None] if axis == 1 else d[None, :]
            A, B, C = A * d, B * d, C * d
    return A, B, C


def _representation(poly, opts, balance):
    poly = poly.trimmed()
    if poly.degree == 1:
        return _linear_triple(poly), 0.0
    if poly.degree > 5:
        raise UnsupportedDegree(f"degree {poly.degree} is not supported: no construction is known for degree >= 6")
    rep = build(poly, opts)
    triple = rep.affine()
    return (balance_triple(triple) if balance else triple), rep.residual


def representation_for(poly, opts=None, balance=True):
    """Affine triple for a polynomial of degree 1 to 5.

    The triple represents ``poly`` up to a power-of-two factor when
    ``balance`` is set (see :func:`balance_triple`).
    """
    return _representation(poly, opts, balance)[0]


def solve_system(p, q, opts: Optional[BuildOptions] = None, **kwargs):
    """Common roots of two affine polynomials of degrees 1 to 5."""
    t0 = time.perf_counter()
    p, q = p.trimmed(), q.trimmed()
    if p.degree < 1 or q.degree < 1:
        raise UnsupportedDegree("constant polynomials have no roots to solve for")
    r1, res1 = _representation(p, opts, True)
    r2, res2 = _representation(q, opts, True)
    t1 = time.perf_counter()
    prob = build_deltas(r1, r2, p, q)
    t2 = time.perf_counter()
    rs = solve_two_param(prob, **kwargs)
    timings = dict(rs.timings, build=t1 - t0, assemble=t2 - t1)
    info = {"rep_residuals": (res1, res2)}
    return RootSet(rs.roots, rs.residuals, rs.condition, rs.backward, rs.flags, rs.dropped, timings, info)
