"""Construction of n x n determinantal representations for 2 <= n <= 5.

A representation of ``p`` is a triple ``(A, B, C)`` with
``det(x A + y B + z C) == p(x, y, z)``.  Internally a triple is a stacked
array ``M`` of shape ``(3, n, n)``; linear-form entries ``r x + s y + t z``
are written into ``M[:, i, j]``.

Every shape is "upper triangular plus ``z`` in the lower-left corner" with
the factors ``x - alpha_j y - beta_j z`` of the reduction on the diagonal;
the remaining entries represent the quotient ``q`` of the reduction:

===== ===========================================  ==========================
n     off-diagonal entries                          determinant
===== ===========================================  ==========================
2     (1,2) ``-q0 y``, (2,1) ``z``                   ``prod + q0 y z``
3     (1,3) ``q1``, (2,1) ``y``, (3,2) ``z``         ``prod + q1 y z``
4     (1,2) ``-y``, (2,3) ``l1``, (2,4) ``l3``,
      (3,4) ``l2``, (4,1) ``z``                      ``prod + yz (l1 l2 - d3 l3)``
5     (1,2) ``y``, (2,3) ``g1``, (3,4) ``g2``,
      (4,5) ``g3``, (2,5) ``g4``, (5,1) ``z``        ``prod + yz (g1 g2 g3 + g4 d3 d4)``
===== ===========================================  ==========================
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .conics import RANK_TOL, factor_degenerate_conic, find_mu
from .errors import (
    ConstructionFailed,
    DegenerateInput,
    NeedsRotation,
    NotDecomposable,
    RetriesExhausted,
    RetryableError,
    UnsupportedDegree,
    ZeroConic,
)
from .polycore import (
    AffinePoly,
    HomoPoly,
    LinearForm,
    ProjectiveTransform,
    apply_transform,
    homogenize,
    is_power_of_line,
    random_orthogonal,
    random_rotation,
)
from .reduction import (
    Reduction,
    Variant,
    order_for_decomposable_cubic,
    order_for_min_q0,
    order_for_line_factors,
    order_min_slot,
    order_separated_slot,
    pair_34_candidates,
    reduce,
    reduce_tangent,
    reduce_with_roots,
    slot34_ok,
)
from .rng import SplitMix64, derive_seed
from .rootfind import restriction_roots

X = LinearForm(1.0, 0.0, 0.0)
Y = LinearForm(0.0, 1.0, 0.0)
Z = LinearForm(0.0, 0.0, 1.0)
ZERO = LinearForm(0.0, 0.0, 0.0)

#: a quotient ``q`` below this fraction of ``||p||`` is treated as zero
ZERO_Q_TOL = 1e-13
#: candidates verified below this residual (or near the best) are compared by entry size
GOOD_RESIDUAL = 1e-10
EPS = float(np.finfo(float).eps)


class Structure(enum.Enum):
    DIAGONAL = "Diagonal"
    SHAPE2 = "Shape2"
    SHAPE3 = "Shape3"
    SHAPE4 = "Shape4"
    SHAPE5 = "Shape5"


#: positions (0-based) allowed to be nonzero before back-substitution
PATTERNS = {
    Structure.SHAPE2: {(0, 0), (0, 1), (1, 0), (1, 1)},
    Structure.SHAPE3: {(0, 0), (1, 1), (2, 2), (0, 2), (1, 0), (2, 1)},
    Structure.SHAPE4: {(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (1, 2), (1, 3), (2, 3), (3, 0)},
    Structure.SHAPE5: {
        (0, 0), (1, 1), (2, 2), (3, 3), (4, 4),
        (0, 1), (1, 2), (2, 3), (3, 4), (1, 4), (4, 0),
    },
}


@dataclass(frozen=True, eq=False)
class DetRep:
    """Matrices with ``det(x A + y B + z C) == poly``.

    ``local`` holds the matrices before back-substitution, representing
    ``local_poly = p(T v)`` for the composite ``T`` of ``transform_trail``;
    they have the exact sparsity of ``structure``.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    structure: Structure
    poly: HomoPoly
    transform_trail: tuple = ()
    local: Optional[np.ndarray] = field(default=None, repr=False)
    local_poly: Optional[HomoPoly] = field(default=None, repr=False)
    residual: float = math.nan
    info: dict = field(default_factory=dict, repr=False)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def stacked(self):
        return np.stack([self.A, self.B, self.C])

    def pencil(self, x, y, z):
        return x * self.A + y * self.B + z * self.C

    def det(self, pts):
        """Determinants at the rows ``(x, y, z)`` of ``pts``."""
        return _dets(self.stacked, pts)

    def affine(self):
        """``(A1, B1, C1) = (C, A, B)`` with ``det(A1 + x B1 + y C1) == p(x, y, 1)``."""
        return self.C, self.A, self.B


@dataclass(frozen=True)
class QuadXSplit:
    """``p2 == l1 * l2 - x * l3``."""

    l1: LinearForm
    l2: LinearForm
    l3: LinearForm
    case: int = 0

    def poly(self):
        return self.l1 * self.l2 - X * self.l3


@dataclass(frozen=True)
class BuildOptions:
    seed: int = 0
    max_attempts: int = 20
    tol: float = 1e-7
    verify_samples: int = 32
    rank_tol: float = RANK_TOL
    line_tol: float = 1e-10
    small_leading: float = 1e-3


# ----------------------------------------------------------------------------
# matrices and verification


def _stack(n, cells):
    M = np.zeros((3, n, n), dtype=complex)
    for (i, j), form in cells.items():
        M[:, i, j] = form.vector
    return M


def _dets(M, pts):
    pts = np.atleast_2d(np.asarray(pts, dtype=complex))
    pencils = np.einsum("pk,kij->pij", pts, M)
    return np.linalg.det(pencils)


@functools.lru_cache(maxsize=64)
def sphere_points(samples, seed):
    """``samples`` seeded points, uniform on the unit sphere of C^3."""
    g = SplitMix64(seed)
    pts = np.array([[complex(g.normal(), g.normal()) for _ in range(3)] for _ in range(samples)])
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    pts.setflags(write=False)
    return pts


def _residual(p, M, samples=16, seed=0):
    pts = sphere_points(samples, seed)
    vals = p.evaluate_many(pts)
    return float(np.max(np.abs(_dets(M, pts) - vals) / (1.0 + np.abs(vals))))


def verify(p, rep, samples=100, seed=0):
    """Max of ``|det(v_x A + v_y B + v_z C) - p(v)| / (1 + |p(v)|)`` over seeded unit vectors.

    ``rep`` is a :class:`DetRep` or the homogeneous triple ``(A, B, C)``.
    """
    if isinstance(p, AffinePoly):
        p = homogenize(p.trimmed())
    M = rep.stacked if isinstance(rep, DetRep) else np.asarray(rep, dtype=complex)
    if M.ndim != 3 or M.shape[0] != 3 or M.shape[1] != M.shape[2]:
        raise ValueError(f"expected three square matrices, got shape {M.shape}")
    if M.shape[1] != p.degree:
        raise ValueError(f"representation size {M.shape[1]} does not match degree {p.degree}")
    return _residual(p, M, samples, seed)


def _fix_sign(p, M, q_cells):
    # safety net: if the q-block enters with the wrong sign, negating it repairs the rep
    r0 = _residual(p, M, 3, 1)
    if r0 <= 1e-6 or not q_cells:
        return M
    flipped = M.copy()
    for i, j in q_cells:
        flipped[:, i, j] = -flipped[:, i, j]
    return flipped if _residual(p, flipped, 3, 1) < r0 else M


def _pick(results):
    """Choose among ``(residual, M, ...)`` tuples.

    Residuals below :data:`GOOD_RESIDUAL`, or within a factor 10 of the
    best one, do not discriminate; among those candidates the one with the
    smallest entries (the better conditioned pencil) wins.
    """
    cut = max(GOOD_RESIDUAL, 10 * min(r[0] for r in results))
    good = [r for r in results if r[0] <= cut]
    return min(good, key=lambda r: float(np.abs(r[1]).max()))


def _back_substitute(M, trail):
    # p_local(v) = p(T v): the rep of p is M'_j = sum_k (T^-1)_{kj} M_k, undone last-first
    for T in reversed(trail):
        M = np.einsum("kj,kab->jab", T.inverse, M)
    return M


# ----------------------------------------------------------------------------
# quadratic splitting


def _permuted(p2, order):
    P = np.zeros((3, 3))
    for new, old in enumerate(order):
        P[old, new] = 1.0
    return apply_transform(p2, ProjectiveTransform(P, P.T)), P


def quad_with_x(p2):
    """Write ``p2 = l1 l2 - x l3``.

    Three constructions are available: swap ``x, z`` and reduce (needs
    ``a00 != 0``, residue ``q0 x y``), swap ``x, y`` and reduce (needs
    ``a02 != 0``, residue ``q0 x z``), or the explicit split
    ``y (a02 y + a11 x + a01 z) + x (a20 x + a10 z)`` which is exact when
    ``a00 = 0``.  All applicable ones are formed; the one with the smallest
    coefficient error plus expected rounding error (machine epsilon times
    the size of the products) is returned, earlier cases winning ties.
    """
    if p2.degree != 2:
        raise ValueError("quad_with_x needs a quadratic")
    c = p2.coeffs
    candidates = []
    for case, order, var, coef in ((1, (2, 1, 0), Y, c[0, 0]), (2, (1, 0, 2), Z, c[0, 2])):
        if coef == 0:
            continue
        h, P = _permuted(p2, order)
        try:
            red = order_for_min_q0(h)
        except RetryableError:
            continue
        f1, f2 = red.forms
        # p2(v) = h(P v): pull each factor back through P
        l1 = (f1 * red.leading).substitute(P)
        l2 = f2.substitute(P)
        candidates.append(QuadXSplit(l1, l2, -red.q0 * var, case))
    a20, a11, a02, a10, a01 = c[2, 0], c[1, 1], c[0, 2], c[1, 0], c[0, 1]
    candidates.append(
        QuadXSplit(Y, LinearForm(a11, a02, a01), LinearForm(-a20, 0.0, -a10), 3)
    )
    best, best_err = None, math.inf
    for cand in candidates:
        size = np.linalg.norm(cand.l1.vector) * np.linalg.norm(cand.l2.vector) + np.linalg.norm(cand.l3.vector)
        err = float(np.linalg.norm(cand.poly().coeffs - c)) + EPS * size
        if err < best_err:
            best, best_err = cand, err
    return best


# ----------------------------------------------------------------------------
# shapes


def _diag(red):
    forms = red.forms
    if red.variant is Variant.TANGENT:
        return [red.leading] + forms
    return [forms[0] * red.leading] + forms[1:]


def build2(p2, reduction=None):
    """2x2 representation ``[[a20 l1, -q0 y], [z, l2]]``."""
    if p2.degree != 2:
        raise ValueError("build2 needs a quadratic")
    red = reduction or order_for_min_q0(p2)
    d1, d2 = _diag(red)
    cells = {(0, 0): d1, (0, 1): Y * (-red.q0), (1, 0): Z, (1, 1): d2}
    M = _fix_sign(p2, _stack(2, cells), [(0, 1)])
    return M, {"alpha": red.alpha, "beta": red.beta}


def _shape3_cells(red):
    d1, d2, d3 = _diag(red)
    q = red.q.coeffs
    r = LinearForm(q[1, 0], q[0, 1], q[0, 0])
    return d1, d2, d3, r


def build3(p3, reduction=None):
    """3x3 representation ``[[a30 l1, 0, q1], [y, l2, 0], [0, z, l3]]``.

    The default pairing minimizes ``||q1||`` over all orderings of ``beta``.
    A tangent-variant ``reduction`` puts the tangent form in the corner.
    """
    if p3.degree != 3:
        raise ValueError("build3 needs a cubic")
    red = reduction or order_for_decomposable_cubic(p3)
    d1, d2, d3, r = _shape3_cells(red)
    cells = {(0, 0): d1, (0, 2): r, (1, 0): Y, (1, 1): d2, (2, 1): Z, (2, 2): d3}
    M = _fix_sign(p3, _stack(3, cells), [(0, 2)])
    return M, {"alpha": red.alpha, "beta": red.beta, "variant": red.variant.value}


def _shape4(p4, diag, l1, l2, l3):
    d1, d2, d3, d4 = diag
    cells = {
        (0, 0): d1, (0, 1): -Y, (1, 1): d2, (1, 2): l1, (1, 3): l3,
        (2, 2): d3, (2, 3): l2, (3, 0): Z, (3, 3): d4,
    }
    return _fix_sign(p4, _stack(4, cells), [(1, 2), (1, 3), (2, 3)])


def _strategy_shift(q2, d3, rank_tol):
    # x = x' + a3 y' + b3 z' turns d3 into x'
    S = np.array([[1.0, -d3.s, -d3.t], [0, 1, 0], [0, 0, 1]], dtype=complex)
    Sinv = np.array([[1.0, d3.s, d3.t], [0, 1, 0], [0, 0, 1]], dtype=complex)
    split = quad_with_x(apply_transform(q2, ProjectiveTransform(S, Sinv)))
    return split.l1.substitute(Sinv), split.l2.substitute(Sinv), split.l3.substitute(Sinv)


def _mu_split(q2, line, d3, rank_tol):
    """Best ``(l1, l2, l3)`` with ``l3 = -mu * line``, or None."""
    best, best_err = None, math.inf
    for mu in find_mu(q2, line, d3):
        m2 = q2 - (line * d3) * mu
        try:
            l1, l2 = factor_degenerate_conic(m2, rank_tol, check_rank=False)
        except ZeroConic:
            l1, l2 = ZERO, ZERO
        l3 = line * (-mu)
        err = float(np.linalg.norm((l1 * l2 - d3 * l3).coeffs - q2.coeffs))
        if err < best_err:
            best, best_err = (l1, l2, l3), err
    return best


def _strategy_mu(q2, red, rank_tol):
    forms = red.forms
    # slot 3 first, then swap it with slot 1, 2, 4
    for swap in (2, 0, 1, 3):
        order = [0, 1, 2, 3]
        order[2], order[swap] = order[swap], order[2]
        d3 = forms[order[2]]
        for line, tag in ((Y, "mu:y"), (Z, "mu:z")):
            split = _mu_split(q2, line, d3, rank_tol)
            if split is not None:
                diag = [forms[order[k]] for k in range(4)]
                diag[0] = diag[0] * red.leading
                if swap != 2:
                    tag = f"{tag}:swap{swap + 1}"
                return diag, split, tag
    return None


def build4(p4, reduction=None, strategy=None, rank_tol=RANK_TOL):
    """4x4 representation.

    Two ways of writing ``q2 = l1 l2 - d3 l3`` are tried: ``"shift"`` moves
    ``d3`` to a coordinate and splits with :func:`quad_with_x`; ``"mu"``
    takes ``l3 = -mu y`` (or ``-mu z``) with ``mu`` making
    ``q2 - mu y d3`` decomposable, swapping diagonal slots if needed.  The
    candidate with the smaller verification residual is returned; when the
    residuals are comparable (see :func:`_pick`), the one with smaller entries.
    """
    if p4.degree != 4:
        raise ValueError("build4 needs a quartic")
    lines = order_for_line_factors(p4) if reduction is None else None
    if lines is not None:
        reductions = [lines]
    elif reduction is None:
        alpha, beta = restriction_roots(p4)
        reductions = [reduce_with_roots(p4, order_min_slot(alpha, 2), order_min_slot(beta, 2))]
        # the smallest roots may be (numerically split) double roots, where the
        # shift strategy degenerates; also try the best separated ones
        a_sep, b_sep = order_separated_slot(alpha, 2), order_separated_slot(beta, 2)
        if a_sep[2] != reductions[0].alpha[2] or b_sep[2] != reductions[0].beta[2]:
            reductions.append(reduce_with_roots(p4, a_sep, b_sep))
    else:
        reductions = [reduction]
    red = reductions[0]
    results = []
    if red.q.norm() <= ZERO_Q_TOL * p4.norm():
        M = _shape4(p4, _diag(red), ZERO, ZERO, ZERO)
        results.append((_residual(p4, M), M, "zero", red))
    else:
        for red in reductions:
            q2 = red.q
            if strategy in (None, "shift"):
                l1, l2, l3 = _strategy_shift(q2, red.forms[2], rank_tol)
                M = _shape4(p4, _diag(red), l1, l2, l3)
                results.append((_residual(p4, M), M, "shift", red))
            if strategy in (None, "mu"):
                found = _strategy_mu(q2, red, rank_tol)
                if found is not None:
                    diag, (l1, l2, l3), tag = found
                    M = _shape4(p4, diag, l1, l2, l3)
                    results.append((_residual(p4, M), M, tag, red))
    if not results:
        raise ConstructionFailed("no strategy produced a quartic representation")
    res, M, tag, red = _pick(results)
    return M, {"alpha": red.alpha, "beta": red.beta, "strategy": tag, "residual": res}


def change5(alpha, beta):
    """Rows ``(l3 x l4, l3, l4)`` for the quintic change of variables."""
    a3, a4, b3, b4 = alpha[2], alpha[3], beta[2], beta[3]
    return np.array(
        [[a3 * b4 - a4 * b3, b4 - b3, a3 - a4], [1.0, -a3, -b3], [1.0, -a4, -b4]],
        dtype=complex,
    )


def _shape5(p5, diag, g):
    d1, d2, d3, d4, d5 = diag
    g1, g2, g3, g4 = g
    cells = {
        (0, 0): d1, (0, 1): Y, (1, 1): d2, (1, 2): g1, (1, 4): g4,
        (2, 2): d3, (2, 3): g2, (3, 3): d4, (3, 4): g3, (4, 0): Z, (4, 4): d5,
    }
    return _fix_sign(p5, _stack(5, cells), [(1, 2), (2, 3), (3, 4), (1, 4)])


def _quintic_from(p5, red):
    """Shape-5 matrices for a reduction whose slots 3, 4 are admissible, or None."""
    M5 = change5(red.alpha, red.beta)
    try:
        Minv = np.linalg.inv(M5)
    except np.linalg.LinAlgError:
        return None
    T = ProjectiveTransform(Minv, M5)
    qt = apply_transform(red.q, T)  # q in the coordinates (l3 x l4, l3, l4)
    try:
        if abs(qt.coef(3, 0)) > 1e-10 * qt.norm():
            sub = order_for_decomposable_cubic(qt)
        else:
            sub = reduce_tangent(qt)
    except RetryableError:
        return None
    t1, t2, t3, r = _shape3_cells(sub)
    g = [f.substitute(M5) for f in (t1, t2, t3, r)]
    M = _shape5(p5, _diag(red), g)
    return M, sub.variant.value


def build5(p5, reduction=None, keep=3, max_tries=32):
    """5x5 representation via a change of variables and a cubic sub-representation.

    Slots 3 and 4 are chosen so that their lines meet off the curve; then
    ``q3`` in the coordinates ``(l3 x l4, l3, l4)`` has a nonzero ``x**3``
    coefficient and :func:`build3` applies.  If the point is on the curve the
    tangent reduction of ``q3`` is used instead.  Up to ``keep`` admissible
    choices are built and the best verified one is returned.
    """
    if p5.degree != 5:
        raise ValueError("build5 needs a quintic")
    red0 = reduction or order_for_line_factors(p5) or reduce(p5)
    if red0.q.norm() <= ZERO_Q_TOL * p5.norm():
        M = _shape5(p5, _diag(red0), [ZERO] * 4)
        return M, {"alpha": red0.alpha, "beta": red0.beta, "candidates": 0}

    if reduction is not None and slot34_ok(p5, reduction):
        # a caller-supplied admissible ordering is used as given
        out = _quintic_from(p5, reduction)
        if out is not None:
            M, variant = out
            info = {"alpha": reduction.alpha, "beta": reduction.beta, "candidates": 1}
            return M, dict(info, sub_variant=variant)

    def candidates():
        yield from pair_34_candidates(p5, red0, on_curve=False)
        yield from pair_34_candidates(p5, red0, on_curve=True)

    results = []
    tried = 0
    for red in candidates():
        tried += 1
        out = _quintic_from(p5, red)
        if out is not None:
            M, variant = out
            results.append((_residual(p5, M), M, red, variant))
        if len(results) >= keep or tried >= max_tries:
            break
    if not results:
        raise NeedsRotation("no admissible choice of slots 3 and 4")
    res, M, red, variant = _pick(results)
    return M, {"alpha": red.alpha, "beta": red.beta, "candidates": tried, "sub_variant": variant}


_BUILDERS = {2: build2, 3: build3, 4: build4, 5: build5}
_STRUCTURES = {2: Structure.SHAPE2, 3: Structure.SHAPE3, 4: Structure.SHAPE4, 5: Structure.SHAPE5}


def _local(p, opts):
    n = p.degree
    if n == 4:
        return build4(p, rank_tol=opts.rank_tol)
    return _BUILDERS[n](p)


def build(p, opts: Optional[BuildOptions] = None, **kwargs):
    """Determinantal representation of a polynomial of degree 2 to 5.

    Accepts a :class:`HomoPoly` or an :class:`AffinePoly` (homogenized after
    trimming to its effective degree).  Coordinates are changed when the
    leading coefficient ``a_n0`` is small or a construction breaks down,
    with at most ``opts.max_attempts`` attempts; the returned matrices are
    expressed in the original coordinates and verified to ``opts.tol``.
    """
    opts = opts or BuildOptions(**kwargs)
    if isinstance(p, AffinePoly):
        if p.effective_degree() < 0:
            raise DegenerateInput("zero polynomial")
        p = homogenize(p.trimmed())
    n = p.degree
    if n > 5:
        raise UnsupportedDegree(f"degree {n} is not supported: no construction is known for degree >= 6")
    if n < 2:
        raise UnsupportedDegree(f"degree {n} is not supported (need 2 <= n <= 5)")
    if p.is_zero():
        raise DegenerateInput("zero polynomial")

    line = is_power_of_line(p, opts.line_tol)
    if line is not None:
        M = np.stack([np.eye(n, dtype=complex) * v for v in line.vector])
        res = _residual(p, M, opts.verify_samples, opts.seed)
        return DetRep(*M, Structure.DIAGONAL, p, (), M, p, res, {"line": line})

    trail = []
    errors = []
    for attempt in range(opts.max_attempts):
        T = ProjectiveTransform.identity()
        for t in trail:
            T = T @ t
        pc = apply_transform(p, T) if trail else p
        if abs(pc.coef(n, 0)) < opts.small_leading * pc.max_abs():
            trail.append(random_orthogonal(derive_seed(opts.seed, attempt, 0)))
            continue
        try:
            M, info = _local(pc, opts)
        except NeedsRotation as exc:
            errors.append(repr(exc))
            trail.append(random_rotation("x", derive_seed(opts.seed, attempt, 1)))
            continue
        except (RetryableError, NotDecomposable, np.linalg.LinAlgError) as exc:
            errors.append(repr(exc))
            trail.append(random_orthogonal(derive_seed(opts.seed, attempt, 2)))
            continue
        Mb = _back_substitute(M, trail)
        res = _residual(p, Mb, opts.verify_samples, opts.seed)
        if res <= opts.tol:
            info = dict(info, attempts=attempt + 1, errors=errors)
            return DetRep(*Mb, _STRUCTURES[n], p, tuple(trail), M, pc, res, info)
        errors.append(f"verification residual {res:.3e}")
        trail.append(random_orthogonal(derive_seed(opts.seed, attempt, 3)))
    raise RetriesExhausted(
        f"no verified representation after {opts.max_attempts} attempts; last errors: {errors[-3:]}"
    )
