"""The reduction ``p - lead * prod(x - a_j y - b_j z) = y z q`` and root orderings.

Every construction in :mod:`detrep.representation` starts from a
:class:`Reduction`.  The restrictions of ``p`` to the lines ``z = 0`` and
``y = 0`` fix the multisets of ``alpha`` and ``beta``; the pairing of the
two multisets is free, and the ordering helpers here choose it.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import (
    NearZeroLeadingCoefficient,
    NeedsRotation,
    ReductionResidual,
    SingularPoint,
    TangentIsCoordinateLine,
)
from .polycore import HomoPoly, LinearForm
from .rootfind import LEADING_TOL, poly_roots, restriction_coeffs, restriction_roots

#: y-free / z-free coefficients of the difference above this (relative) are an error
DIVISION_TOL = 1e-7
#: relative size of the tangent-line coefficients below which they count as zero
TANGENT_TOL = 1e-10


class Variant(enum.Enum):
    STANDARD = "Standard"
    TANGENT = "Tangent"


@dataclass(frozen=True, eq=False)
class Reduction:
    """Result of the reduction of ``poly``.

    For ``variant == STANDARD``, ``leading`` is the scalar ``a_n0`` and
    ``alpha``, ``beta`` have length ``n``.  For ``TANGENT`` it is the
    tangent form ``a_{n-1,1} y + a_{n-1,0} z`` and they have length ``n - 1``.
    """

    alpha: np.ndarray
    beta: np.ndarray
    leading: Union[complex, LinearForm]
    q: HomoPoly
    variant: Variant
    poly: HomoPoly
    residual: float = 0.0  # largest y-free/z-free coefficient of the difference, relative

    @property
    def forms(self):
        """The factors ``x - alpha_j y - beta_j z``."""
        return [LinearForm(1.0, -a, -b) for a, b in zip(self.alpha, self.beta)]

    @property
    def q0(self):
        """The scalar ``q`` of a quadratic reduction."""
        return complex(self.q.coeffs[0, 0])

    def leading_poly(self):
        """``leading * prod(forms)`` as a polynomial."""
        prod = _product(self.forms)
        if self.variant is Variant.STANDARD:
            return prod * self.leading
        return self.leading.as_poly() * prod

    def __call__(self, x, y, z):
        """Right-hand side ``leading * prod + y z q`` evaluated at a point."""
        val = self.leading if self.variant is Variant.STANDARD else self.leading(x, y, z)
        for f in self.forms:
            val = val * f(x, y, z)
        return val + y * z * self.q(x, y, z)


def _product(forms):
    # fixed left-to-right order keeps results bit-reproducible
    prod = forms[0].as_poly()
    for f in forms[1:]:
        prod = prod * f
    return prod


def _divide_out(p, lead_poly, alpha, beta, leading, variant, check):
    n = p.degree
    diff = p.coeffs - lead_poly.coeffs
    norm = p.norm()
    stray = max(
        np.abs(diff[:, 0]).max(),  # x^i z^(n-i)
        max(abs(diff[i, n - i]) for i in range(n + 1)),  # x^i y^(n-i)
    )
    rel = stray / norm if norm > 0 else 0.0
    if check and rel > DIVISION_TOL:
        raise ReductionResidual(f"difference is not divisible by yz (relative residue {rel:.3e})")
    m = n - 2
    q = np.zeros((m + 1, m + 1), dtype=complex)
    for i in range(m + 1):
        q[i, : m + 1 - i] = diff[i, 1 : m + 2 - i]
    return Reduction(
        np.array(alpha, dtype=complex),
        np.array(beta, dtype=complex),
        leading,
        HomoPoly(q),
        variant,
        p,
        float(rel),
    )


def reduce_with_roots(p, alpha, beta, check=True):
    """Standard reduction with a prescribed pairing of the roots."""
    n = p.degree
    if n < 2:
        raise ValueError("reduction needs degree >= 2")
    if len(alpha) != n or len(beta) != n:
        raise ValueError(f"need {n} alpha and beta values")
    lead = p.coef(n, 0)
    forms = [LinearForm(1.0, -a, -b) for a, b in zip(alpha, beta)]
    return _divide_out(p, _product(forms) * lead, alpha, beta, lead, Variant.STANDARD, check)


def reduce(p):
    """Standard reduction with roots in the order returned by the root finder."""
    alpha, beta = restriction_roots(p)
    return reduce_with_roots(p, alpha, beta)


def reduce_tangent(p, tol=TANGENT_TOL):
    """Reduction for ``a_n0 = 0`` using the tangent line at ``(1, 0, 0)``.

    ``p - (a_{n-1,1} y + a_{n-1,0} z) prod_{j<n} (x - alpha_j y - beta_j z)``
    is divisible by ``yz`` when ``alpha`` and ``beta`` are the roots of the
    degree ``n - 1`` restrictions.
    """
    n = p.degree
    norm = p.norm()
    if abs(p.coef(n, 0)) > LEADING_TOL * norm:
        raise ValueError("(1, 0, 0) is not on the curve; use reduce()")
    ay, az = p.coef(n - 1, 1), p.coef(n - 1, 0)
    # gradient at (1, 0, 0) is (n a_n0, a_{n-1,1}, a_{n-1,0})
    if max(abs(ay), abs(az)) <= tol * norm:
        raise SingularPoint("(1, 0, 0) is a singular point of the curve")
    if min(abs(ay), abs(az)) <= tol * norm:
        raise TangentIsCoordinateLine("tangent line at (1, 0, 0) is a coordinate line")
    at_y, at_z = restriction_coeffs(p)
    alpha = poly_roots(at_y[:n])
    beta = poly_roots(at_z[:n])
    leading = LinearForm(0.0, ay, az)
    forms = [LinearForm(1.0, -a, -b) for a, b in zip(alpha, beta)]
    lead_poly = leading.as_poly() * _product(forms)
    return _divide_out(p, lead_poly, alpha, beta, leading, Variant.TANGENT, True)


def order_for_min_q0(p2):
    """Quadratic reduction with the pairing giving the smaller ``|q0|``."""
    if p2.degree != 2:
        raise ValueError("order_for_min_q0 needs a quadratic")
    alpha, beta = restriction_roots(p2)
    first = reduce_with_roots(p2, alpha, beta)
    second = reduce_with_roots(p2, alpha, beta[::-1])
    return second if abs(second.q0) < abs(first.q0) else first


def beta_permutations(beta):
    """Distinct orderings of ``beta`` (repeated values are not re-enumerated)."""
    seen = set()
    out = []
    for perm in itertools.permutations(range(len(beta))):
        key = tuple(complex(beta[i]) for i in perm)
        if key not in seen:
            seen.add(key)
            out.append(np.array(key, dtype=complex))
    return out


def order_for_decomposable_cubic(p3):
    """Cubic reduction whose ``q1`` has the smallest norm over all ``beta`` orders.

    When ``p3`` splits into three linear forms the minimum is (numerically) zero.
    """
    if p3.degree != 3:
        raise ValueError("order_for_decomposable_cubic needs a cubic")
    alpha, beta = restriction_roots(p3)
    best = None
    for b in beta_permutations(beta):
        red = reduce_with_roots(p3, alpha, b)
        if best is None or red.q.norm() < best.q.norm():
            best = red
    return best


def order_for_line_factors(p, tol=1e-8):
    """Reduction whose factors all divide ``p``, or None if ``p`` is not a product of lines.

    The line ``x - a y - b z`` already meets the curve at ``(a, 1, 0)`` and
    ``(b, 0, 1)``; it is a component exactly when ``p`` also vanishes at
    ``(a + b, 1, 1)``.  The pairing of ``alpha`` with ``beta`` minimizing
    the largest such value is kept if that value is below ``tol``.
    """
    alpha, beta = restriction_roots(p)
    s = alpha[:, None] + beta[None, :]
    pts = np.stack([s.ravel(), np.ones(s.size), np.ones(s.size)], axis=1)
    scale = p.norm() * np.maximum(1.0, np.abs(pts).max(axis=1)) ** p.degree
    vals = (np.abs(p.evaluate_many(pts)) / scale).reshape(s.shape)
    best, best_val = None, np.inf
    for perm in itertools.permutations(range(len(beta))):
        v = max(vals[i, k] for i, k in enumerate(perm))
        if v < best_val:
            best, best_val = perm, v
    if best_val > tol:
        return None
    return reduce_with_roots(p, alpha, beta[list(best)])


def intersection_34(alpha, beta):
    """Common point of the lines in slots 3 and 4 (cross product of their coefficients)."""
    a3, a4, b3, b4 = alpha[2], alpha[3], beta[2], beta[3]
    return np.array([a3 * b4 - a4 * b3, b4 - b3, a3 - a4], dtype=complex)


def _with_pair(values, i, j):
    rest = [v for k, v in enumerate(values) if k not in (i, j)]
    return np.array(rest[:2] + [values[i], values[j]] + rest[2:], dtype=complex)


def pair_34_candidates(p5, red, min_value=1e-8, on_curve=False) -> Iterator[Reduction]:
    """Reorderings of ``red`` for the slots 3 and 4, best conditioned first.

    Candidates need ``alpha_3 != alpha_4`` and ``beta_3 != beta_4``; with
    ``on_curve=False`` the two slot lines must meet off the curve (``|p5|``
    above ``min_value * ||p5||`` there), with ``on_curve=True`` only the
    assignments where they meet on it are produced.  They are ranked by
    ``|alpha_i - alpha_j| * |beta_k - beta_l|``.
    """
    alpha, beta = red.alpha, red.beta
    n = len(alpha)
    norm = p5.norm()
    scored = []
    for i, j in itertools.combinations(range(n), 2):
        da = abs(alpha[i] - alpha[j])
        for k, l in itertools.permutations(range(n), 2):
            db = abs(beta[k] - beta[l])
            scored.append((-da * db, i, j, k, l))
    scored.sort()
    scale = max(1.0, np.abs(alpha).max(), np.abs(beta).max())
    for neg, i, j, k, l in scored:
        if -neg <= 1e-10 * scale * scale:
            break
        a = _with_pair(alpha, i, j)
        b = _with_pair(beta, k, l)
        pt = intersection_34(a, b)
        val = abs(p5(*(pt / np.linalg.norm(pt))))
        if (val > min_value * norm) != on_curve:
            yield reduce_with_roots(p5, a, b)


def choose_pair_34(p5, red, min_value=1e-8):
    """First (best conditioned) admissible reordering, else :class:`NeedsRotation`."""
    if p5.degree != 5:
        raise ValueError("choose_pair_34 needs a quintic")
    for cand in pair_34_candidates(p5, red, min_value):
        return cand
    raise NeedsRotation("no slot 3/4 assignment avoids the curve; rotate around x")


def slot34_ok(p5, red: Reduction, min_value=1e-8):
    """True when the current slots 3 and 4 already satisfy the quintic conditions."""
    a, b = red.alpha, red.beta
    if a[2] == a[3] or b[2] == b[3]:
        return False
    pt = intersection_34(a, b)
    return abs(p5(*(pt / np.linalg.norm(pt)))) > min_value * p5.norm()


def order_min_slot(values: Sequence[complex], slot):
    """Move the smallest-modulus value to ``slot`` keeping the others in order."""
    values = list(values)
    k = int(np.argmin(np.abs(values)))
    v = values.pop(k)
    values.insert(slot, v)
    return np.array(values, dtype=complex)


def order_separated_slot(values: Sequence[complex], slot):
    """Move the value farthest from all others to ``slot`` keeping the rest in order."""
    values = list(values)
    arr = np.array(values, dtype=complex)
    gaps = np.abs(arr[:, None] - arr[None, :])
    np.fill_diagonal(gaps, np.inf)
    k = int(np.argmax(gaps.min(axis=1)))
    v = values.pop(k)
    values.insert(slot, v)
    return np.array(values, dtype=complex)
