"""Roots of low-degree univariate complex polynomials."""

import cmath

import numpy as np

from .errors import DegenerateInput, NearZeroLeadingCoefficient

#: ``|a_n0|`` below this fraction of ``||p||`` counts as zero.
LEADING_TOL = 1e-12


def _horner(c, z):
    """Value and derivative of ``sum c[k] z**k`` (ascending coefficients)."""
    v = 0j
    dv = 0j
    for a in c[::-1]:
        dv = dv * z + v
        v = v * z + a
    return v, dv


def quadratic_roots(c0, c1, c2):
    """Roots of ``c2 z**2 + c1 z + c0`` avoiding cancellation."""
    disc = cmath.sqrt(c1 * c1 - 4 * c2 * c0)
    # pick the sign that makes |c1 + sign*disc| large
    if (c1.conjugate() * disc).real < 0:
        disc = -disc
    q = -0.5 * (c1 + disc)
    if q == 0:
        return np.zeros(2, dtype=complex)
    return np.array([q / c2, c0 / q], dtype=complex)


def poly_roots(coeffs):
    """All roots, with multiplicity, of ``sum coeffs[k] z**k``.

    Coefficients are in ascending order.  Exact zero coefficients at the top
    are trimmed and exact zeros at the bottom give exact zero roots.  Degrees
    above two use companion-matrix eigenvalues followed by one Newton step
    per root, kept only if it lowers the residual.
    """
    c = np.array(coeffs, dtype=complex).ravel()
    nz = np.nonzero(c)[0]
    if len(nz) == 0:
        raise DegenerateInput("zero polynomial has no well-defined roots")
    c = c[: nz[-1] + 1]
    d = len(c) - 1
    if d == 0:
        return np.zeros(0, dtype=complex)
    lead_zeros = int(nz[0])
    zeros = np.zeros(lead_zeros, dtype=complex)
    c = c[lead_zeros:]
    m = len(c) - 1
    if m == 0:
        return zeros
    if m == 1:
        rest = np.array([-c[0] / c[1]])
    elif m == 2:
        rest = quadratic_roots(c[0], c[1], c[2])
    else:
        comp = np.zeros((m, m), dtype=complex)
        comp[1:, :-1] = np.eye(m - 1)
        comp[:, -1] = -c[:-1] / c[-1]
        rest = np.linalg.eigvals(comp)
        for k, z in enumerate(rest):
            v, dv = _horner(c, z)
            if dv != 0:
                z_new = z - v / dv
                if abs(_horner(c, z_new)[0]) < abs(v):
                    rest[k] = z_new
    return np.concatenate([zeros, rest])


def restriction_coeffs(p):
    """Ascending coefficients of ``p(t, 1, 0)`` and ``p(t, 0, 1)``."""
    n = p.degree
    at_y = np.array([p.coeffs[i, n - i] for i in range(n + 1)])
    at_z = np.array(p.coeffs[:, 0])
    return at_y, at_z


def restriction_roots(p):
    """Roots ``alpha`` of ``p(a, 1, 0)`` and ``beta`` of ``p(b, 0, 1)``.

    Raises :class:`NearZeroLeadingCoefficient` when ``a_n0`` is negligible,
    which means ``(1, 0, 0)`` lies (numerically) on the curve.
    """
    n = p.degree
    lead = p.coef(n, 0)
    if abs(lead) <= LEADING_TOL * p.norm():
        raise NearZeroLeadingCoefficient(
            f"|a_{n}0| = {abs(lead):.3e} is negligible; rotate coordinates first"
        )
    at_y, at_z = restriction_coeffs(p)
    return poly_roots(at_y), poly_roots(at_z)
