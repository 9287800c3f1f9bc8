import numpy as np
import pytest

from conftest import rand_homo
from detrep.errors import DegenerateInput, NearZeroLeadingCoefficient
from detrep.polycore import HomoPoly, LinearForm
from detrep.rootfind import poly_roots, quadratic_roots, restriction_roots


def match(a, b):
    """Max distance after greedy nearest matching of two multisets."""
    b = list(b)
    worst = 0.0
    for z in a:
        k = int(np.argmin([abs(z - w) for w in b]))
        worst = max(worst, abs(z - b.pop(k)))
    return worst


def rand_univar(rng, d):
    return rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)


def test_simple_quadratic():
    assert match(poly_roots([-1, 0, 1]), [1, -1]) == 0


def test_quadratic_no_cancellation():
    r = quadratic_roots(1.0 + 0j, 1e8 + 0j, 1.0 + 0j)
    assert match(r, [-1e-8, -1e8]) <= 1e-16 * 1e8
    assert abs(min(abs(r)) - 1e-8) <= 1e-22


def test_degree_zero_and_zero_poly():
    assert len(poly_roots([3.0])) == 0
    with pytest.raises(DegenerateInput):
        poly_roots([0, 0, 0])


def test_example_quintic_restriction():
    # alpha (alpha^2 - 1)(alpha^2 - 4)
    roots = poly_roots(np.polynomial.polynomial.polyfromroots([2, -2, 1, -1, 0]))
    assert match(roots, [2, -2, 1, -1, 0]) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_residual_bound(rng, d):
    for _ in range(500):
        c = rand_univar(rng, d)
        for z in poly_roots(c):
            val = np.polynomial.polynomial.polyval(z, c)
            assert abs(val) <= 1e-9 * np.linalg.norm(c) * max(1.0, abs(z)) ** d


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_known_roots_recovered(rng, d):
    for _ in range(50):
        zs = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        c = np.polynomial.polynomial.polyfromroots(zs)
        assert match(poly_roots(c), zs) <= 1e-8


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_vieta_and_scaling(rng, d):
    for _ in range(50):
        c = rand_univar(rng, d)
        r = poly_roots(c)
        assert abs(r.sum() + c[d - 1] / c[d]) <= 1e-8 * max(1.0, abs(c[d - 1] / c[d]))
        prod = (-1) ** d * c[0] / c[d]
        assert abs(np.prod(r) - prod) <= 1e-8 * max(1.0, abs(prod))
        lam = complex(*rng.standard_normal(2))
        assert match(poly_roots(lam * c), r) <= 1e-7


def test_multiple_roots_repeated():
    r = poly_roots(np.polynomial.polynomial.polyfromroots([1, 1, 2]))
    assert len(r) == 3
    assert match(r, [1, 1, 2]) <= 1e-6


def test_weierstrass_restrictions():
    x = LinearForm(1, 0, 0)
    p = x.as_poly() * LinearForm(1, 1, 0) * LinearForm(1, -1, 0) - HomoPoly.from_terms(3, {(0, 1): 1})
    alpha, beta = restriction_roots(p)
    assert match(alpha, [0, -1, 1]) <= 1e-12
    assert match(beta, [0, 0, 0]) == 0


def test_product_restrictions():
    p = LinearForm(1, -1, -2) * LinearForm(1, -3, 1)
    alpha, beta = restriction_roots(p)
    assert match(alpha, [1, 3]) <= 1e-12
    assert match(beta, [2, -1]) <= 1e-12


def test_reconstruct_quartic(rng):
    c = rand_homo(rng, 4).coeffs.copy()
    c[4, 0] = 1
    p = HomoPoly(c)
    alpha, _ = restriction_roots(p)
    rebuilt = np.polynomial.polynomial.polyfromroots(alpha)
    expected = np.array([c[i, 4 - i] for i in range(5)])
    assert np.allclose(rebuilt, expected, atol=1e-9 * np.abs(expected).max())


def test_small_leading_rejected():
    p = HomoPoly.from_terms(2, {(1, 1): 1, (0, 0): 1})
    with pytest.raises(NearZeroLeadingCoefficient):
        restriction_roots(p)
