import numpy as np
import pytest

from conftest import forms_product, naive_eval, rand_form, rand_homo, sphere
from detrep.conics import (
    PencilKind,
    classify_pencil,
    conic_matrix,
    factor_degenerate_conic,
    find_mu,
    pencil_degeneracy_cubic,
)
from detrep.errors import NotDecomposable, ZeroConic
from detrep.polycore import HomoPoly, LinearForm

X, Y, Z = LinearForm(1, 0, 0), LinearForm(0, 1, 0), LinearForm(0, 0, 1)


def quad(**terms):
    names = {"xx": (2, 0), "xy": (1, 1), "yy": (0, 2), "xz": (1, 0), "yz": (0, 1), "zz": (0, 0)}
    return HomoPoly.from_terms(2, {names[k]: v for k, v in terms.items()})


def factor_error(p2, l1, l2):
    return np.linalg.norm(forms_product([l1, l2]) - p2.coeffs) / np.linalg.norm(p2.coeffs)


def test_conic_matrix_xy():
    M = conic_matrix(quad(xy=1)).M
    expected = np.zeros((3, 3))
    expected[0, 1] = expected[1, 0] = 0.5
    assert np.array_equal(M, expected)


def test_conic_matrix_parabola():
    M = conic_matrix(quad(yy=1, xz=-1)).M
    assert np.array_equal(M, [[0, 0, -0.5], [0, 1, 0], [-0.5, 0, 0]])


def test_conic_matrix_evaluation(rng):
    p2 = rand_homo(rng, 2)
    c = conic_matrix(p2)
    assert np.array_equal(c.M, c.M.T)
    for v in sphere(rng, 20):
        assert abs(c(v) - naive_eval(p2.coeffs, *v)) <= 1e-12 * (1 + abs(c(v)))


def test_conic_matrix_wrong_degree(rng):
    with pytest.raises(ValueError):
        conic_matrix(rand_homo(rng, 3))


def test_factor_xy_branch_two():
    l1, l2 = factor_degenerate_conic(quad(xy=1))
    assert l1.proportional_to(Y) and l2.proportional_to(X)
    assert factor_error(quad(xy=1), l1, l2) == 0


def test_factor_perfect_square():
    p2 = quad(xx=1, xy=2, yy=1)
    l1, l2 = factor_degenerate_conic(p2)
    assert l1.proportional_to(LinearForm(1, 1, 0), 1e-7) and l2.proportional_to(LinearForm(1, 1, 0), 1e-7)
    assert factor_error(p2, l1, l2) <= 1e-8


@pytest.mark.parametrize("field", ["real", "complex"])
def test_factor_roundtrip(rng, field):
    for _ in range(200):
        l1, l2 = rand_form(rng, field), rand_form(rng, field)
        p2 = l1 * l2
        f1, f2 = factor_degenerate_conic(p2)
        assert factor_error(p2, f1, f2) <= 1e-9


def test_factor_branch_two_variants():
    # no pure squares: exactly one mixed coefficient must vanish
    for p2 in (quad(xy=2, xz=3), quad(xy=1, yz=-2), quad(xz=1, yz=5)):
        l1, l2 = factor_degenerate_conic(p2)
        assert factor_error(p2, l1, l2) <= 1e-15


def test_factor_rejects_full_rank_and_zero():
    with pytest.raises(NotDecomposable):
        factor_degenerate_conic(quad(xx=1, yy=1, zz=1))
    with pytest.raises(ZeroConic):
        factor_degenerate_conic(HomoPoly.zero(2))


def test_pencil_cubic_identity():
    p = quad(xx=1, yy=1, zz=1)
    assert np.allclose(pencil_degeneracy_cubic(p, p), [8, 24, 24, 8])


def test_pencil_cubic_degenerate_member():
    c = pencil_degeneracy_cubic(quad(yy=1, xz=-1), quad(xy=1))
    assert c[3] == 0  # s = 0, t = 1 is the degenerate member xy


def test_pencil_cubic_against_determinant(rng):
    p, q = rand_homo(rng, 2), rand_homo(rng, 2)
    c = pencil_degeneracy_cubic(p, q)
    Mp, Mq = conic_matrix(p).M, conic_matrix(q).M
    for s, t in rng.standard_normal((5, 2)):
        direct = np.linalg.det(2 * s * Mp + 2 * t * Mq)
        val = c[0] * s**3 + c[1] * s**2 * t + c[2] * s * t**2 + c[3] * t**3
        assert abs(val - direct) <= 1e-11 * (1 + abs(direct))


def test_pencil_cubic_swap_exact(rng):
    for _ in range(20):
        p, q = rand_homo(rng, 2), rand_homo(rng, 2)
        assert pencil_degeneracy_cubic(p, q) == pencil_degeneracy_cubic(q, p)[::-1]


def test_classify_common_factor():
    assert classify_pencil(quad(xx=1), quad(xy=1)).kind is PencilKind.IDENTICALLY_DEGENERATE


def test_classify_concurrent_lines():
    # both conics are line pairs through (0, 0, 1)
    assert classify_pencil(quad(xy=1), quad(xx=1, yy=-1)).kind is PencilKind.IDENTICALLY_DEGENERATE


def test_classify_tangency():
    p2 = quad(xx=2, xy=-1, yy=3, yz=1.5)
    cls = classify_pencil(p2, quad(xy=1))
    assert cls.kind is PencilKind.SINGLE_DEGENERATE
    assert len(find_mu(p2, Y, X)) == 0


def test_classify_generic_three_distinct(rng):
    for _ in range(20):
        p, q = rand_homo(rng, 2), rand_homo(rng, 2)
        c = np.array(pencil_degeneracy_cubic(p, q))
        a, b, cc, d = c
        disc = b * b * cc * cc - 4 * a * cc**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * cc * d
        assert abs(disc) > 1e-6 * np.abs(c).max() ** 4
        assert classify_pencil(p, q).kind is PencilKind.THREE_DISTINCT


def test_classify_repeated():
    # x^2 and y^2 - z^2: degenerate members t = 0 (double) and s = 0
    assert classify_pencil(quad(xx=1), quad(yy=1, zz=-1)).kind is PencilKind.REPEATED_DEGENERATE


def test_classify_scale_invariant(rng):
    cases = [
        (rand_homo(rng, 2), rand_homo(rng, 2)),
        (quad(xx=2, xy=-1, yy=3, yz=1.5), quad(xy=1)),
        (quad(xx=1), quad(xy=1)),
        (quad(xx=1), quad(yy=1, zz=-1)),
    ]
    for p, q in cases:
        base = classify_pencil(p, q).kind
        for lam, mu in rng.standard_normal((5, 2)) * 10:
            assert classify_pencil(lam * p, mu * q).kind is base


def test_find_mu_decomposable_contains_zero(rng):
    q2 = rand_form(rng) * rand_form(rng)
    mus = find_mu(q2, rand_form(rng), rand_form(rng))
    assert np.min(np.abs(mus)) <= 1e-8


def test_find_mu_ellipse_tangent_case():
    # x^2 + yz with the lines y and x is itself the tangency configuration: no finite mu
    q2 = quad(xx=1, yz=1)
    assert len(find_mu(q2, Y, X)) == 0
    for mu in np.linspace(-3, 3, 7):
        M = conic_matrix(q2 - mu * (Y * X)).M
        assert abs(np.linalg.det(M) + 0.25) <= 1e-15


def test_find_mu_makes_decomposable(rng):
    for _ in range(100):
        q2 = rand_homo(rng, 2)
        l1, l2 = rand_form(rng), rand_form(rng)
        mus = find_mu(q2, l1, l2)
        assert len(mus) == 2
        for mu in mus:
            s = conic_matrix(q2 - mu * (l1 * l2)).singular_values
            assert s[2] <= 1e-7 * s[0]
            f1, f2 = factor_degenerate_conic(q2 - mu * (l1 * l2))
            assert factor_error(q2 - mu * (l1 * l2), f1, f2) <= 1e-7
