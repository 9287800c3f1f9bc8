import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dict_mul, naive_eval, rand_coeffs, rand_homo, sphere
from detrep.errors import DegenerateInput
from detrep.polycore import (
    AffinePoly,
    HomoPoly,
    LinearForm,
    ProjectivePoint,
    ProjectiveTransform,
    apply_transform,
    compose,
    dehomogenize,
    evaluate,
    homogenize,
    is_power_of_line,
    power_of_form,
    random_orthogonal,
    random_rotation,
    rotation,
)


def test_homogenize_pads_with_z():
    q = AffinePoly.from_terms(2, {(2, 0): 1, (0, 1): 1, (0, 0): -1})
    p = homogenize(q)
    assert p.coef(2, 0) == 1 and p.coef(0, 1) == 1 and p.coef(0, 0) == -1
    # x^2 + yz - z^2 at (1, 2, 3)
    assert p(1, 2, 3) == 1 + 6 - 9


def test_example_quintic_homogenize_roundtrip():
    x, y, z = (LinearForm(1, 0, 0), LinearForm(0, 1, 0), LinearForm(0, 0, 1))
    prod = x.as_poly() * LinearForm(1, -1, -1) * LinearForm(1, 1, 1) * LinearForm(1, -2, -2) * LinearForm(1, 2, 2)
    extra = HomoPoly.from_terms(5, {(0, 1): 1, (0, 2): 1, (0, 3): 1})
    p = prod + extra
    assert np.array_equal(homogenize(dehomogenize(p)).coeffs, p.coeffs)


def test_homogenize_agrees_with_affine(rng):
    q = AffinePoly(rand_coeffs(rng, 4))
    p = homogenize(q)
    for x, y in rng.standard_normal((50, 2)) + 1j * rng.standard_normal((50, 2)):
        assert abs(p(x, y, 1) - q(x, y)) <= 1e-12 * max(1.0, abs(q(x, y)))


def test_homogenize_rejects_zero():
    with pytest.raises(DegenerateInput):
        homogenize(AffinePoly(np.zeros((3, 3))))


def test_dehomogenize_inverse_exact(rng):
    q = AffinePoly(rand_coeffs(rng, 5))
    assert np.array_equal(dehomogenize(homogenize(q)).coeffs, q.coeffs)


def test_evaluate_examples():
    assert evaluate(HomoPoly.from_terms(2, {(2, 0): 1}), ProjectivePoint(1, 0, 0)) == 1
    w = LinearForm(1, 0, 0).as_poly() * LinearForm(1, 2, 0) * LinearForm(1, -3, 0) - HomoPoly.from_terms(
        3, {(0, 1): 1}
    )
    assert evaluate(w, [0, 1, 0]) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_evaluate_matches_monomial_sum(rng, n):
    p = rand_homo(rng, n)
    for v in sphere(rng, 20) * 3:
        ref = naive_eval(p.coeffs, *v)
        assert abs(p(*v) - ref) <= 1e-13 * max(1.0, np.abs(p.coeffs).sum() * 3**n)


def test_homogeneity(rng):
    for _ in range(100):
        n = int(rng.integers(1, 6))
        p = rand_homo(rng, n)
        v = sphere(rng, 1)[0]
        lam = complex(*rng.standard_normal(2))
        base = p(*v)
        assert abs(p(*(lam * v)) - lam**n * base) <= 1e-10 * (1 + abs(base)) * abs(lam) ** n


def test_homopoly_rejects_terms_above_degree():
    c = np.zeros((3, 3))
    c[2, 2] = 1
    with pytest.raises(ValueError):
        HomoPoly(c)


def test_deficient_flag():
    assert HomoPoly.from_terms(2, {(1, 0): 1, (0, 0): 1}).is_deficient
    assert not HomoPoly.from_terms(2, {(1, 1): 1}).is_deficient


def test_transform_identity(rng):
    p = rand_homo(rng, 4)
    assert apply_transform(p, ProjectiveTransform.identity()).allclose(p, 1e-15)


def test_transform_pointwise(rng):
    p = rand_homo(rng, 5)
    T = ProjectiveTransform(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    pt = apply_transform(p, T)
    for v in sphere(rng, 20):
        ref = p(*(T.matrix @ v))
        assert abs(pt(*v) - ref) <= 1e-11 * (1 + abs(ref)) * np.linalg.norm(T.matrix) ** 5


def test_transform_roundtrip(rng):
    for n in range(1, 6):
        p = rand_homo(rng, n)
        T = ProjectiveTransform(rng.standard_normal((3, 3)))
        back = apply_transform(apply_transform(p, T), T.inv())
        assert back.allclose(p, 1e-10)


def test_transform_composition(rng):
    p = rand_homo(rng, 4)
    T1 = ProjectiveTransform(rng.standard_normal((3, 3)))
    T2 = ProjectiveTransform(rng.standard_normal((3, 3)))
    lhs = apply_transform(p, compose(T1, T2))
    rhs = apply_transform(apply_transform(p, T2), T1)
    assert lhs.allclose(rhs, 1e-10)


def test_singular_transform_rejected():
    with pytest.raises(ValueError):
        ProjectiveTransform(np.ones((3, 3)))


def test_rotated_weierstrass_roots():
    # x(x+y)(x-y) - y z^2 after a rotation by pi/4 around x
    x, y, z = LinearForm(1, 0, 0), LinearForm(0, 1, 0), LinearForm(0, 0, 1)
    w = x.as_poly() * LinearForm(1, 1, 0) * LinearForm(1, -1, 0) - y * z * z
    pt = apply_transform(w, rotation("x", math.pi / 4))
    n = pt.degree
    at_y = [pt.coef(i, n - i) for i in range(n + 1)]
    roots = np.roots(at_y[::-1])
    expected = [0.936717, -0.468359 + 0.397592j, -0.468359 - 0.397592j]
    for e in expected:
        assert np.min(np.abs(roots - e)) <= 1e-5


def test_random_rotation_deterministic_and_orthogonal():
    for axis in ("x", "z"):
        a = random_rotation(axis, 7).matrix
        b = random_rotation(axis, 7).matrix
        assert np.array_equal(a, b)
        assert np.allclose(a.T @ a, np.eye(3), atol=1e-14)
    assert not np.array_equal(random_rotation("x", 1).matrix, random_rotation("x", 2).matrix)
    Q = random_orthogonal(3).matrix
    assert np.allclose(Q.T @ Q, np.eye(3), atol=1e-14)


def test_rotation_quarter_turn():
    r = math.sqrt(2) / 2
    m = rotation("x", math.pi / 4).matrix
    assert np.allclose(m, [[1, 0, 0], [0, r, r], [0, -r, r]], atol=1e-15)


def test_power_of_line_detected():
    p = power_of_form(LinearForm(1, 2, -1), 5)
    line = is_power_of_line(p)
    assert line is not None and line.proportional_to(LinearForm(1, 2, -1))


def test_power_of_line_complex():
    p = power_of_form(LinearForm(1, 1j, 0), 3)
    line = is_power_of_line(p)
    assert line is not None
    assert np.linalg.norm(power_of_form(line, 3).coeffs - p.coeffs) < 1e-12


def test_power_of_line_matches_expansion(rng):
    f = LinearForm(*rng.standard_normal(3))
    expected = np.ones((1, 1), dtype=complex)
    lin = np.array([[f.t, f.s], [f.r, 0]], dtype=complex)
    for _ in range(4):
        expected = dict_mul(expected, lin)
    assert np.allclose(power_of_form(f, 4).coeffs, expected, atol=1e-12)


def test_power_of_line_rejects_example_quintic():
    x = LinearForm(1, 0, 0)
    prod = x.as_poly() * LinearForm(1, -1, -1) * LinearForm(1, 1, 1) * LinearForm(1, -2, -2) * LinearForm(1, 2, 2)
    p = prod + HomoPoly.from_terms(5, {(0, 1): 1, (0, 2): 1, (0, 3): 1})
    assert is_power_of_line(p) is None


def test_projective_point_equality():
    assert ProjectivePoint(1, 2, 3) == ProjectivePoint(2, 4, 6)
    assert ProjectivePoint(1, 2, 3) != ProjectivePoint(1, 2, 4)
    with pytest.raises(ValueError):
        ProjectivePoint(0, 0, 0)


@settings(max_examples=50, deadline=None)
@given(
    st.integers(1, 5),
    st.lists(st.floats(-3, 3, allow_nan=False), min_size=21, max_size=21),
    st.lists(st.floats(-2, 2, allow_nan=False), min_size=3, max_size=3),
)
def test_evaluate_property(n, vals, v):
    c = np.zeros((n + 1, n + 1), dtype=complex)
    k = 0
    for i in range(n + 1):
        for j in range(n + 1 - i):
            c[i, j] = vals[k]
            k += 1
    p = HomoPoly(c)
    ref = naive_eval(c, *v)
    assert abs(p(*v) - ref) <= 1e-12 * (1 + np.abs(c).sum() * 3**n)
