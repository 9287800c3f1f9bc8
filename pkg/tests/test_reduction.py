import itertools

import numpy as np
import pytest

from conftest import forms_product, naive_eval, rand_form, rand_homo, sphere
from detrep.errors import NearZeroLeadingCoefficient, NeedsRotation, SingularPoint, TangentIsCoordinateLine
from detrep.polycore import HomoPoly, LinearForm, apply_transform, random_rotation
from detrep.reduction import (
    Variant,
    beta_permutations,
    choose_pair_34,
    intersection_34,
    order_for_decomposable_cubic,
    order_for_min_q0,
    order_min_slot,
    order_separated_slot,
    pair_34_candidates,
    reduce,
    reduce_tangent,
    reduce_with_roots,
    slot34_ok,
)
from detrep.rootfind import restriction_roots

X, Y, Z = LinearForm(1, 0, 0), LinearForm(0, 1, 0), LinearForm(0, 0, 1)


def weierstrass(t1=1.0, t2=-1.0):
    return X.as_poly() * LinearForm(1, t1, 0) * LinearForm(1, t2, 0) - HomoPoly.from_terms(3, {(0, 1): 1})


def example_quintic():
    prod = X.as_poly() * LinearForm(1, -1, -1) * LinearForm(1, 1, 1) * LinearForm(1, -2, -2) * LinearForm(1, 2, 2)
    return prod + HomoPoly.from_terms(5, {(0, 1): 1, (0, 2): 1, (0, 3): 1})


def identity_error(red, pts):
    p = red.poly
    worst = 0.0
    for v in pts:
        pv = naive_eval(p.coeffs, *v)
        lead = red.leading if red.variant is Variant.STANDARD else red.leading(*v)
        rhs = lead * np.prod([v[0] - a * v[1] - b * v[2] for a, b in zip(red.alpha, red.beta)])
        rhs += v[1] * v[2] * naive_eval(red.q.coeffs, *v)
        worst = max(worst, abs(pv - rhs) / (1 + abs(pv)))
    return worst


def test_product_gives_zero_q(rng):
    alpha, beta = rng.standard_normal(4), rng.standard_normal(4)
    p = HomoPoly(forms_product([LinearForm(1, -a, -b) for a, b in zip(alpha, beta)]))
    red = reduce_with_roots(p, alpha, beta)
    assert red.q.norm() <= 1e-13
    assert red.q.degree == 2


def test_weierstrass_reduction():
    red = reduce(weierstrass())
    assert sorted(np.round(red.alpha.real, 12)) == [-1, 0, 1]
    assert np.all(red.beta == 0)
    assert np.allclose(red.q.coeffs, [[0, 0], [0, 0]] + np.array([[-1, 0], [0, 0]]), atol=1e-14)


def test_example_quintic_reduction():
    ab = np.array([2, -2, 1, -1, 0], dtype=complex)
    red = reduce_with_roots(example_quintic(), ab, ab)
    expected = HomoPoly.from_terms(3, {(0, 0): 1, (0, 1): 1, (0, 2): 1})
    assert red.q.allclose(expected, 1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("field", ["real", "complex"])
def test_reduction_identity_random(rng, n, field):
    pts = sphere(rng, 50)
    for _ in range(100):
        p = rand_homo(rng, n, field)
        red = reduce(p)
        assert red.residual <= 1e-10
        assert red.q.degree == n - 2
        assert identity_error(red, pts) <= 1e-9 * max(1.0, p.norm())


def test_reduce_requires_leading():
    with pytest.raises(NearZeroLeadingCoefficient):
        reduce(HomoPoly.from_terms(3, {(2, 1): 1, (0, 0): 1}))


def test_wrong_pairing_detected():
    from detrep.errors import ReductionResidual

    p = LinearForm(1, -1, -1) * LinearForm(1, -2, -3)
    with pytest.raises(ReductionResidual):
        reduce_with_roots(p, [1, 2], [1, 5])


def test_tangent_coordinate_line():
    p = HomoPoly.from_terms(3, {(2, 1): 1, (0, 3): -1, (1, 0): 1, (0, 0): 1})
    with pytest.raises(TangentIsCoordinateLine):
        reduce_tangent(p)


def test_tangent_identity(rng):
    p = LinearForm(0, 1, 1) * LinearForm(1, -1, 0) * LinearForm(1, 0, -1)
    red = reduce_tangent(p)
    assert red.variant is Variant.TANGENT
    assert len(red.alpha) == 2
    assert identity_error(red, sphere(rng, 50)) <= 1e-12


def test_tangent_identity_random(rng):
    for n in (3, 4, 5):
        for _ in range(20):
            c = rand_homo(rng, n).coeffs.copy()
            c[n, 0] = 0
            red = reduce_tangent(HomoPoly(c))
            assert identity_error(red, sphere(rng, 20)) <= 1e-9 * np.linalg.norm(c)


def test_tangent_singular_point():
    p = HomoPoly.from_terms(3, {(1, 1): 1, (0, 3): 1, (0, 0): 1})  # xyz + y^3 + z^3
    with pytest.raises(SingularPoint):
        reduce_tangent(p)


def test_min_q0_decomposable():
    red = order_for_min_q0(LinearForm(1, -1, -1) * LinearForm(1, -2, -3))
    assert abs(red.q0) <= 1e-12


def test_min_q0_sphere(rng):
    p = HomoPoly.from_terms(2, {(2, 0): 1, (0, 2): 1, (0, 0): 1})
    alpha, beta = restriction_roots(p)
    options = [reduce_with_roots(p, alpha, b) for b in (beta, beta[::-1])]
    red = order_for_min_q0(p)
    assert abs(red.q0) == min(abs(o.q0) for o in options)
    assert identity_error(red, sphere(rng, 10)) <= 1e-12


def test_min_q0_random_decomposable(rng):
    for _ in range(100):
        p = rand_form(rng) * rand_form(rng)
        p = HomoPoly(p.coeffs / p.coeffs[2, 0])
        alpha, beta = restriction_roots(p)
        qs = sorted(abs(reduce_with_roots(p, alpha, b, check=False).q0) for b in (beta, beta[::-1]))
        assert abs(order_for_min_q0(p).q0) <= 1e-8 * p.norm()
        assert qs[0] <= 1e-8 * p.norm()


def test_decomposable_cubic():
    p = LinearForm(1, -1, 0) * LinearForm(1, -2, -1) * LinearForm(1, 1, 3)
    assert order_for_decomposable_cubic(p).q.norm() <= 1e-8 * p.norm()


def test_decomposable_cubic_weierstrass():
    red = order_for_decomposable_cubic(weierstrass())
    assert red.q.allclose(-1 * Z.as_poly(), 1e-14)


def test_decomposable_cubic_exhaustive(rng):
    for _ in range(20):
        p = rand_homo(rng, 3)
        alpha, beta = restriction_roots(p)
        perms = [np.array(q) for q in itertools.permutations(beta)]
        assert len(beta_permutations(beta)) == 6
        best = min(reduce_with_roots(p, alpha, b).q.norm() for b in perms)
        assert order_for_decomposable_cubic(p).q.norm() == pytest.approx(best, rel=1e-12)


def test_beta_permutations_dedup():
    assert len(beta_permutations(np.array([0, 0, 0]))) == 1
    assert len(beta_permutations(np.array([1, 1, 2]))) == 3


def test_example_quintic_slot_pair_accepted():
    p = example_quintic()
    ab = np.array([2, -2, 1, -1, 0], dtype=complex)
    red = reduce_with_roots(p, ab, ab)
    pt = intersection_34(red.alpha, red.beta)
    # the lines x - y - z and x + y + z meet at (0, 1, -1), where p = 1
    assert np.allclose(pt, [0, -2, 2])
    assert naive_eval(p.coeffs, 0, 1, -1) == 1
    assert slot34_ok(p, red)


def test_repeated_alpha_slot_rejected():
    p = example_quintic()
    ab = np.array([2, -2, 1, 1, 0], dtype=complex)
    red = reduce_with_roots(p, np.array([2, -2, 1, -1, 0], dtype=complex), np.array([2, -2, 1, -1, 0]))
    fake = type(red)(ab, red.beta, red.leading, red.q, red.variant, red.poly)
    assert not slot34_ok(p, fake)
    chosen = choose_pair_34(p, red)
    assert chosen.alpha[2] != chosen.alpha[3] and chosen.beta[2] != chosen.beta[3]
    assert slot34_ok(p, chosen)


def test_candidates_ranked(rng):
    p = rand_homo(rng, 5)
    red = reduce(p)
    scores = []
    for cand in itertools.islice(pair_34_candidates(p, red), 10):
        scores.append(abs(cand.alpha[2] - cand.alpha[3]) * abs(cand.beta[2] - cand.beta[3]))
        assert cand.residual <= 1e-10
    assert scores == sorted(scores, reverse=True)


def test_needs_rotation_then_recovers():
    # all alpha coincide, so no admissible slot pair exists
    p = HomoPoly.from_terms(5, {(5, 0): 1, (0, 4): 1, (0, 1): 1, (1, 2): 1})
    with pytest.raises(NeedsRotation):
        choose_pair_34(p, reduce(p))
    pr = apply_transform(p, random_rotation("x", 11))
    assert slot34_ok(pr, choose_pair_34(pr, reduce(pr)))


def test_slot_orderings():
    vals = np.array([3, 0.1, -2, 5])
    assert order_min_slot(vals, 2)[2] == 0.1
    assert list(order_min_slot(vals, 2)) == [3, -2, 0.1, 5]
    vals = np.array([1.0, 1.0 + 1e-9, 4.0, 1.5])
    assert order_separated_slot(vals, 2)[2] == 4.0
