"""Tangent-cone membership, factorization, approach curves and distance bounds."""
import numpy as np
import pytest

from pfaffian_varieties.errors import DegenerateFitError, OffVarietyError, StepTooLargeError
from pfaffian_varieties.skew import basis, block_form, derive_rng, random_skew, random_special_orthogonal, skew_norm
from pfaffian_varieties.tangent import (
    TangentQuery,
    approach_curve,
    approach_residual,
    factorize_tangent_cone,
    membership_oracle,
    nearly_regular_flag,
    nonmember_distance_bound,
    order_fit,
    random_query,
    separation_check,
    tangent_cone_annotation,
    tangent_membership,
    weyl_bounds_check,
    weyl_sigma,
    weyl_threshold,
)
from pfaffian_varieties.variety import VarietySpec, contains_rank, dimension, distance


def X(n, i, j):
    return basis(n, i, j)


# -- membership ----------------------------------------------------------


def test_membership_examples():
    m0 = X(4, 0, 1)
    assert tangent_membership(TangentQuery.build(m0, X(4, 0, 2), 1))
    assert not tangent_membership(TangentQuery.build(m0, X(4, 2, 3), 1))
    with pytest.raises(OffVarietyError):
        TangentQuery.build(X(4, 0, 1) + X(4, 2, 3), X(4, 0, 2), 1)
    with pytest.raises(ValueError):
        TangentQuery.build(m0, np.zeros((5, 5)), 1)


def test_membership_at_apex_is_variety_membership():
    rng = derive_rng(1)
    for n, r in [(4, 1), (5, 1), (6, 2), (7, 2)]:
        spec = VarietySpec(n, r)
        for _ in range(30):
            v = random_skew(n, rng)
            if rng.random() < 0.5:
                q = random_special_orthogonal(n, rng)
                v = q @ block_form(rng.uniform(0.5, 2, r), n) @ q.T
            q0 = TangentQuery.build(np.zeros((n, n)), v, r)
            assert q0.k == 0
            assert tangent_membership(q0) == contains_rank(spec, v)


@pytest.mark.parametrize("n, r, k", [(4, 1, 1), (5, 1, 1), (6, 2, 1), (6, 2, 2)])
def test_membership_matches_definition_oracle(n, r, k):
    for member in (True, False):
        if not member and 2 * (r - k + 1) > n - 2 * k:
            continue
        for i in range(3):
            q = random_query(n, r, k, member, seed=derive_rng(2, n, r, k, member, i))
            assert tangent_membership(q) == member
            assert membership_oracle(q.base, q.direction, r) == member


# -- factorization -------------------------------------------------------


def test_factorization_examples():
    cross, euclid = factorize_tangent_cone(6, 2, 2)
    assert cross == VarietySpec(2, 0)
    assert euclid == dimension(VarietySpec(6, 2))
    for m in range(3, 8):
        cross, euclid = factorize_tangent_cone(2 * m, m - 1, m - 2)
        assert (cross.n, 2 * cross.r) == (4, 2)
        assert euclid == (m - 2) * (2 * m + 3)
    with pytest.raises(ValueError):
        factorize_tangent_cone(7, 2, 3)


def test_factorization_dimension_consistency():
    for n in range(2, 13):
        for r in range(0, n // 2):
            for k in range(r + 1):
                cross, euclid = factorize_tangent_cone(n, r, k)
                assert dimension(cross) + euclid == dimension(VarietySpec(n, r))


# -- approach curves and slopes ------------------------------------------


def test_approach_curve_at_zero_and_membership():
    q = random_query(7, 2, 1, True, seed=3)
    np.testing.assert_allclose(approach_curve(q, 0.0), q.base, atol=1e-12)
    spec = VarietySpec(7, 2)
    for t in np.logspace(-1, -4, 4):
        assert contains_rank(spec, approach_curve(q, t))
    ratio = approach_residual(q, 1e-3) / approach_residual(q, 5e-4)
    assert ratio == pytest.approx(4.0, rel=0.02)


def test_member_slope_is_two():
    for n, r, k in [(5, 1, 1), (7, 2, 1), (8, 3, 2)]:
        fit = order_fit(random_query(n, r, k, True, seed=derive_rng(4, n)))
        assert fit.member and 1.9 <= fit.slope <= 2.1


def test_nonmember_slope_example():
    q = TangentQuery.build(X(4, 0, 1), X(4, 2, 3), 1)
    fit = order_fit(q)
    assert not fit.member
    assert fit.slope == pytest.approx(1.0, abs=1e-6)
    # Dist(M0 + tV) = t exactly, which is t times the tail of D's pairs
    np.testing.assert_allclose(fit.values, fit.t, rtol=1e-10)
    assert np.exp(fit.intercept) > 0


def test_nonmember_constant_scales_with_direction():
    q = random_query(6, 2, 1, False, seed=5)
    q2 = TangentQuery.build(q.base, 2 * q.direction, q.r)
    c1 = np.exp(order_fit(q).intercept)
    c2 = np.exp(order_fit(q2).intercept)
    assert c2 / c1 == pytest.approx(2.0, rel=0.05)


def test_degenerate_fit_and_step_errors():
    # the curve for V = X_13 at M0 = X_12 has no second-order term: residuals vanish
    q = TangentQuery.build(X(4, 0, 1), X(4, 0, 2), 1)
    assert max(approach_residual(q, t) for t in (1e-1, 1e-2)) < 1e-15
    with pytest.raises(DegenerateFitError):
        order_fit(q)
    # M + tA is singular at t = 1 when A = -M
    q = TangentQuery.build(X(4, 0, 1), -X(4, 0, 1) + X(4, 0, 2), 1)
    np.testing.assert_allclose(q.a, -q.m, atol=1e-15)
    with pytest.raises(StepTooLargeError):
        approach_curve(q, 1.0)


# -- spectral separation -------------------------------------------------


def test_weyl_with_zero_upper_block():
    q = TangentQuery.build(3 * X(6, 0, 1), X(6, 2, 3) + X(6, 4, 5) + X(6, 0, 3), 1)
    np.testing.assert_allclose(q.a, 0, atol=1e-15)
    assert weyl_sigma(q, 0.1) == 0.0
    assert weyl_bounds_check(q, 0.1)


def test_weyl_bounds_and_threshold():
    rng = derive_rng(6)
    for n, r, k in [(6, 2, 1), (8, 3, 2), (9, 3, 1)]:
        q = random_query(n, r, k, False, seed=rng)
        assert weyl_bounds_check(q, 1e-3)
        t0 = weyl_threshold(q)
        assert np.isfinite(t0) and t0 > 0
        for t in np.linspace(0, 0.999 * t0, 20)[1:]:
            assert weyl_bounds_check(q, t)
            assert separation_check(q, t)
            b = nonmember_distance_bound(q, t, t0)
            assert b.below_threshold
            assert b.measured >= b.bound * (1 - 1e-6)


def test_weyl_threshold_apex():
    q = TangentQuery.build(np.zeros((4, 4)), X(4, 0, 1), 1)
    assert weyl_threshold(q) == np.inf


# -- nearly regular points -----------------------------------------------


def test_nearly_regular_examples():
    assert nearly_regular_flag(block_form([2.0, 1.0], 8), VarietySpec(8, 3))
    assert not nearly_regular_flag(block_form([3.0, 2.0], 6), VarietySpec(6, 2))
    assert nearly_regular_flag(block_form([3.0], 6), VarietySpec(6, 2))
    with pytest.raises(OffVarietyError):
        nearly_regular_flag(block_form([3.0, 2.0, 1.0], 6), VarietySpec(6, 2))


def test_hypersurface_annotation():
    for m in range(3, 6):
        spec = VarietySpec(2 * m, m - 1)
        q = random_special_orthogonal(2 * m, m)
        point = q @ block_form(np.arange(m - 2, 0, -1) + 0.5, 2 * m) @ q.T
        ann = tangent_cone_annotation(point, spec)
        assert ann["nearly_regular"] and ann["non_minimizing"]
        assert ann["cross_section"] == (4, 2)
        assert ann["euclidean_dim"] == (m - 2) * (2 * m + 3)
    ann = tangent_cone_annotation(block_form([2.0], 7), VarietySpec(7, 2))
    assert ann["nearly_regular"] and not ann["non_minimizing"]
    assert skew_norm(block_form([2.0], 7)) == pytest.approx(2.0)
    assert distance(VarietySpec(7, 2), block_form([2.0], 7)) == 0.0
