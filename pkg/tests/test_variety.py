"""Membership, projection and distance for C(n, 2r)."""
import numpy as np
import pytest

from pfaffian_varieties.skew import basis, block_form, derive_rng, random_skew, random_special_orthogonal, skew_norm
from pfaffian_varieties.variety import (
    VarietySpec,
    codimension,
    contains_pfaffian,
    contains_rank,
    dimension,
    distance,
    principal_pfaffians,
    project,
    stratum,
)


def X(n, i, j):
    return basis(n, i, j)


def test_spec_validation():
    VarietySpec(2, 0)
    with pytest.raises(ValueError):
        VarietySpec(4, 2)
    with pytest.raises(ValueError):
        VarietySpec(5, -1)


@pytest.mark.parametrize(
    "n, r, dim, codim",
    [(4, 1, 5, 1), (5, 1, 7, 3), (6, 2, 14, 1), (7, 2, 18, 3)],
)
def test_dimension_table(n, r, dim, codim):
    spec = VarietySpec(n, r)
    assert dimension(spec) == dim
    assert codimension(spec) == codim
    assert spec.ambient_dimension - dim == codim


def test_hypersurface_and_codim_three_families():
    for m in range(2, 7):
        assert VarietySpec(2 * m, m - 1).codimension == 1
        assert VarietySpec(2 * m + 1, m - 1).codimension == 3


def test_contains_rank_examples():
    spec = VarietySpec(4, 1)
    assert not contains_rank(spec, X(4, 0, 1) + X(4, 2, 3))
    assert contains_rank(spec, X(4, 0, 1))
    for n, r in [(4, 1), (7, 2), (10, 4)]:
        assert contains_rank(VarietySpec(n, r), np.zeros((n, n)))
    with pytest.raises(ValueError):
        contains_rank(spec, np.zeros((5, 5)))


def test_contains_pfaffian_examples():
    assert contains_pfaffian(VarietySpec(4, 1), X(4, 0, 1))
    m = X(6, 0, 1) + X(6, 2, 3) + X(6, 4, 5)
    assert principal_pfaffians(m, 6) == pytest.approx([1.0])
    assert not contains_pfaffian(VarietySpec(6, 2), m)
    with pytest.raises(ValueError):
        contains_pfaffian(VarietySpec(6, 2), np.zeros((4, 4)))


@pytest.mark.parametrize("n, r", [(4, 1), (5, 1), (6, 2), (7, 2), (8, 3)])
def test_membership_routes_agree_on_projections(n, r):
    spec = VarietySpec(n, r)
    rng = derive_rng(5, n, r)
    for _ in range(400):
        m = random_skew(n, rng)
        p = project(spec, m).matrix
        assert contains_rank(spec, p) and contains_pfaffian(spec, p)
        assert contains_rank(spec, m) == contains_pfaffian(spec, m)


def test_contains_pfaffian_is_scale_invariant():
    spec = VarietySpec(6, 2)
    rot = random_special_orthogonal(6, 3)
    member = rot @ block_form([2.0, 0.5], 6) @ rot.T
    for c in [1e-6, 1.0, 1e6]:
        assert contains_pfaffian(spec, c * member)
        assert not contains_pfaffian(spec, c * (member + rot @ X(6, 4, 5) @ rot.T))


def test_project_examples():
    spec = VarietySpec(4, 1)
    m = 3 * X(4, 0, 1) + X(4, 2, 3)
    proj = project(spec, m)
    np.testing.assert_allclose(proj.matrix, 3 * X(4, 0, 1), atol=1e-14)
    assert proj.unique
    assert distance(spec, m) == pytest.approx(1.0)
    tie = project(spec, X(4, 0, 1) + X(4, 2, 3))
    assert not tie.unique
    assert skew_norm(tie.matrix) == pytest.approx(1.0)
    assert contains_rank(spec, tie.matrix)


def test_project_beats_sampled_members():
    # brute-force oracle: no sampled rank-2 matrix gets closer than distance 1
    spec = VarietySpec(4, 1)
    m = 3 * X(4, 0, 1) + X(4, 2, 3)
    rng = derive_rng(17)
    rots = random_special_orthogonal(4, rng, size=5000)
    scales = rng.uniform(0, 5, 5000)[:, None, None]
    members = scales * (rots @ X(4, 0, 1) @ np.swapaxes(rots, -1, -2))
    dists = np.sqrt(0.5 * np.sum((members - m) ** 2, axis=(-2, -1)))
    assert dists.min() >= distance(spec, m) - 1e-12


def test_project_idempotent_and_equivariant():
    spec = VarietySpec(7, 2)
    rng = derive_rng(8)
    for _ in range(20):
        m = random_skew(7, rng)
        p = project(spec, m).matrix
        np.testing.assert_allclose(project(spec, p).matrix, p, atol=1e-10)
        assert distance(spec, p) < 1e-10
        q = random_special_orthogonal(7, rng)
        np.testing.assert_allclose(project(spec, q @ m @ q.T).matrix, q @ p @ q.T, atol=1e-8)


def test_distance_identities():
    spec = VarietySpec(8, 3)
    rng = derive_rng(9)
    for _ in range(50):
        m = random_skew(8, rng)
        p = project(spec, m).matrix
        d = distance(spec, m)
        assert d == pytest.approx(skew_norm(m - p), rel=1e-10)
        assert d**2 + skew_norm(p) ** 2 == pytest.approx(skew_norm(m) ** 2, rel=1e-9)
        c = rng.uniform(-3, 3)
        assert distance(spec, c * m) == pytest.approx(abs(c) * d, rel=1e-10)


def test_stratum():
    assert stratum(np.zeros((5, 5))) == 0
    assert stratum(block_form([2.0, 1.0], 6)) == 4
    q = random_special_orthogonal(6, 1)
    assert stratum(q @ block_form([1.0, 1.0, 1.0], 6) @ q.T) == 6
