"""Skew primitives: norm, Pfaffians, canonical form, SVD, sampling, records."""
from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfaffian_varieties.skew import (
    as_skew,
    basis,
    block_form,
    canonical_decompose,
    derive_rng,
    from_record,
    pfaffian_expand,
    pfaffian_fast,
    principal_pfaffian,
    random_skew,
    random_special_orthogonal,
    read_matrix,
    skew_norm,
    skew_svd,
    to_record,
    write_matrix,
)


def pfaffian_by_matchings(m):
    """Brute-force Pfaffian: signed sum over perfect matchings (permutation form)."""
    n = m.shape[0]
    if n % 2:
        return 0.0
    total = 0.0
    for perm in permutations(range(n)):
        pairs = [perm[2 * i:2 * i + 2] for i in range(n // 2)]
        if any(a > b for a, b in pairs) or any(pairs[i][0] > pairs[i + 1][0] for i in range(len(pairs) - 1)):
            continue
        inversions = sum(1 for i, j in combinations(range(n), 2) if perm[i] > perm[j])
        term = (-1) ** inversions
        for a, b in pairs:
            term *= m[a, b]
        total += term
    return total


def test_basis_has_unit_norm():
    for i, j in combinations(range(5), 2):
        x = basis(5, i, j)
        assert skew_norm(x) == pytest.approx(1.0)
        assert x[i, j] == 1 and x[j, i] == -1


def test_as_skew_rejects_nonskew():
    with pytest.raises(ValueError):
        as_skew(np.ones((3, 3)))
    with pytest.raises(ValueError):
        as_skew(np.zeros((2, 3)))


def test_pfaffian_small_cases():
    assert pfaffian_expand(2.5 * basis(2, 0, 1)) == pytest.approx(2.5)
    assert pfaffian_expand(random_skew(3, 1)) == 0.0
    assert pfaffian_expand(random_skew(5, 2)) == 0.0
    assert pfaffian_expand(np.zeros((0, 0))) == 1.0
    a, b, c, d, e, f = 1.3, -0.7, 2.1, 0.4, -1.9, 0.8
    m = np.zeros((4, 4))
    m[0, 1], m[0, 2], m[0, 3], m[1, 2], m[1, 3], m[2, 3] = a, b, c, d, e, f
    m = m - m.T
    assert pfaffian_expand(m) == pytest.approx(a * f - b * e + c * d)
    assert pfaffian_fast(m) == pytest.approx(a * f - b * e + c * d)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_pfaffian_matches_matching_sum(n):
    m = random_skew(n, derive_rng(7, n))
    assert pfaffian_expand(m) == pytest.approx(pfaffian_by_matchings(m), rel=1e-12)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_pfaffian_squares_to_determinant(n):
    ms = random_skew(n, derive_rng(3, n), size=200)
    pf = pfaffian_expand(ms)
    det = np.linalg.det(ms)
    np.testing.assert_allclose(pf**2, det, rtol=1e-8)


@pytest.mark.parametrize("n", [4, 7, 10, 12])
def test_pfaffian_fast_agrees_with_expansion(n):
    rng = derive_rng(11, n)
    for _ in range(50):
        m = random_skew(n, rng)
        assert pfaffian_fast(m) == pytest.approx(pfaffian_expand(m), rel=1e-9, abs=1e-300)
    assert pfaffian_fast(np.zeros((n, n))) == 0.0


def test_pfaffian_fast_random_ten():
    m = random_skew(10, 5)
    assert pfaffian_fast(m) ** 2 == pytest.approx(np.linalg.det(m), rel=1e-9)


@pytest.mark.parametrize("sign", [1, -1])
def test_pfaffian_conjugation_rule(sign):
    rng = derive_rng(4, sign + 1)
    m = random_skew(6, rng)
    p = random_special_orthogonal(6, rng)
    if sign < 0:
        p[:, 0] = -p[:, 0]
    assert pfaffian_expand(p @ m @ p.T) == pytest.approx(sign * pfaffian_expand(m), rel=1e-10)


def test_principal_pfaffian():
    m = random_skew(6, 9)
    assert principal_pfaffian(m, [1, 4]) == m[1, 4]
    assert principal_pfaffian(m, range(6)) == pytest.approx(pfaffian_expand(m))
    rot = random_special_orthogonal(6, 9)
    low = rot @ block_form([2.0, 1.0], 6) @ rot.T
    for idx in combinations(range(6), 4):
        sub = low[np.ix_(idx, idx)]
        assert principal_pfaffian(low, idx) == pytest.approx(pfaffian_expand(sub), abs=1e-12)
    with pytest.raises(ValueError):
        principal_pfaffian(m, [0, 1, 2])
    with pytest.raises(ValueError):
        principal_pfaffian(m, [0, 6])
    with pytest.raises(ValueError):
        principal_pfaffian(m, [2, 1])


def test_canonical_already_canonical():
    cf = canonical_decompose(3 * basis(4, 0, 1) + basis(4, 2, 3))
    np.testing.assert_allclose(cf.pairs, [3, 1])
    np.testing.assert_allclose(cf.matrix(), 3 * basis(4, 0, 1) + basis(4, 2, 3), atol=1e-14)
    # q can only differ from the identity by rotations inside each plane
    assert np.allclose(np.abs(cf.q[:2, 2:]), 0) and np.allclose(np.abs(cf.q[2:, :2]), 0)


def test_canonical_round_trip_and_orientation():
    rot = random_special_orthogonal(5, 21)
    m = rot @ (2 * basis(5, 0, 1)) @ rot.T
    cf = canonical_decompose(m)
    assert cf.rank2k == 2
    np.testing.assert_allclose(cf.pairs, [2.0])
    assert skew_norm(cf.matrix() - m) < 1e-10
    assert np.linalg.det(cf.q) == pytest.approx(1.0)
    np.testing.assert_allclose(cf.q @ cf.q.T, np.eye(5), atol=1e-12)


def test_canonical_zero_matrix():
    cf = canonical_decompose(np.zeros((4, 4)))
    assert cf.rank2k == 0 and cf.pairs.size == 0
    np.testing.assert_array_equal(cf.q, np.eye(4))


def test_canonical_full_rank_negative_pfaffian():
    m = -basis(2, 0, 1)
    cf = canonical_decompose(m)
    np.testing.assert_allclose(cf.pairs, [1.0])
    assert cf.orientation == -1
    np.testing.assert_allclose(cf.matrix(), m, atol=1e-15)


def test_canonical_relative_rank_threshold():
    m = block_form([1.0, 1e-12], 4)
    assert canonical_decompose(m, tol=1e-9).rank2k == 2
    assert canonical_decompose(1e6 * m, tol=1e-9).rank2k == 2
    assert canonical_decompose(m, tol=1e-14).rank2k == 4


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2**32 - 1))
def test_canonical_reconstructs(n, seed):
    m = random_skew(n, seed)
    cf = canonical_decompose(m, tol=0.0)
    assert skew_norm(cf.matrix() - m) <= 1e-9 * skew_norm(m)
    assert np.all(np.diff(cf.pairs) <= 0) and np.all(cf.pairs > 0)
    if cf.rank2k < n:
        assert np.linalg.det(cf.q) == pytest.approx(1.0)


def test_skew_svd_two_by_two():
    svd = skew_svd(3.0 * basis(2, 0, 1))
    np.testing.assert_allclose(svd.sigma, [3.0, 3.0])
    np.testing.assert_allclose(svd.u @ svd.v.T, [[0, 1], [-1, 0]], atol=1e-15)


def test_skew_svd_zero_and_random():
    z = skew_svd(np.zeros((3, 3)))
    np.testing.assert_array_equal(z.sigma, 0)
    np.testing.assert_array_equal(z.u, np.eye(3))
    m = random_skew(6, 8)
    svd = skew_svd(m)
    np.testing.assert_allclose(svd.matrix(), m, atol=1e-12)
    np.testing.assert_allclose(svd.u @ svd.u.T, np.eye(6), atol=1e-12)
    # dense oracle: singular values equal the eigenvalue magnitudes
    np.testing.assert_allclose(svd.sigma, np.linalg.svd(m, compute_uv=False), rtol=1e-12)
    np.testing.assert_allclose(svd.sigma, np.sort(np.abs(np.linalg.eigvals(m)))[::-1], rtol=1e-10)
    assert np.all(svd.sigma[::2] == svd.sigma[1::2])


def test_random_generators_deterministic():
    np.testing.assert_array_equal(random_special_orthogonal(5, 42), random_special_orthogonal(5, 42))
    np.testing.assert_array_equal(random_skew(5, 42, scale=2.0), random_skew(5, 42, scale=2.0))
    np.testing.assert_array_equal(random_special_orthogonal(1, 0), [[1.0]])
    qs = random_special_orthogonal(6, 1, size=100)
    np.testing.assert_allclose(qs @ np.swapaxes(qs, -1, -2), np.broadcast_to(np.eye(6), qs.shape), atol=1e-12)
    np.testing.assert_allclose(np.linalg.det(qs), 1.0, atol=1e-12)


def test_haar_orbit_mean_vanishes():
    qs = random_special_orthogonal(4, 2024, size=10_000)
    samples = qs @ basis(4, 0, 1) @ np.swapaxes(qs, -1, -2)
    mean = samples.mean(axis=0)
    err = samples.std(axis=0) / np.sqrt(len(samples))
    iu = np.triu_indices(4, 1)
    assert np.all(np.abs(mean[iu]) < 3 * err[iu] + 1e-15)


def test_record_round_trip(tmp_path):
    m = random_skew(5, 3)
    np.testing.assert_array_equal(from_record(to_record(m)), m)
    path = tmp_path / "m.json"
    write_matrix(path, m)
    np.testing.assert_array_equal(read_matrix(path), m)
    with pytest.raises(ValueError):
        from_record({"n": 4, "upper": [1.0, 2.0]})
