"""Skew-symmetric matrix primitives.

Indices are 0-based throughout: ``basis(n, 0, 1)`` is the matrix with
``+1`` at (0, 1) and ``-1`` at (1, 0).  The metric on skew matrices is
``|M|^2 = tr(M M^T) / 2``, under which the basis matrices are orthonormal
and the coordinate of ``M`` along ``basis(n, i, j)`` is simply ``M[i, j]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import schur

__all__ = [
    "as_skew",
    "basis",
    "block_form",
    "skew_norm",
    "skew_inner",
    "pfaffian_expand",
    "pfaffian_fast",
    "principal_pfaffian",
    "CanonicalForm",
    "canonical_decompose",
    "SkewSVD",
    "skew_svd",
    "derive_rng",
    "random_special_orthogonal",
    "random_skew",
    "to_record",
    "from_record",
    "read_matrix",
    "write_matrix",
]

_SKEW_RTOL = 1e-10


def as_skew(m, copy=True):
    """Validate ``m`` as a (stack of) real skew-symmetric matrices.

    Round-off asymmetry up to ``1e-10`` relative is tolerated and removed by
    antisymmetrizing; anything larger raises ``ValueError``.
    """
    a = np.array(m, dtype=float, copy=copy)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    if a.size == 0:
        return a
    defect = np.max(np.abs(a + np.swapaxes(a, -1, -2)))
    scale = max(1.0, float(np.max(np.abs(a))))
    if not np.isfinite(defect) or defect > _SKEW_RTOL * scale:
        raise ValueError(f"matrix is not skew-symmetric (|M + M^T| = {defect:.3g})")
    return 0.5 * (a - np.swapaxes(a, -1, -2))


def basis(n, i, j):
    """The unit skew matrix with ``+1`` at ``(i, j)`` and ``-1`` at ``(j, i)``."""
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"invalid basis index ({i}, {j}) for n={n}")
    x = np.zeros((n, n))
    x[i, j] = 1.0
    x[j, i] = -1.0
    return x


def block_form(x, n):
    """``M(x) = sum_i x_i * basis(n, 2i, 2i+1)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if 2 * x.size > n:
        raise ValueError(f"{x.size} pairs do not fit in dimension {n}")
    m = np.zeros((n, n))
    idx = np.arange(x.size)
    m[2 * idx, 2 * idx + 1] = x
    m[2 * idx + 1, 2 * idx] = -x
    return m


def skew_norm(m):
    """Norm ``sqrt(tr(M M^T) / 2)``; works on stacks over the last two axes."""
    m = np.asarray(m, dtype=float)
    return np.sqrt(0.5 * np.sum(m * m, axis=(-2, -1)))


def skew_inner(a, b):
    """Inner product ``tr(A B^T) / 2``."""
    return 0.5 * np.sum(np.asarray(a) * np.asarray(b), axis=(-2, -1))


# ---------------------------------------------------------------------------
# Pfaffians


def pfaffian_expand(m):
    """Pfaffian by expansion along the first row, memoized on index subsets.

    Accepts a single matrix or a stack ``(..., n, n)``; the expansion is
    carried out simultaneously for the whole stack.  Cost grows like
    ``2**n`` so this is meant as an exact oracle for ``n <= 12`` or so.

    Examples
    --------
    >>> a, b, c, d, e, f = 1., 2., 3., 4., 5., 6.
    >>> m = np.array([[0, a, b, c], [-a, 0, d, e], [-b, -d, 0, f], [-c, -e, -f, 0]])
    >>> float(pfaffian_expand(m)) == a * f - b * e + c * d
    True
    """
    a = as_skew(m)
    n = a.shape[-1]
    batch = a.shape[:-2]
    if n % 2:
        return _unbatch(np.zeros(batch))
    cache = {(): np.ones(batch)}

    def pf(idx):
        try:
            return cache[idx]
        except KeyError:
            pass
        i0 = idx[0]
        total = np.zeros(batch)
        for p in range(1, len(idx)):
            term = a[..., i0, idx[p]] * pf(idx[1:p] + idx[p + 1:])
            if p % 2:
                total = total + term
            else:
                total = total - term
        cache[idx] = total
        return total

    return _unbatch(pf(tuple(range(n))))


def _unbatch(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


def pfaffian_fast(m):
    """Pfaffian in O(n^3) by Parlett-Reid skew tridiagonalization.

    Gaussian elimination with partial pivoting reduces ``m`` to skew
    tridiagonal form ``L T L^T`` with unit lower-triangular ``L``; the
    Pfaffian is then the product of the super-diagonal entries of ``T`` in
    odd positions, times the sign of the accumulated row/column swaps.
    Stacks are handled by looping.
    """
    a = as_skew(m)
    if a.ndim > 2:
        flat = a.reshape(-1, *a.shape[-2:])
        return np.array([_pfaffian_ltl(x) for x in flat]).reshape(a.shape[:-2])
    return _pfaffian_ltl(a)


def _pfaffian_ltl(a):
    n = a.shape[0]
    if n % 2:
        return 0.0
    a = a.copy()
    pf = 1.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if kp != k + 1:
            a[[k + 1, kp], k:] = a[[kp, k + 1], k:]
            a[k:, [k + 1, kp]] = a[k:, [kp, k + 1]]
            pf = -pf
        if a[k + 1, k] == 0.0:
            return 0.0
        pf *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            col = a[k + 2:, k + 1]
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return float(pf)


def principal_pfaffian(m, indices):
    """Pfaffian of the principal submatrix selected by ``indices`` (0-based).

    ``indices`` must be strictly increasing and of even length.
    """
    a = as_skew(m)
    idx = np.asarray(indices, dtype=int)
    n = a.shape[-1]
    if idx.ndim != 1 or idx.size % 2:
        raise ValueError("indices must be a 1-d sequence of even length")
    if idx.size and (idx[0] < 0 or idx[-1] >= n or np.any(np.diff(idx) <= 0)):
        raise ValueError(f"indices must be strictly increasing within 0..{n - 1}")
    return pfaffian_expand(a[..., idx[:, None], idx[None, :]])


# ---------------------------------------------------------------------------
# Canonical form and skew SVD


@dataclass(frozen=True)
class CanonicalForm:
    """``m = q @ block_form(pairs, n) @ q.T`` with ``pairs`` nonascending.

    ``q`` has determinant +1 whenever ``rank2k < n``.  A full-rank matrix
    with negative Pfaffian admits no such ``q`` with all pairs positive; in
    that case ``det(q) = -1`` and ``orientation`` records it.
    """

    q: np.ndarray
    pairs: np.ndarray

    @property
    def n(self):
        return self.q.shape[0]

    @property
    def k(self):
        return int(self.pairs.size)

    @property
    def rank2k(self):
        return 2 * self.k

    @property
    def orientation(self):
        return int(np.sign(np.linalg.det(self.q))) if self.n else 1

    @property
    def strictly_descending(self):
        """Whether the pairs are distinct, i.e. the point lies on an open orbit chart."""
        return bool(np.all(np.diff(self.pairs) < 0))

    def matrix(self):
        return self.q @ block_form(self.pairs, self.n) @ self.q.T


def canonical_decompose(m, tol=1e-9):
    """Canonical form of a skew matrix via the real Schur decomposition.

    A pair ``x_i`` counts as nonzero iff ``x_i > tol * x_1``.  Pairs at or
    below the threshold are dropped and their planes are moved to the
    kernel block.

    Examples
    --------
    >>> cf = canonical_decompose(3 * basis(4, 0, 1) + basis(4, 2, 3))
    >>> cf.pairs.tolist(), cf.rank2k
    ([3.0, 1.0], 4)
    """
    if not 0 <= tol < 1:
        raise ValueError("tol must lie in [0, 1)")
    a = as_skew(m)
    if a.ndim != 2:
        raise ValueError("canonical_decompose takes a single matrix")
    n = a.shape[0]
    if n == 0 or not np.any(a):
        return CanonicalForm(np.eye(n), np.zeros(0))

    t, z = schur(a, output="real")
    planes, kernel = [], []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            b = 0.5 * (t[i, i + 1] - t[i + 1, i])
            planes.append((b, i, i + 1) if b > 0 else (-b, i + 1, i))
            i += 2
        else:
            kernel.append(i)
            i += 1
    planes.sort(key=lambda p: -p[0])
    x1 = planes[0][0] if planes else 0.0
    kept = [p for p in planes if p[0] > tol * x1]
    dropped = [p for p in planes if p[0] <= tol * x1]
    cols = [c for p in kept for c in p[1:]]
    cols += [c for p in dropped for c in p[1:]] + kernel
    q = z[:, cols].copy()
    if 2 * len(kept) < n and np.linalg.det(q) < 0:
        q[:, -1] = -q[:, -1]
    return CanonicalForm(q, np.array([p[0] for p in kept]))


@dataclass(frozen=True)
class SkewSVD:
    """``m = u @ diag(sigma) @ v.T`` with sigma = (x1, x1, x2, x2, ..., 0, ...)."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def matrix(self):
        return (self.u * self.sigma) @ self.v.T


def skew_svd(m, tol=1e-9):
    """Singular value decomposition read off the canonical form.

    With ``m = A M(x) A^T`` and ``J = [[0, 1], [-1, 0]]`` each block
    ``x J`` factors as ``J (x I) I``, so ``u = A P`` and ``v = A`` where
    ``P`` carries ``J`` on the ``k`` nonzero planes and the identity on the
    kernel.
    """
    cf = canonical_decompose(m, tol)
    n, k = cf.n, cf.k
    p = np.eye(n)
    for i in range(k):
        p[2 * i:2 * i + 2, 2 * i:2 * i + 2] = [[0.0, 1.0], [-1.0, 0.0]]
    sigma = np.zeros(n)
    sigma[:2 * k] = np.repeat(cf.pairs, 2)
    return SkewSVD(cf.q @ p, sigma, cf.q)


# ---------------------------------------------------------------------------
# Random generation


def derive_rng(seed, *index):
    """Generator seeded from ``(seed, *index)``; used for per-trial streams."""
    if isinstance(seed, np.random.Generator):
        if index:
            raise TypeError("cannot derive indexed streams from a Generator")
        return seed
    if seed is None:
        return np.random.default_rng()
    return np.random.default_rng([int(seed), *map(int, index)])


def random_special_orthogonal(n, seed=None, size=None):
    """Haar-distributed rotation(s) in SO(n).

    QR of a Gaussian matrix with the signs of ``diag(R)`` absorbed gives a
    Haar element of O(n); negating the first column on the det -1 coset
    maps it onto SO(n).
    """
    rng = derive_rng(seed)
    shape = (n, n) if size is None else (*np.atleast_1d(size), n, n)
    g = rng.standard_normal(shape)
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diagonal(r, axis1=-2, axis2=-1))[..., None, :]
    flip = np.linalg.det(q) < 0
    q[..., :, 0] = np.where(flip[..., None], -q[..., :, 0], q[..., :, 0])
    return q


def random_skew(n, seed=None, scale=1.0, size=None):
    """Skew matrix with i.i.d. ``N(0, scale^2)`` strictly-upper entries."""
    rng = derive_rng(seed)
    shape = (n, n) if size is None else (*np.atleast_1d(size), n, n)
    g = np.triu(rng.standard_normal(shape), 1) * scale
    return g - np.swapaxes(g, -1, -2)


# ---------------------------------------------------------------------------
# Text interchange: {"n": int, "upper": [row-major strictly-upper entries]}


def to_record(m):
    a = as_skew(m)
    n = a.shape[0]
    iu = np.triu_indices(n, 1)
    return {"n": int(n), "upper": [float(v) for v in a[iu]]}


def from_record(record):
    try:
        n = int(record["n"])
        upper = np.asarray(record["upper"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix record: {exc}") from None
    if n < 0 or upper.ndim != 1 or upper.size != n * (n - 1) // 2:
        raise ValueError(
            f"record has n={n} but {upper.size} upper entries (expected {n * (n - 1) // 2})"
        )
    m = np.zeros((n, n))
    m[np.triu_indices(n, 1)] = upper
    return m - m.T


def read_matrix(path):
    return from_record(json.loads(Path(path).read_text()))


def write_matrix(path, m):
    Path(path).write_text(json.dumps(to_record(m)) + "\n")
