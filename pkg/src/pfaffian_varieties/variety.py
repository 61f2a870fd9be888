"""The cones C(n, 2r) of skew matrices of rank at most 2r."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .skew import as_skew, block_form, canonical_decompose, pfaffian_expand, skew_norm

__all__ = [
    "VarietySpec",
    "Projection",
    "contains_rank",
    "contains_pfaffian",
    "principal_pfaffians",
    "project",
    "distance",
    "dimension",
    "codimension",
    "stratum",
]


@dataclass(frozen=True)
class VarietySpec:
    """C(n, 2r) with ``0 <= r <= n // 2 - 1``."""

    n: int
    r: int

    def __post_init__(self):
        if self.n < 2 or not 0 <= self.r <= self.n // 2 - 1:
            raise ValueError(f"need n >= 2 and 0 <= r <= n//2 - 1, got (n, r) = ({self.n}, {self.r})")

    @property
    def ambient_dimension(self):
        return self.n * (self.n - 1) // 2

    @property
    def dimension(self):
        # slice directions + paired rotations + rotations into the kernel
        n, r = self.n, self.r
        return r * (2 * r - 1) + 2 * r * (n - 2 * r)

    @property
    def codimension(self):
        m = self.n - 2 * self.r
        return m * (m - 1) // 2

    @property
    def normal_size(self):
        """Size ``n - 2r`` of the lower-right normal block."""
        return self.n - 2 * self.r


def dimension(spec):
    return spec.dimension


def codimension(spec):
    return spec.codimension


def _check_dim(spec, m):
    a = as_skew(m)
    if a.shape != (spec.n, spec.n):
        raise ValueError(f"expected a {spec.n}x{spec.n} matrix, got {a.shape}")
    return a


def stratum(m, tol=1e-9):
    """The even rank 2k of ``m``."""
    return canonical_decompose(m, tol).rank2k


def contains_rank(spec, m, tol=1e-9):
    """Membership by numerical rank of the canonical form."""
    return canonical_decompose(_check_dim(spec, m), tol).rank2k <= 2 * spec.r


def principal_pfaffians(m, order):
    """All principal Pfaffians of the given even order, in lexicographic index order."""
    a = as_skew(m)
    n = a.shape[-1]
    subsets = np.array(list(combinations(range(n), order)), dtype=int)
    if subsets.size == 0:
        return np.zeros(0)
    sub = a[subsets[:, :, None], subsets[:, None, :]]
    return np.atleast_1d(pfaffian_expand(sub))


def contains_pfaffian(spec, m, tol=1e-9):
    """Membership as the common zero locus of principal Pfaffians of order 2r+2.

    Those Pfaffians are forms of degree ``r + 1`` and are bounded by
    ``(|m| / sqrt(r + 1)) ** (r + 1)``; a value counts as zero when it is
    below ``tol`` times that scale.
    """
    a = _check_dim(spec, m)
    order = 2 * spec.r + 2
    scale = (skew_norm(a) / np.sqrt(spec.r + 1)) ** (spec.r + 1)
    values = principal_pfaffians(a, order)
    return bool(np.all(np.abs(values) <= tol * scale))


class Projection(NamedTuple):
    matrix: np.ndarray
    unique: bool


def project(spec, m, tol=1e-9):
    """Nearest point of C(n, 2r): keep the ``r`` largest canonical pairs.

    ``unique`` is False when ``x_r`` and ``x_{r+1}`` coincide within
    ``tol * x_1``; the truncation is still returned in that case.
    """
    a = _check_dim(spec, m)
    cf = canonical_decompose(a, tol=0.0)
    r = spec.r
    x = cf.pairs
    unique = True
    if x.size > r and r > 0:
        unique = bool(x[r - 1] - x[r] > tol * x[0])
    keep = x[:r]
    q = cf.q[:, :2 * keep.size]
    proj = q @ block_form(keep, 2 * keep.size) @ q.T
    return Projection(0.5 * (proj - proj.T), unique)


def distance(spec, m):
    """``sqrt(sum_{i > r} x_i^2)``, the distance from ``m`` to C(n, 2r)."""
    x = canonical_decompose(_check_dim(spec, m), tol=0.0).pairs
    return float(np.sqrt(np.sum(x[spec.r:] ** 2)))
