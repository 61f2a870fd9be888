"""Primary and secondary slicings of the ambient space around C(n, 2r).

A primary slicing set is a rotated copy ``Q H Q^T`` of

    H = {M(x) + N : x_1 > ... > x_r > 0, N supported on the lower-right
         (n-2r) block, |N| < x_r},

and a secondary slicing set ``H_c`` is the hyperbola ``x_i^2 - t^2 = c_i^2``
swept out inside a normal wedge.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateLevelError, FocalRadiusError, UnsupportedRegimeError
from .geometry import WedgePoint, _w1, check_descending, normal_determinant
from .skew import as_skew, block_form, canonical_decompose, derive_rng, random_skew, skew_norm
from .variety import VarietySpec

__all__ = [
    "SliceChart",
    "SecondaryLevel",
    "slice_decompose",
    "in_isotropy",
    "in_primary_set",
    "random_primary_point",
    "same_slicing_set",
    "secondary_level",
    "secondary_point",
    "weight_secondary",
    "weight_secondary_numeric",
    "CompositeResult",
    "composite_inequality",
    "find_composite_counterexample",
    "CompositeMin",
    "composite_weight",
    "composite_min_check",
]


@dataclass(frozen=True)
class SliceChart:
    """Ambient point ``q @ diag(M(x), normal) @ q.T`` with ``q`` in SO(n)."""

    q: np.ndarray
    x: np.ndarray
    normal: np.ndarray

    @property
    def n(self):
        return self.q.shape[0]

    @property
    def r(self):
        return self.x.size

    def local(self):
        """The point of H this chart rotates."""
        h = block_form(self.x, self.n)
        h[2 * self.r:, 2 * self.r:] = self.normal
        return h

    def matrix(self):
        return self.q @ self.local() @ self.q.T


@dataclass(frozen=True)
class SecondaryLevel:
    """Level labels ``c_1 >= ... >= c_r >= 0``; the level value is ``h_i = c_i^2 / 2``."""

    c: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        if np.any(c < 0) or np.any(np.diff(c) > 0):
            raise ValueError(f"level labels must be nonnegative and nonascending, got {c}")
        object.__setattr__(self, "c", c)

    @property
    def h(self):
        return self.c**2 / 2


def slice_decompose(m, r, tol=1e-9):
    """Chart of the primary slicing set containing ``m``, or None.

    None is returned when the ``r`` leading pairs are not separated by more
    than ``tol * x_1`` (including ``x_r`` from zero), or when the residual
    normal block has ``|N| >= x_r - tol * x_1``.
    """
    a = as_skew(m)
    n = a.shape[0]
    VarietySpec(n, r)
    cf = canonical_decompose(a, tol=0.0)
    if cf.k < r or r == 0:
        return None
    x = cf.pairs[:r]
    gap = tol * x[0]
    if np.any(-np.diff(x) <= gap) or x[-1] <= gap:
        return None
    q = cf.q.copy()
    if np.linalg.det(q) < 0:
        # full-rank input with negative Pfaffian: absorb the reflection in the normal block
        q[:, -1] = -q[:, -1]
    local = q.T @ a @ q
    normal = 0.5 * (local[2 * r:, 2 * r:] - local[2 * r:, 2 * r:].T)
    if skew_norm(normal) >= x[-1] - gap:
        return None
    return SliceChart(q, x, normal)


def in_isotropy(rot, r, tol=1e-9):
    """Whether ``rot`` lies in SO(2) x ... x SO(2) x SO(n-2r), the stabilizer of ``M(x)``."""
    rot = np.asarray(rot, dtype=float)
    n = rot.shape[0]
    mask = np.zeros((n, n), dtype=bool)
    for i in range(r):
        mask[2 * i:2 * i + 2, 2 * i:2 * i + 2] = True
    mask[2 * r:, 2 * r:] = True
    if np.max(np.abs(rot[~mask]), initial=0.0) > tol:
        return False
    for i in range(r):
        blk = rot[2 * i:2 * i + 2, 2 * i:2 * i + 2]
        # rotations commute with J; reflections anticommute
        if abs(blk[0, 0] - blk[1, 1]) > tol or abs(blk[0, 1] + blk[1, 0]) > tol:
            return False
    return abs(np.linalg.det(rot[2 * r:, 2 * r:]) - 1.0) <= 1e-6 if 2 * r < n else True


def in_primary_set(m, r, tol=1e-9):
    """Whether ``m`` itself (unrotated) lies in H."""
    a = np.asarray(m, dtype=float)
    scale = max(1.0, float(np.max(np.abs(a))))
    upper = a[:2 * r, :2 * r]
    x = upper[2 * np.arange(r), 2 * np.arange(r) + 1]
    if np.max(np.abs(upper - block_form(x, 2 * r)), initial=0.0) > tol * scale:
        return False
    if np.max(np.abs(a[:2 * r, 2 * r:]), initial=0.0) > tol * scale:
        return False
    if r == 0 or x[-1] <= 0 or np.any(np.diff(x) >= 0):
        return False
    return bool(skew_norm(a[2 * r:, 2 * r:]) < x[-1])


def random_primary_point(n, r, seed=None):
    """A random element of H: well-separated pairs and an interior normal block."""
    rng = derive_rng(seed)
    x = np.cumsum(rng.uniform(0.2, 1.0, r))[::-1] + rng.uniform(0.2, 1.0)
    nb = random_skew(n - 2 * r, rng)
    norm = skew_norm(nb)
    if norm > 0:
        nb *= rng.uniform(0.0, 0.95) * x[-1] / norm
    h = block_form(x, n)
    h[2 * r:, 2 * r:] = nb
    return h


def same_slicing_set(chart1, chart2, samples=8, seed=0, tol=1e-9):
    """Whether two charts parametrize the same primary slicing set.

    Random points ``H3`` of H are moved by ``q2^T q1`` and tested for
    membership in H again; all ``samples`` images must stay in H.
    """
    if chart1.n != chart2.n or chart1.r != chart2.r:
        raise ValueError("charts belong to different varieties")
    n, r = chart1.n, chart1.r
    rot = chart2.q.T @ chart1.q
    rng = derive_rng(seed)
    for _ in range(max(1, int(samples))):
        h3 = random_primary_point(n, r, rng)
        if not in_primary_set(rot @ h3 @ rot.T, r, tol):
            return False
    return True


# ---------------------------------------------------------------------------
# Secondary slicing


def secondary_level(x, t):
    """``c_i = sqrt(x_i^2 - t^2)`` for a wedge point ``M(x) + t v``."""
    x = check_descending(x)
    if abs(t) >= x[-1]:
        raise FocalRadiusError(f"|t| = {abs(t)} must stay below x_r = {x[-1]}")
    return SecondaryLevel(np.sqrt(x**2 - t * t))


def secondary_point(c, t, b):
    """The point of ``H_c`` at normal offset ``t`` in direction ``b``."""
    c = c.c if isinstance(c, SecondaryLevel) else SecondaryLevel(c).c
    if c[-1] <= 0 and t != 0:
        raise DegenerateLevelError("level with c_r = 0 only meets the wedge at t = 0")
    return WedgePoint(np.sqrt(c**2 + t * t), t, b)


def weight_secondary(x, t):
    """``1 / (prod x_i * sqrt(1 + t^2 * sum 1/x_i^2))``.

    Examples
    --------
    >>> weight_secondary([2.0, 1.0], 0.0)
    0.5
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0):
        raise ValueError("pairs must be positive")
    if abs(t) >= np.min(x):
        raise FocalRadiusError(f"|t| = {abs(t)} must stay below x_r = {np.min(x)}")
    return float(1.0 / (np.prod(x) * np.sqrt(1.0 + t * t * np.sum(1.0 / x**2))))


def weight_secondary_numeric(x, t, step=1e-6):
    """Reciprocal r-Jacobian of the level map ``h`` in orthonormal ``(x, t)`` coordinates."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    r = x.size

    def h(p):
        return (p[:r] ** 2 - p[r] ** 2) / 2

    p0 = np.append(x, t)
    jac = np.empty((r, r + 1))
    for a in range(r + 1):
        e = np.zeros(r + 1)
        e[a] = step
        jac[:, a] = (h(p0 + e) - h(p0 - e)) / (2 * step)
    return float(1.0 / np.sqrt(np.linalg.det(jac @ jac.T)))


class CompositeResult(NamedTuple):
    lhs: np.ndarray
    rhs: np.ndarray
    ok: np.ndarray


def composite_inequality(n, r, c, t, rtol=1e-10):
    """Both sides of the polynomial inequality behind the composite-weight minimum.

        prod (c_i^2 + t^2)^(2n-4r-4)
            >= prod c_i^(2(2n-4r-5)) * { sum_j t^2 prod_{k != j} (c_k^2 + t^2) + prod_j (c_j^2 + t^2) }

    Returned as natural logarithms of each side.  The common factor
    ``prod c_i^(2(2n-4r-4))`` is split off and the remainders are evaluated
    with ``log1p`` so that near-equality at small ``t`` is resolved.
    ``c`` is ``(..., r)`` and broadcasts against ``t``.
    """
    c = np.asarray(c, dtype=float)
    t = np.asarray(t, dtype=float)
    if c.shape[-1] != r or np.any(c <= 0):
        raise ValueError(f"need {r} positive level labels")
    e = 2 * n - 4 * r - 4
    c2 = c**2
    t2 = (t**2)[..., None]
    a = c2 + t2
    s = np.sum(np.log1p(t2 / c2), axis=-1)
    common = e * np.sum(np.log(c2), axis=-1)
    lhs_red = e * s
    rhs_red = s + np.log1p(np.sum(t2 / a, axis=-1))
    ok = lhs_red >= rhs_red + np.log1p(-rtol)
    lhs, rhs = common + lhs_red, common + rhs_red
    if np.ndim(ok) == 0:
        return CompositeResult(float(lhs), float(rhs), bool(ok))
    return CompositeResult(lhs, rhs, ok)


def find_composite_counterexample(n, r, seed=0, t_grid=None, trials=64):
    """Grid search for ``(c, t)`` violating the composite inequality; None if none found."""
    rng = derive_rng(seed)
    if t_grid is None:
        t_grid = np.logspace(-3, 2, 51)
    for _ in range(trials):
        c = np.sort(rng.uniform(0.1, 3.0, r))[::-1]
        res = composite_inequality(n, r, np.broadcast_to(c, (len(t_grid), r)), t_grid)
        bad = np.flatnonzero(~res.ok)
        if bad.size:
            j = bad[np.argmax(res.rhs[bad] - res.lhs[bad])]
            return c, float(t_grid[j])
    return None


class CompositeMin(NamedTuple):
    argmin_t: float
    min_value: float
    value_at_0: float


def composite_weight(n, c, t, b):
    """Exact ``w1 * w2`` at the point of ``H_c`` with offset ``t``; vectorized in ``t``."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    t = np.asarray(t, dtype=float)
    x = np.sqrt(c**2 + (t**2)[..., None])
    w1 = _w1(x, n) * normal_determinant(x, t, np.broadcast_to(b, (*t.shape, *np.shape(b))))
    w2 = 1.0 / (np.prod(x, axis=-1) * np.sqrt(1.0 + t**2 * np.sum(1.0 / x**2, axis=-1)))
    return w1 * w2


def composite_min_check(n, r, c, b, grid, allow_unsupported=False):
    """Minimize the exact composite weight along ``H_c`` over a grid of offsets.

    The grid must contain ``t = 0``.  For ``n - 2r < 3`` the minimum is not
    expected at ``t = 0`` and :class:`UnsupportedRegimeError` is raised
    unless ``allow_unsupported`` is set.
    """
    if n - 2 * r < 3 and not allow_unsupported:
        raise UnsupportedRegimeError(f"n - 2r = {n - 2 * r} < 3: the composite minimum is not at t = 0")
    c = check_descending(c, r)
    b = as_skew(b)
    if b.shape[0] != n - 2 * r or abs(skew_norm(b) - 1) > 1e-9:
        raise ValueError("b must be a unit skew block of size n - 2r")
    grid = np.asarray(grid, dtype=float)
    if not np.any(grid == 0):
        raise ValueError("grid must contain t = 0")
    values = composite_weight(n, c, grid, b)
    j = int(np.argmin(values))
    return CompositeMin(float(grid[j]), float(values[j]), float(values[grid == 0][0]))
