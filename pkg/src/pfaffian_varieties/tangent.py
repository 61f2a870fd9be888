"""Tangent cones of C(n, 2r) at singular points.

At a point ``M0`` of rank ``2k <= 2r`` write a direction ``V`` in the
canonical frame of ``M0`` as ``[[A, B], [-B^T, D]]`` with ``A`` of size
``2k``.  Then ``V`` is a tangent direction exactly when ``rank D <= 2r - 2k``,
and the tangent cone splits as ``C(n - 2k, 2r - 2k) x R^{k(2n - 2k - 1)}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateFitError, OffVarietyError, StepTooLargeError
from .skew import (
    CanonicalForm,
    as_skew,
    block_form,
    canonical_decompose,
    derive_rng,
    random_skew,
    random_special_orthogonal,
    skew_norm,
)
from .variety import VarietySpec, contains_rank, distance, project, stratum

__all__ = [
    "TangentQuery",
    "tangent_membership",
    "factorize_tangent_cone",
    "approach_curve",
    "approach_residual",
    "FitResult",
    "order_fit",
    "weyl_sigma",
    "weyl_bounds_check",
    "weyl_threshold",
    "separation_check",
    "DistanceBound",
    "nonmember_distance_bound",
    "nearly_regular_flag",
    "tangent_cone_annotation",
    "membership_oracle",
    "random_query",
]

DEFAULT_T_GRID = np.logspace(-1, -4, 13)


@dataclass(frozen=True)
class TangentQuery:
    """A base point ``M0`` of rank ``2k``, a direction ``V`` and the bound ``r``.

    ``a``, ``b``, ``d`` are the blocks of ``q^T V q`` where ``q`` is the
    canonical frame of ``M0``.
    """

    base: np.ndarray
    direction: np.ndarray
    r: int
    canonical: CanonicalForm
    a: np.ndarray
    b: np.ndarray
    d: np.ndarray

    @classmethod
    def build(cls, base, direction, r, tol=1e-9):
        m0 = as_skew(base)
        v = as_skew(direction)
        if m0.shape != v.shape:
            raise ValueError(f"base {m0.shape} and direction {v.shape} differ in size")
        spec = VarietySpec(m0.shape[0], r)
        cf = canonical_decompose(m0, tol)
        if cf.k > spec.r:
            raise OffVarietyError(f"base has rank {cf.rank2k} > 2r = {2 * r}")
        w = cf.q.T @ v @ cf.q
        w = 0.5 * (w - w.T)
        s = cf.rank2k
        return cls(m0, v, r, cf, w[:s, :s], w[:s, s:], w[s:, s:])

    @property
    def n(self):
        return self.base.shape[0]

    @property
    def k(self):
        return self.canonical.k

    @property
    def m(self):
        """The invertible ``2k`` block of ``M0`` in its canonical frame."""
        return block_form(self.canonical.pairs, 2 * self.k)

    def d_pairs(self):
        """Paired singular values of ``D``, nonascending."""
        if self.d.shape[0] < 2:
            return np.zeros(0)
        return canonical_decompose(self.d, tol=0.0).pairs


def tangent_membership(q, tol=1e-9):
    """Whether ``rank D <= 2r - 2k``; the rank of ``D`` is counted relative to ``|V|``."""
    if q.d.shape[0] < 2:
        return True
    scale = max(skew_norm(q.direction), np.finfo(float).tiny)
    sv = np.linalg.svd(q.d, compute_uv=False)
    return int(np.sum(sv > tol * scale)) <= 2 * (q.r - q.k)


def factorize_tangent_cone(n, r, k):
    """Cross-section ``C(n - 2k, 2r - 2k)`` and Euclidean factor dimension ``k(2n - 2k - 1)``.

    Examples
    --------
    >>> factorize_tangent_cone(6, 2, 1)
    (VarietySpec(n=4, r=1), 9)
    """
    if not 0 <= k <= r:
        raise ValueError(f"need 0 <= k <= r, got k = {k}, r = {r}")
    VarietySpec(n, r)
    return VarietySpec(n - 2 * k, r - k), k * (2 * n - 2 * k - 1)


def _upper_inverse(q, t, cond_max=1e12):
    mt = q.m + t * q.a
    if mt.size and np.linalg.cond(mt) > cond_max:
        raise StepTooLargeError(f"M + tA is numerically singular at t = {t}")
    return mt, np.linalg.inv(mt) if mt.size else mt


def approach_curve(q, t):
    """The block-eliminated curve through ``M0`` with velocity ``V``, in the original frame.

    Its Schur complement is ``tD``, so it stays in C(n, 2r) whenever
    ``rank D <= 2r - 2k``.
    """
    mt, inv = _upper_inverse(q, t)
    s = 2 * q.k
    x = np.empty((q.n, q.n))
    x[:s, :s] = mt
    x[:s, s:] = t * q.b
    x[s:, :s] = -t * q.b.T
    x[s:, s:] = t * q.d - t * t * (q.b.T @ inv @ q.b)
    out = q.canonical.q @ x @ q.canonical.q.T
    return 0.5 * (out - out.T)


def approach_residual(q, t):
    """``|X_t - M0 - tV|``."""
    return skew_norm(approach_curve(q, t) - q.base - t * q.direction)


class FitResult(NamedTuple):
    slope: float
    intercept: float
    member: bool
    t: np.ndarray
    values: np.ndarray


def order_fit(q, t_grid=None, tol=1e-9, floor=1e-13):
    """Log-log slope of the approach error against ``t``.

    Member directions fit the approach-curve residual (expected slope 2);
    non-members fit ``Dist(M0 + tV, C(n, 2r))`` (expected slope 1).  Values
    below ``floor * |V|`` carry no signal and are dropped.
    """
    t_grid = DEFAULT_T_GRID if t_grid is None else np.asarray(t_grid, dtype=float)
    member = tangent_membership(q, tol)
    spec = VarietySpec(q.n, q.r)
    if member:
        values = np.array([approach_residual(q, t) for t in t_grid])
    else:
        values = np.array([distance(spec, q.base + t * q.direction) for t in t_grid])
    use = (t_grid > 0) & (values > floor * max(skew_norm(q.direction), 1.0))
    if np.count_nonzero(use) < 3:
        raise DegenerateFitError(f"only {np.count_nonzero(use)} usable points")
    slope, intercept = np.polyfit(np.log(t_grid[use]), np.log(values[use]), 1)
    return FitResult(float(slope), float(intercept), member, t_grid, values)


# ---------------------------------------------------------------------------
# Spectral separation for non-member directions


def weyl_sigma(q, t):
    """Largest singular value of ``A M^T + M A^T + t A A^T``."""
    if q.k == 0:
        return 0.0
    pert = q.a @ q.m.T + q.m @ q.a.T + t * q.a @ q.a.T
    return float(np.linalg.norm(pert, 2))


def _upper_eigs(q, t):
    mt = q.m + t * q.a
    return np.sort(np.linalg.eigvalsh(mt @ mt.T))[::-1]


def weyl_bounds_check(q, t, rtol=1e-12):
    """Every eigenvalue pair of the upper block of ``N_t N_t^T`` lies in ``[x_i^2 - t sigma, x_i^2 + t sigma]``."""
    if q.k == 0:
        return True
    mu = _upper_eigs(q, t).reshape(q.k, 2)
    x2 = q.canonical.pairs[:, None] ** 2
    sigma = weyl_sigma(q, t)
    slack = rtol * max(1.0, float(x2.max()))
    return bool(np.all(np.abs(mu - x2) <= t * sigma + slack))


def weyl_threshold(q, t_max=1e3, iters=200):
    """Smallest positive root of ``x_k^2 - t sigma(t) - t^2 lambda_1^2``.

    Below it, ``x_k^2 - t sigma`` bounds ``mu_{2k}`` from below and stays
    above ``(t lambda_1)^2``, which separates the spectra of the two diagonal
    blocks of ``N_t``.  Returns ``inf`` when ``k = 0`` or no root is found.
    """
    if q.k == 0:
        return np.inf
    lam = q.d_pairs()
    lam1 = lam[0] if lam.size else 0.0
    xk2 = q.canonical.pairs[-1] ** 2

    def g(t):
        return xk2 - t * weyl_sigma(q, t) - (t * lam1) ** 2

    grid = np.logspace(-8, np.log10(t_max), 400)
    am = q.a @ q.m.T + q.m @ q.a.T
    pert = am + grid[:, None, None] * (q.a @ q.a.T)
    sig = np.linalg.svd(pert, compute_uv=False)[:, 0]
    vals = xk2 - grid * sig - (grid * lam1) ** 2
    bad = np.flatnonzero(vals <= 0)
    if bad.size == 0:
        return np.inf
    hi = grid[bad[0]]
    lo = grid[bad[0] - 1] if bad[0] > 0 else 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return lo


def separation_check(q, t):
    """``sqrt(mu_{2k}) > t lambda_1``: the top ``2k`` singular values of ``N_t`` come from the upper block."""
    if q.k == 0:
        return True
    lam = q.d_pairs()
    lam1 = lam[0] if lam.size else 0.0
    return bool(np.sqrt(max(_upper_eigs(q, t)[-1], 0.0)) > t * lam1)


class DistanceBound(NamedTuple):
    measured: float
    bound: float
    below_threshold: bool


def nonmember_distance_bound(q, t, t0=None):
    """Distance of ``N_t = diag(M + tA, tD)`` to C(n, 2r) against ``t sqrt(sum_{j > r-k} lambda_j^2)``.

    ``below_threshold`` reports whether ``t < t_0``, the regime in which the
    bound is guaranteed; pass ``t0`` to reuse a computed threshold.
    """
    s = 2 * q.k
    nt = np.zeros((q.n, q.n))
    nt[:s, :s] = q.m + t * q.a
    nt[s:, s:] = t * q.d
    spec = VarietySpec(q.n, q.r)
    lam = q.d_pairs()
    bound = t * float(np.sqrt(np.sum(lam[q.r - q.k:] ** 2)))
    return DistanceBound(distance(spec, nt), bound, bool(t < (weyl_threshold(q) if t0 is None else t0)))


# ---------------------------------------------------------------------------
# Nearly regular points


def nearly_regular_flag(m, spec, tol=1e-9):
    """Whether ``m`` has rank exactly ``2r - 2``."""
    if not contains_rank(spec, m, tol):
        raise OffVarietyError(f"point has rank {stratum(m, tol)} > 2r = {2 * spec.r}")
    return stratum(m, tol) == 2 * spec.r - 2


def tangent_cone_annotation(m, spec, tol=1e-9):
    """Summary of the tangent cone at ``m``: factorization and minimality flag.

    At a nearly regular point of a hypersurface (``n - 2r = 2``) the
    cross-section is C(4, 2), whose cone is not area-minimizing.
    """
    k = stratum(m, tol) // 2
    nearly = nearly_regular_flag(m, spec, tol)
    cross, euclid = factorize_tangent_cone(spec.n, spec.r, k)
    return {
        "rank": 2 * k,
        "nearly_regular": nearly,
        "cross_section": (cross.n, 2 * cross.r),
        "euclidean_dim": euclid,
        "non_minimizing": bool(nearly and spec.normal_size == 2),
    }


# ---------------------------------------------------------------------------
# Definition-level oracle


def membership_oracle(base, direction, r, eps=(1e-1, 1e-2, 1e-3), t_grid=None):
    """Search for secant witnesses directly from the definition of the tangent cone.

    ``V`` is a tangent direction iff for every ``eps`` there are ``x`` in
    C(n, 2r) and ``s > 0`` with ``|x - M0| < eps`` and ``|s(x - M0) - V| < eps``.
    For ``x`` at distance ``t(|V| + ...)`` the best choice is the nearest
    point to ``M0 + tV`` with ``s = 1/t``, and no ``x`` does better than
    ``Dist(M0 + tV) / t`` -- so the search over ``t`` both finds witnesses
    and, on the sampled grid, certifies their absence.
    """
    m0 = as_skew(base)
    v = as_skew(direction)
    spec = VarietySpec(m0.shape[0], r)
    if not contains_rank(spec, m0):
        raise OffVarietyError("base point is not on the variety")
    t_grid = np.logspace(-1, -7, 61) if t_grid is None else np.asarray(t_grid, dtype=float)
    found = []
    for e in eps:
        ok = False
        for t in t_grid:
            x = project(spec, m0 + t * v).matrix
            if skew_norm(x - m0) < e and skew_norm((x - m0) / t - v) < e:
                ok = True
                break
        found.append(ok)
    return all(found)


def random_query(n, r, k, member, seed=None, pair_range=(1.0, 3.0), d_range=(0.3, 1.0)):
    """A random query with a rank-``2k`` base and a unit direction.

    Member directions get ``rank D = 2 min(r - k, (n - 2k) // 2)``; non-members
    get ``rank D = 2(r - k + 1)``.  The base pairs are spaced at least
    ``pair_range[0] / 2`` apart, and ``B`` is redrawn when the second-order
    coefficient ``B^T M^-1 B`` of the approach curve nearly cancels.
    """
    spec = VarietySpec(n, r)
    if not 0 <= k <= spec.r:
        raise ValueError(f"need 0 <= k <= r, got k = {k}")
    rng = derive_rng(seed)
    lo, hi = pair_range
    x = np.sort(rng.uniform(lo, hi, k))[::-1] + 0.5 * lo * np.arange(k)[::-1]
    rot = random_special_orthogonal(n, rng)
    m = n - 2 * k
    s = min(r - k, m // 2) if member else r - k + 1
    lam = np.sort(rng.uniform(*d_range, s))[::-1]
    d = block_form(lam, m)
    if m:
        qd = random_special_orthogonal(m, rng)
        d = qd @ d @ qd.T
    inv = np.linalg.inv(block_form(x, 2 * k)) if k else np.zeros((0, 0))
    while True:
        w = random_skew(n, rng, scale=0.5)
        w[2 * k:, 2 * k:] = d
        bl = w[:2 * k, 2 * k:]
        size = float(np.sum(bl**2)) / x[-1] if k and m else 0.0
        # the t^2 coefficient B^T M^-1 B can cancel by accident (a single
        # scalar when n - 2k = 2); such draws hide the leading order
        if size == 0.0 or skew_norm(bl.T @ inv @ bl) >= 1e-2 * size:
            break
    base = rot @ block_form(x, n) @ rot.T
    v = rot @ w @ rot.T
    v /= skew_norm(v)
    return TangentQuery.build(base, v, r)
