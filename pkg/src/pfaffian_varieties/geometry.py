"""Metric geometry of C(n, 2r) at its regular points.

Everything is computed at base points ``M(x) = sum_i x_i X_{2i,2i+1}`` with
``x_1 > ... > x_r > 0``; adjoint invariance transports the results to every
regular point.  Tangent vectors are indexed by ``(i, j)`` labels of the
orthonormal basis matrices ``X_{ij}`` (0-based, ``i < j``), in the order
returned by :func:`tangent_labels`: the ``r`` slice directions first, then
the rotations mixing two distinct planes, then the rotations of each plane
into the kernel.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .errors import FocalRadiusError
from .skew import as_skew, basis, block_form, random_special_orthogonal, skew_inner, skew_norm
from .variety import VarietySpec, project

__all__ = [
    "tangent_labels",
    "normal_labels",
    "check_descending",
    "weight_primary",
    "primary_jacobian",
    "weight_primary_numeric",
    "g_block",
    "h_block",
    "label_block",
    "jacobian_rank",
    "WedgePoint",
    "ShapeOperator",
    "shape_operator",
    "second_fundamental",
    "second_fundamental_numeric",
    "shape_operator_numeric",
    "normal_determinant",
    "wedge_determinant",
    "Lemma47Result",
    "lemma47_check",
    "WedgeWeight",
    "weight_primary_wedge",
    "wedge_lower_bound",
    "wedge_equality_expected",
    "isotropy_element",
    "orientability_action",
]


def tangent_labels(n, r):
    """Ordered tangent basis at ``M(x)``: slice directions, plane mixing, kernel rotations."""
    slice_dirs = [(2 * i, 2 * i + 1) for i in range(r)]
    mixing = [
        (i, j)
        for i in range(2 * r)
        for j in range(i + 1, 2 * r)
        if not (i % 2 == 0 and j == i + 1)
    ]
    kernel = [(i, a) for i in range(2 * r) for a in range(2 * r, n)]
    return slice_dirs + mixing + kernel


def normal_labels(n, r):
    return [(i, j) for i in range(2 * r, n) for j in range(i + 1, n)]


def _coords(m, labels):
    idx = np.array(labels, dtype=int).reshape(-1, 2)
    return m[..., idx[:, 0], idx[:, 1]]


def check_descending(x, r=None):
    """Return ``x`` as an array after checking ``x_1 > ... > x_r > 0``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1 or (r is not None and x.size != r):
        raise ValueError(f"expected {r} singular pairs, got shape {x.shape}")
    if x.size and (x[-1] <= 0 or np.any(np.diff(x) >= 0)):
        raise ValueError(f"pairs must be strictly descending and positive, got {x}")
    return x


# ---------------------------------------------------------------------------
# Primary weighting function


def _w1(x, n):
    """Closed form on stacks ``x[..., r]``."""
    x = np.asarray(x, dtype=float)
    r = x.shape[-1]
    sq = x**2
    iu = np.triu_indices(r, 1)
    diffs = sq[..., iu[0]] - sq[..., iu[1]]
    return np.prod(diffs**2, axis=-1) * np.prod(x ** (2 * (n - 2 * r)), axis=-1)


def weight_primary(x, n, r):
    """``prod_{i<j} (x_i^2 - x_j^2)^2 * prod_i x_i^(2(n-2r))``.

    Examples
    --------
    >>> weight_primary([2.0, 1.0], 5, 2)
    36.0
    """
    x = check_descending(x, r)
    _check_fits(n, r)
    return float(_w1(x, n))


def _check_fits(n, r):
    # the orbit parametrization only needs 2r <= n; n - 2r = 1 gives an open chart
    if r < 0 or 2 * r > n:
        raise ValueError(f"{r} planes do not fit in dimension {n}")


def _richardson(f, h):
    d1 = (f(h) - f(-h)) / (2 * h)
    d2 = (f(h / 2) - f(-h / 2)) / h
    return (4 * d2 - d1) / 3


def _default_step(x):
    return 1e-4 * max(1.0, float(np.max(np.abs(x))) if np.size(x) else 1.0)


def primary_jacobian(x, n, r, step=None):
    """Finite-difference Jacobian of ``F(s, t) = P(s) M(x + t) P(s)^T``.

    ``P(s) = expm(sum s_ij X_ij)`` over the non-slice tangent labels, ``t``
    moves along the slice.  Rows are parameters, columns are coordinates of
    ``dF`` in the orthonormal ``X_ij`` basis, both in :func:`tangent_labels`
    order.  Derivatives are central differences with one Richardson step.
    """
    x = check_descending(x, r)
    labels = tangent_labels(n, r)
    h = _default_step(x) if step is None else float(step)
    if h <= 0:
        raise ValueError("step must be positive")
    m0 = block_form(x, n)
    rows = []
    for a, (i, j) in enumerate(labels):
        if a < r:
            e = np.zeros(r)
            e[a] = 1.0

            def f(s, e=e):
                return _coords(block_form(x + s * e, n), labels)
        else:
            gen = basis(n, i, j)

            def f(s, gen=gen):
                p = expm(s * gen)
                return _coords(p @ m0 @ p.T, labels)

        rows.append(_richardson(f, h))
    return np.array(rows)


def weight_primary_numeric(x, n, r, step=None):
    """``|det DF|`` divided by the Jacobian of ``F`` restricted to the slice.

    Independent of :func:`weight_primary`; only the parametrization enters.
    """
    x = check_descending(x, r)
    _check_fits(n, r)
    df = primary_jacobian(x, n, r, step)
    h = _default_step(x) if step is None else float(step)
    # restricted Jacobian: slice parameters against all ambient coordinates
    all_labels = [(i, j) for i in range(n) for j in range(i + 1, n)]
    dt = []
    for a in range(r):
        e = np.zeros(r)
        e[a] = 1.0
        dt.append(_richardson(lambda s, e=e: _coords(block_form(x + s * e, n), all_labels), h))
    dt = np.array(dt).reshape(r, -1)
    restricted = np.sqrt(np.linalg.det(dt @ dt.T)) if r else 1.0
    return float(abs(np.linalg.det(df)) / restricted)


def g_block(x, p, q):
    """4x4 block coupling planes ``p < q``: rows/cols ``(2p,2q), (2p,2q+1), (2p+1,2q), (2p+1,2q+1)``."""
    xp, xq = x[p], x[q]
    return np.array(
        [
            [0.0, xq, xp, 0.0],
            [-xq, 0.0, 0.0, xp],
            [-xp, 0.0, 0.0, xq],
            [0.0, -xp, -xq, 0.0],
        ]
    )


def h_block(x, i, m):
    """``[[0, x_i I], [-x_i I, 0]]`` of size ``2m`` coupling plane ``i`` with the kernel."""
    eye = np.eye(m)
    z = np.zeros((m, m))
    return np.block([[z, x[i] * eye], [-x[i] * eye, z]])


def label_block(df, n, r, labels):
    """Sub-block of a tangent-label-indexed matrix selected by ``labels``."""
    pos = {lab: a for a, lab in enumerate(tangent_labels(n, r))}
    idx = [pos[lab] for lab in labels]
    return df[np.ix_(idx, idx)]


def jacobian_rank(spec, seed=None, x=None, step=1e-6, rtol=1e-6):
    """Numerical rank of the orbit parametrization at a random regular point.

    The point is ``Q M(x) Q^T`` with a Haar ``Q``; parameters are all of
    ``so(n)`` plus the ``r`` slice coordinates, so the rank counts the
    dimension of the variety without using the tangent basis above.
    """
    n, r = spec.n, spec.r
    rng = np.random.default_rng(seed)
    if x is None:
        x = np.cumsum(rng.uniform(0.3, 1.0, r))[::-1] + 0.5 if r else np.zeros(0)
    x = check_descending(x, r)
    q = random_special_orthogonal(n, rng)
    iu = np.triu_indices(n, 1)
    cols = []
    for i, j in zip(*iu):
        gen = q @ basis(n, i, j) @ q.T
        base = q @ block_form(x, n) @ q.T

        def f(s, gen=gen, base=base):
            p = expm(s * gen)
            return (p @ base @ p.T)[iu]

        cols.append((f(step) - f(-step)) / (2 * step))
    for a in range(r):
        e = np.zeros(r)
        e[a] = 1.0
        cols.append(((q @ block_form(x + step * e, n) @ q.T)[iu] - (q @ block_form(x - step * e, n) @ q.T)[iu]) / (2 * step))
    jac = np.array(cols)
    sv = np.linalg.svd(jac, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


# ---------------------------------------------------------------------------
# Wedges and the shape operator


@dataclass(frozen=True)
class WedgePoint:
    """The point ``M(x) + t v`` with ``v = diag(0, b)`` a unit normal."""

    x: np.ndarray
    t: float
    b: np.ndarray

    def __post_init__(self):
        x = check_descending(self.x)
        b = as_skew(self.b)
        if b.ndim != 2 or b.shape[0] < 2:
            raise ValueError("normal block must be a skew matrix of size >= 2")
        if abs(skew_norm(b) - 1.0) > 1e-9:
            raise ValueError(f"normal block must have unit norm, got {skew_norm(b)}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "t", float(self.t))
        if abs(self.t) >= x[-1]:
            raise FocalRadiusError(f"|t| = {abs(self.t)} must stay below x_r = {x[-1]}")

    @property
    def r(self):
        return self.x.size

    @property
    def n(self):
        return 2 * self.r + self.b.shape[0]

    def normal(self):
        v = np.zeros((self.n, self.n))
        v[2 * self.r:, 2 * self.r:] = self.b
        return v

    def ambient(self):
        return block_form(self.x, self.n) + self.t * self.normal()


@dataclass(frozen=True)
class ShapeOperator:
    labels: list = field(repr=False)
    matrix: np.ndarray

    @property
    def trace(self):
        return float(np.trace(self.matrix))


def shape_operator(x, b):
    """Matrix of the shape operator ``A_v`` in the tangent basis.

    Zero on the slice and plane-mixing directions; on the kernel rotations
    of plane ``i`` it is ``L_i = [[0, b^T / x_i], [b / x_i, 0]]``.
    """
    x = check_descending(x)
    b = as_skew(b)
    r, m = x.size, b.shape[0]
    n = 2 * r + m
    labels = tangent_labels(n, r)
    dim = len(labels)
    a = np.zeros((dim, dim))
    start = r + 2 * r * (r - 1)
    z = np.zeros((m, m))
    for i in range(r):
        lo = start + 2 * m * i
        a[lo:lo + 2 * m, lo:lo + 2 * m] = np.block([[z, b.T], [b, z]]) / x[i]
    return ShapeOperator(labels, a)


def second_fundamental(x, u, w, n):
    """Second fundamental form ``B(X_u, X_w)`` at ``M(x)`` in closed form.

    Only raising pairs contribute: ``u = (2i, a)`` and ``w = (2i+1, c)`` with
    ``a, c`` kernel indices give ``-(1/x_i) X_{a,c}`` (zero when ``a = c``);
    every other pair of tangent labels gives zero.
    """
    x = check_descending(x)
    r = x.size
    out = np.zeros((n, n))
    (p, a), (q, c) = sorted([tuple(u), tuple(w)])
    if p % 2 == 0 and q == p + 1 and p < 2 * r and a >= 2 * r and c >= 2 * r and a != c:
        out -= basis(n, a, c) / x[p // 2]
    return out


def second_fundamental_numeric(x, u, w, n, step=None):
    """Second fundamental form ``B(X_u, X_w)`` at ``M(x)`` by re-projection.

    Points ``M(x) + y1 X_u + y2 X_w`` are pushed back onto the variety with
    :func:`project`; the mixed second difference of the result, restricted
    to the normal block, is returned with the sign convention
    ``B = -(d^2 f)^perp``.  Central differences with one Richardson step.
    """
    x = check_descending(x)
    r = x.size
    spec = VarietySpec(n, r)
    m0 = block_form(x, n)
    xu, xw = basis(n, *u), basis(n, *w)
    h = _default_step(x) if step is None else float(step)
    if h <= 0:
        raise ValueError("step must be positive")

    def p(a, c):
        return project(spec, m0 + a * xu + c * xw).matrix

    def mixed(hh):
        return (p(hh, hh) - p(hh, -hh) - p(-hh, hh) + p(-hh, -hh)) / (4 * hh * hh)

    d2 = (4 * mixed(h / 2) - mixed(h)) / 3
    out = np.zeros((n, n))
    out[2 * r:, 2 * r:] = d2[2 * r:, 2 * r:]
    return -out


def shape_operator_numeric(x, b, step=None):
    """``<B(X_u, X_w), v>`` over all tangent label pairs; compare with :func:`shape_operator`."""
    x = check_descending(x)
    b = as_skew(b)
    r = x.size
    n = 2 * r + b.shape[0]
    v = np.zeros((n, n))
    v[2 * r:, 2 * r:] = b
    labels = tangent_labels(n, r)
    dim = len(labels)
    a = np.zeros((dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            val = skew_inner(second_fundamental_numeric(x, labels[i], labels[j], n, step), v)
            a[i, j] = a[j, i] = val
    return a


def normal_determinant(x, t, b):
    """``prod_i det(I - (t/x_i)^2 b b^T)``, without the focal-radius check.

    Vectorized over leading axes of ``x[..., r]``, ``t[...]`` and ``b[..., m, m]``.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    b = np.asarray(b, dtype=float)
    bbt = b @ np.swapaxes(b, -1, -2)
    m = b.shape[-1]
    ratio = (t[..., None] / x) ** 2
    mats = np.eye(m) - ratio[..., :, None, None] * bbt[..., None, :, :]
    return np.prod(np.linalg.det(mats), axis=-1)


def wedge_determinant(w):
    """``det(I - t A_v)`` at a wedge point, via the product formula."""
    return float(normal_determinant(w.x, w.t, w.b))


# ---------------------------------------------------------------------------
# Lemma on paired spectra and the wedge lower bound


class Lemma47Result(NamedTuple):
    lhs: float
    rhs: float
    ok: bool


def lemma47_check(s, tau, *, atol=1e-12):
    """Compare ``det(I - tau S)`` with ``(1 - tau)^2``.

    ``S`` must be symmetric positive semidefinite with trace 2 and its
    eigenvalues must come in equal pairs (a single extra zero is allowed in
    odd dimension).  The inequality only holds for ``tau <= 1``, which is
    the range where it is applied (``tau = t^2 / x_i^2``), so ``tau`` is
    required to lie in ``[0, min(1, 1/lambda_max)]``.  Works on stacks.
    """
    s = np.asarray(s, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if s.shape[-1] != s.shape[-2]:
        raise ValueError("S must be square")
    if np.max(np.abs(s - np.swapaxes(s, -1, -2)), initial=0.0) > 1e-10:
        raise ValueError("S must be symmetric")
    lam = np.linalg.eigvalsh(s)[..., ::-1]
    if np.any(lam[..., -1] < -1e-10):
        raise ValueError("S must be positive semidefinite")
    if np.any(np.abs(np.trace(s, axis1=-2, axis2=-1) - 2.0) > 1e-9):
        raise ValueError("S must have trace 2")
    d = lam.shape[-1]
    paired = lam[..., : d - d % 2].reshape(*lam.shape[:-1], -1, 2)
    if np.any(np.abs(paired[..., 0] - paired[..., 1]) > 1e-7) or (d % 2 and np.any(np.abs(lam[..., -1]) > 1e-7)):
        raise ValueError("eigenvalues of S must come in repeated pairs")
    limit = np.minimum(1.0, 1.0 / lam[..., 0])
    if np.any(tau < 0) or np.any(tau > limit * (1 + 1e-12)):
        raise ValueError("tau must lie in [0, min(1, 1/lambda_max)]")
    eye = np.eye(d)
    lhs = np.linalg.det(eye - tau[..., None, None] * s)
    rhs = (1.0 - tau) ** 2
    ok = lhs >= rhs - atol
    if lhs.ndim == 0:
        return Lemma47Result(float(lhs), float(rhs), bool(ok))
    return Lemma47Result(lhs, rhs, ok)


class WedgeWeight(NamedTuple):
    exact: float
    lower_bound: float


def wedge_lower_bound(x, t, n):
    """``prod (x_i^2-x_j^2)^2 * prod x_i^(2(n-2-2r)) * prod (x_i^2-t^2)^2``; vectorized."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    r = x.shape[-1]
    sq = x**2
    iu = np.triu_indices(r, 1)
    diffs = sq[..., iu[0]] - sq[..., iu[1]]
    return (
        np.prod(diffs**2, axis=-1)
        * np.prod(x ** (2 * (n - 2 - 2 * r)), axis=-1)
        * np.prod((sq - t[..., None] ** 2) ** 2, axis=-1)
    )


def weight_primary_wedge(w):
    """Exact primary weight at a wedge point and its lower bound.

    The exact value is ``w1(x) * det(I - t A_v)``: the slice directions come
    first in the basis and ``A_v`` vanishes on them, so the restricted
    Jacobian in the normal-wedge formula is 1.
    """
    exact = _w1(w.x, w.n) * normal_determinant(w.x, w.t, w.b)
    return WedgeWeight(float(exact), float(wedge_lower_bound(w.x, w.t, w.n)))


def wedge_equality_expected(t, b, tol=1e-6):
    """Whether the lower bound should be attained: ``t = 0`` or ``b b^T`` has spectrum (1, 1, 0, ...)."""
    b = np.asarray(b, dtype=float)
    lam = np.linalg.eigvalsh(b @ np.swapaxes(b, -1, -2))[..., ::-1]
    target = np.zeros(lam.shape[-1])
    target[:2] = 1.0
    rank_two = np.max(np.abs(lam - target), axis=-1) <= tol
    return np.logical_or(np.asarray(t) == 0, rank_two)


# ---------------------------------------------------------------------------
# Orientability


def _rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def isotropy_element(theta, eps, s):
    """``diag(eps_1 R(theta_1), ..., eps_r R(theta_r), s)`` with ``R = [[c, s], [-s, c]]``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    s = np.atleast_2d(np.asarray(s, dtype=float))
    r = theta.size
    n = 2 * r + s.shape[0]
    h = np.zeros((n, n))
    for i in range(r):
        h[2 * i:2 * i + 2, 2 * i:2 * i + 2] = eps[i] * _rotation(theta[i])
    h[2 * r:, 2 * r:] = s
    return h


def orientability_action(x, theta, eps, s):
    """Determinant of ``X -> h X h^T`` on the ordered tangent basis at ``M(x)``.

    ``h = isotropy_element(theta, eps, s)`` must satisfy
    ``prod(eps) * det(s) = 1``.
    """
    x = check_descending(x)
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    s = np.atleast_2d(np.asarray(s, dtype=float))
    r = x.size
    if np.atleast_1d(theta).size != r or eps.size != r:
        raise ValueError("need one angle and one sign per plane")
    if np.any(np.abs(np.abs(eps) - 1) > 0):
        raise ValueError("signs must be +1 or -1")
    m = s.shape[0]
    if s.shape != (m, m) or np.max(np.abs(s @ s.T - np.eye(m))) > 1e-9:
        raise ValueError("s must be orthogonal")
    if abs(np.prod(eps) * np.linalg.det(s) - 1.0) > 1e-9:
        raise ValueError("isotropy constraint prod(eps) * det(s) = 1 violated")
    h = isotropy_element(theta, eps, s)
    n = h.shape[0]
    labels = tangent_labels(n, r)
    idx = np.array(labels)
    gens = np.zeros((len(labels), n, n))
    gens[np.arange(len(labels)), idx[:, 0], idx[:, 1]] = 1.0
    gens[np.arange(len(labels)), idx[:, 1], idx[:, 0]] = -1.0
    images = h @ gens @ h.T
    action = _coords(images, labels)
    return float(np.linalg.det(action))
