"""Edge-weight gradients and Hessians of resistance distance and Kirchhoff index.

With ``B`` the signed incidence matrix (columns ``g_k = 1_u - 1_v``) and
``b = 1_i - 1_j``, the quadratic forms are

    d^T H_R d  = 2 b^T L^+ L1 L^+ L1 L^+ b
    d^T H_Kf d = 2 n tr((L^+)^2 L1 L^+ L1)

for ``L1 = B diag(d) B^T``. Expanding ``L1`` edge by edge gives the closed
forms used by :func:`assemble_hessian`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .graph import WeightedGraph, build_l1
from .laplacian import check_vertex, connected_context, pair_vector
from .spectral import eig_sym

TARGETS = ("resistance", "kirchhoff")
METHODS = ("closed_form", "polarization")


@dataclass(frozen=True, eq=False)
class HessianMatrix:
    matrix: np.ndarray
    label: str

    @property
    def order(self):
        return self.matrix.shape[0]


def _target_label(target, pair):
    if target == "kirchhoff":
        return "kirchhoff"
    if target == "resistance":
        if pair is None:
            raise ValidationError("resistance target needs a vertex pair")
        return f"resistance({pair[0]},{pair[1]})"
    raise ValidationError(f"unknown target {target!r}; expected one of {TARGETS}")


def _direction(g, d):
    d = np.asarray(d, dtype=float)
    if d.shape != (g.m,):
        raise DimensionMismatch(f"direction has shape {d.shape}, graph has {g.m} edges")
    return d


def quad_form_resistance(g: WeightedGraph, i: int, j: int, d, rank_tol=None) -> float:
    """``d^T (Hessian of R_ij) d``. Any real direction is allowed."""
    check_vertex(g, i)
    check_vertex(g, j)
    d = _direction(g, d)
    ldag = connected_context(g, rank_tol).pinv
    if i == j:
        return 0.0
    l1 = build_l1(g, d)
    b = pair_vector(g.n, i, j)
    return float(2.0 * b @ (ldag @ l1 @ ldag @ l1 @ ldag) @ b)


def quad_form_kirchhoff(g: WeightedGraph, d, rank_tol=None) -> float:
    d = _direction(g, d)
    ctx = connected_context(g, rank_tol)
    l1 = build_l1(g, d)
    return float(2.0 * g.n * np.trace(ctx.pinv_sq @ l1 @ ctx.pinv @ l1))


def gradient_resistance(g: WeightedGraph, i: int, j: int, rank_tol=None) -> np.ndarray:
    """``dR_ij/dx_k = -(g_k^T L^+ b)^2``."""
    check_vertex(g, i)
    check_vertex(g, j)
    ldag = connected_context(g, rank_tol).pinv
    alpha = g.incidence.T @ (ldag @ pair_vector(g.n, i, j))
    return -(alpha**2)


def gradient_kirchhoff(g: WeightedGraph, rank_tol=None) -> np.ndarray:
    """``dKf/dx_k = -n g_k^T (L^+)^2 g_k``."""
    ctx = connected_context(g, rank_tol)
    inc = g.incidence
    return -g.n * np.einsum("ik,ij,jk->k", inc, ctx.pinv_sq, inc)


def _closed_form(g, target, pair, rank_tol):
    ctx = connected_context(g, rank_tol)
    inc = g.incidence
    beta = inc.T @ ctx.pinv @ inc
    if target == "kirchhoff":
        beta_sq = inc.T @ ctx.pinv_sq @ inc
        return 2.0 * g.n * beta * beta_sq
    alpha = inc.T @ (ctx.pinv @ pair_vector(g.n, *pair))
    return 2.0 * np.outer(alpha, alpha) * beta


def _polarization(g, target, pair, rank_tol):
    if target == "kirchhoff":
        def q(d):
            return quad_form_kirchhoff(g, d, rank_tol)
    else:
        def q(d):
            return quad_form_resistance(g, pair[0], pair[1], d, rank_tol)
    m = g.m
    basis = np.eye(m)
    diag = np.array([q(basis[k]) for k in range(m)])
    h = np.diag(diag)
    for k in range(m):
        for l in range(k + 1, m):
            h[k, l] = h[l, k] = 0.5 * (q(basis[k] + basis[l]) - diag[k] - diag[l])
    return h


def assemble_hessian(g: WeightedGraph, target="kirchhoff", pair=None, method="closed_form", rank_tol=None) -> HessianMatrix:
    """Full m x m Hessian of ``target`` with respect to the edge weights.

    ``pair`` is the 1-based vertex pair for ``target="resistance"``.
    ``method="polarization"`` builds every entry from quadratic-form probes along
    ``e_k`` and ``e_k + e_l``; ``"closed_form"`` contracts cached ``L^+`` products.
    """
    label = _target_label(target, pair)
    if target == "resistance":
        check_vertex(g, pair[0])
        check_vertex(g, pair[1])
    connected_context(g, rank_tol)
    if method == "closed_form":
        h = _closed_form(g, target, pair, rank_tol)
    elif method == "polarization":
        h = _polarization(g, target, pair, rank_tol)
    else:
        raise ValidationError(f"unknown method {method!r}; expected one of {METHODS}")
    return HessianMatrix(0.5 * (h + h.T), label)


def hessian_extreme_eigs(h) -> tuple:
    """``(mu_min, mu_max)`` of a symmetric Hessian."""
    mat = h.matrix if isinstance(h, HessianMatrix) else np.asarray(h, dtype=float)
    if mat.size == 0:
        return (0.0, 0.0)
    w = eig_sym(mat, vectors=False).eigenvalues
    return (float(w[-1]), float(w[0]))


# Finite-difference oracle. Each probe rebuilds L from the incidence matrix and
# inverts L + J/n directly, so no cached pseudoinverse or eigensolver is shared
# with the paths it checks.

def _fresh_pinv(inc, x):
    n = inc.shape[0]
    lap = (inc * x) @ inc.T
    shift = np.full((n, n), 1.0 / n)
    return np.linalg.inv(lap + shift) - shift


def scalar_target(g: WeightedGraph, target, pair=None):
    """``f(x)`` recomputed from scratch at arbitrary weight vectors ``x``."""
    _target_label(target, pair)
    inc = np.array(g.incidence)
    n = g.n
    if target == "kirchhoff":
        return lambda x: float(n * np.trace(_fresh_pinv(inc, x)))
    b = pair_vector(n, *pair)
    return lambda x: float(b @ _fresh_pinv(inc, x) @ b)


def default_fd_step(g: WeightedGraph) -> float:
    xmin = float(np.min(g.x)) if g.m else 1.0
    return min(1e-4 * max(1.0, xmin), 0.2 * xmin)


def _central_second_differences(g, target, pair, x, h):
    """Central second differences of the target, one fresh inverse per probe.

    Neighbouring probes ``a = x + h e_k + h e_l`` and ``b = x + h e_k - h e_l``
    differ only in edge l, so ``M(a)^-1 - M(b)^-1 = -2h (M(a)^-1 g_l)(g_l^T M(b)^-1)``
    with ``M = L + J/n``. Differencing through that identity avoids subtracting
    nearly equal target values.
    """
    inc = np.array(g.incidence)
    n, m = inc.shape
    shift = np.full((n, n), 1.0 / n)
    if target == "kirchhoff":
        def reduce(u, v):
            return n * float(u @ v)
    else:
        b = pair_vector(n, *pair)

        def reduce(u, v):
            return float((b @ u) * (v @ b))

    def inv(w):
        return np.linalg.inv((inc * w) @ inc.T + shift)

    step = h * np.eye(m)
    out = np.zeros((m, m))
    for k in range(m):
        for l in range(k, m):
            gl = inc[:, l]
            upper = reduce(inv(x + step[k] + step[l]) @ gl, gl @ inv(x + step[k] - step[l]))
            lower = reduce(inv(x - step[k] + step[l]) @ gl, gl @ inv(x - step[k] - step[l]))
            out[k, l] = out[l, k] = -2.0 * h * (upper - lower) / (4.0 * h * h)
    return out


def fd_hessian_oracle(
    g: WeightedGraph, target="kirchhoff", pair=None, h=None, extrapolate=True, rank_tol=None
) -> HessianMatrix:
    """Central second differences with step ``h`` in every coordinate.

    With ``extrapolate`` the results at ``h`` and ``h/2`` are combined as
    ``(4 D(h/2) - D(h)) / 3``, cancelling the ``O(h^2)`` truncation term. This
    matters for small weights, where the fourth derivatives grow like ``x^-5``.
    """
    label = _target_label(target, pair)
    connected_context(g, rank_tol)
    if h is None:
        h = default_fd_step(g)
    xmin = float(np.min(g.x)) if g.m else np.inf
    if h >= xmin / 4:
        h = 0.2 * xmin
    x = g.x.copy()
    coarse = _central_second_differences(g, target, pair, x, h)
    if not extrapolate:
        return HessianMatrix(coarse, label)
    fine = _central_second_differences(g, target, pair, x, 0.5 * h)
    return HessianMatrix((4.0 * fine - coarse) / 3.0, label)


def fd_gradient_oracle(g: WeightedGraph, target="kirchhoff", pair=None, rel_step=1e-5, rank_tol=None) -> np.ndarray:
    """Central first differences with per-edge step ``rel_step * x_k``."""
    _target_label(target, pair)
    connected_context(g, rank_tol)
    f = scalar_target(g, target, pair)
    x = g.x.copy()
    grad = np.zeros(g.m)
    for k in range(g.m):
        hk = rel_step * x[k]
        e = np.zeros(g.m)
        e[k] = hk
        grad[k] = (f(x + e) - f(x - e)) / (2.0 * hk)
    return grad
