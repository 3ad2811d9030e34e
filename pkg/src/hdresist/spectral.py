"""Dense symmetric eigendecomposition and the spectral constructions built on it."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NegativeEigenvalue, NonFinite

JACOBI_TOL = 1e-14
MAX_SWEEPS = 60


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues sorted descending; ``eigenvectors[:, i]`` pairs with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self):
        return self.eigenvalues.size

    @property
    def largest(self):
        return float(self.eigenvalues[0]) if self.n else 0.0

    @property
    def algebraic_connectivity(self):
        """Second smallest eigenvalue (``lambda_{n-1}``); 0 for a 1x1 matrix."""
        return float(self.eigenvalues[-2]) if self.n >= 2 else 0.0

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def _round_robin(n):
    """Rounds of disjoint index pairs covering every pair once (circle method)."""
    size = n + (n % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        pairs = []
        for k in range(size // 2):
            p, q = players[k], players[size - 1 - k]
            if p < n and q < n:
                pairs.append((min(p, q), max(p, q)))
        if pairs:
            rounds.append(tuple(np.array(idx) for idx in zip(*pairs)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def eig_sym(m, tol=JACOBI_TOL, max_sweeps=MAX_SWEEPS, vectors=True) -> SpectralDecomposition:
    """Cyclic Jacobi eigensolver for a real symmetric matrix.

    Each sweep visits every off-diagonal pair once, grouped into rounds of
    disjoint rotations that are applied together. Iteration stops when the
    off-diagonal Frobenius mass drops to ``tol * ||m||_F``. With
    ``vectors=False`` the rotations are not accumulated and ``eigenvectors``
    is None.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix has non-finite entries")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n) if vectors else None
    scale = np.linalg.norm(a)
    rounds = _round_robin(n)

    for _ in range(max_sweeps + 1):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            app, aqq = a[p, p], a[q, q]
            theta = np.where(active, (aqq - app) / (2.0 * np.where(active, apq, 1.0)), 0.0)
            t = np.where(active, np.copysign(1.0, theta) / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            ap, aq = a[:, p], a[:, q]
            a[:, p], a[:, q] = ap * c - aq * s, ap * s + aq * c
            ap, aq = a[p, :], a[q, :]
            a[p, :], a[q, :] = c[:, None] * ap - s[:, None] * aq, s[:, None] * ap + c[:, None] * aq
            a[p, q] = 0.0
            a[q, p] = 0.0
            if vectors:
                vp, vq = v[:, p], v[:, q]
                v[:, p], v[:, q] = vp * c - vq * s, vp * s + vq * c
    else:
        raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return SpectralDecomposition(w[order], v[:, order] if vectors else None)


def default_rank_tol(d: SpectralDecomposition) -> float:
    return 1e-10 * d.n * max(1.0, d.largest)


def _check_psd(d, rank_tol):
    if d.n and d.eigenvalues[-1] < -rank_tol:
        raise NegativeEigenvalue(
            f"eigenvalue {d.eigenvalues[-1]:.3e} is below -{rank_tol:.3e}; matrix is not PSD"
        )


def spectral_function(d: SpectralDecomposition, fn, rank_tol=None) -> np.ndarray:
    """``sum fn(l_i) p_i p_i^T`` over eigenvalues above ``rank_tol``."""
    if d.eigenvectors is None:
        raise ValueError("decomposition was computed without eigenvectors")
    if rank_tol is None:
        rank_tol = default_rank_tol(d)
    _check_psd(d, rank_tol)
    keep = d.eigenvalues > rank_tol
    vk = d.eigenvectors[:, keep]
    out = (vk * fn(d.eigenvalues[keep])) @ vk.T
    return 0.5 * (out + out.T)


def pinv_psd(d: SpectralDecomposition, rank_tol=None) -> np.ndarray:
    """Moore-Penrose inverse of a PSD matrix from its decomposition."""
    return spectral_function(d, lambda lam: 1.0 / lam, rank_tol)


def sqrt_psd(d: SpectralDecomposition, rank_tol=None) -> np.ndarray:
    return spectral_function(d, np.sqrt, rank_tol)


def frobenius_norm(m) -> float:
    m = np.asarray(m, dtype=float)
    return float(np.sqrt(np.sum(m * m)))


def spectral_norm(m) -> float:
    """Largest singular value; the largest |eigenvalue| when ``m`` is symmetric."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.size == 0:
        return 0.0
    if m.shape[0] == m.shape[1] and np.array_equal(m, m.T):
        return float(np.max(np.abs(eig_sym(m).eigenvalues)))
    gram = m.T @ m if m.shape[0] >= m.shape[1] else m @ m.T
    return float(np.sqrt(max(eig_sym(gram).largest, 0.0)))


def is_connected_spectrum(d: SpectralDecomposition, rank_tol=None) -> bool:
    """Fiedler criterion: the Laplacian's algebraic connectivity exceeds the rank tolerance."""
    if d.n == 1:
        return True
    if rank_tol is None:
        rank_tol = default_rank_tol(d)
    return d.algebraic_connectivity > rank_tol
