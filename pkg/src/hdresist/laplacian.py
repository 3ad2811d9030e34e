"""Cached per-graph spectral data shared by the resistance, Hessian and bound modules."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotConnected, ValidationError
from .graph import WeightedGraph, build_laplacian
from .spectral import (
    SpectralDecomposition,
    default_rank_tol,
    eig_sym,
    is_connected_spectrum,
    pinv_psd,
)


@dataclass(frozen=True, eq=False)
class LaplacianContext:
    """Laplacian, its decomposition and pseudoinverse for one graph. Arrays are read-only."""

    graph: WeightedGraph
    laplacian: np.ndarray
    spectrum: SpectralDecomposition
    rank_tol: float
    connected: bool
    pinv: np.ndarray | None

    @property
    def n(self):
        return self.graph.n

    @property
    def largest_eigenvalue(self):
        return self.spectrum.largest

    @property
    def algebraic_connectivity(self):
        return self.spectrum.algebraic_connectivity

    def require_connected(self):
        if not self.connected:
            raise NotConnected(
                f"graph is disconnected: algebraic connectivity "
                f"{self.algebraic_connectivity:.3e} <= rank tolerance {self.rank_tol:.3e}"
            )
        return self

    @property
    def pinv_sq(self):
        """``(L^+)^2``, the pseudoinverse of ``L^2``."""
        return _pinv_sq(self)


@lru_cache(maxsize=256)
def _pinv_sq(ctx):
    out = ctx.pinv @ ctx.pinv
    out.flags.writeable = False
    return out


def _freeze(a):
    a.flags.writeable = False
    return a


@lru_cache(maxsize=256)
def laplacian_context(g: WeightedGraph, rank_tol: float | None = None) -> LaplacianContext:
    lap = build_laplacian(g)
    spectrum = eig_sym(lap)
    for arr in (spectrum.eigenvalues, spectrum.eigenvectors):
        _freeze(arr)
    tol = default_rank_tol(spectrum) if rank_tol is None else float(rank_tol)
    connected = is_connected_spectrum(spectrum, tol)
    pinv = _freeze(pinv_psd(spectrum, tol)) if connected else None
    return LaplacianContext(g, _freeze(lap), spectrum, tol, connected, pinv)


def connected_context(g: WeightedGraph, rank_tol=None) -> LaplacianContext:
    return laplacian_context(g, rank_tol).require_connected()


def check_vertex(g: WeightedGraph, i: int):
    if not (isinstance(i, (int, np.integer)) and 1 <= i <= g.n):
        raise ValidationError(f"vertex {i!r} out of range [1, {g.n}]")
    return int(i) - 1


def pair_vector(n, i, j):
    """``1_i - 1_j`` for 1-based vertices."""
    b = np.zeros(n)
    b[i - 1] += 1.0
    b[j - 1] -= 1.0
    return b


def contract(p, i, j):
    """``P_ii + P_jj - P_ij - P_ji`` for 1-based i, j."""
    i, j = i - 1, j - 1
    return p[i, i] + p[j, j] - p[i, j] - p[j, i]
