"""Hyper-dual matrices and the Moore-Penrose inverse of a hyper-dual Laplacian.

A hyper-dual matrix is stored as four real blocks ``re + eps*e + eps_star*e*
+ eps_es*e*e*``. For the Laplacian ``L + L1*(e + e*)`` of a connected graph
the pseudoinverse has the closed form

    L^+  -  L^+ L1 L^+ (e + e*)  +  2 L^+ L1 L^+ L1 L^+ e*e*

which is what :func:`hd_pinv_laplacian` returns.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NonZeroRowSums,
    NotConnected,
    NumericalError,
    SameVertex,
    ZeroCurrent,
)
from .graph import WeightedGraph, build_l1, build_laplacian, check_perturbation
from .hyperdual import HyperDual
from .laplacian import check_vertex, connected_context, pair_vector
from .spectral import default_rank_tol, eig_sym, frobenius_norm, is_connected_spectrum, pinv_psd

ROW_SUM_TOL = 1e-9
CONSISTENCY_TOL = 1e-8


def _blocks_mul(a, b, mul):
    return (
        mul(a[0], b[0]),
        mul(a[0], b[1]) + mul(a[1], b[0]),
        mul(a[0], b[2]) + mul(a[2], b[0]),
        mul(a[0], b[3]) + mul(a[1], b[2]) + mul(a[2], b[1]) + mul(a[3], b[0]),
    )


@dataclass(frozen=True, eq=False)
class HDVector:
    re: np.ndarray
    eps: np.ndarray
    eps_star: np.ndarray
    eps_es: np.ndarray

    def __post_init__(self):
        blocks = [np.asarray(b, dtype=float) for b in self.blocks]
        if any(b.shape != blocks[0].shape or b.ndim != 1 for b in blocks):
            raise DimensionMismatch("HDVector blocks must be 1-d arrays of equal length")
        for name, b in zip(("re", "eps", "eps_star", "eps_es"), blocks):
            object.__setattr__(self, name, b)

    @classmethod
    def from_real(cls, v):
        v = np.asarray(v, dtype=float)
        z = np.zeros_like(v)
        return cls(v, z, z, z)

    @property
    def blocks(self):
        return (self.re, self.eps, self.eps_star, self.eps_es)

    def __len__(self):
        return self.re.size

    def __getitem__(self, k) -> HyperDual:
        return HyperDual(*(float(b[k]) for b in self.blocks))

    def __add__(self, other):
        return HDVector(*(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other):
        return HDVector(*(a - b for a, b in zip(self.blocks, other.blocks)))

    def scale(self, c):
        return HDVector(*(c * b for b in self.blocks))

    def dot(self, w) -> HyperDual:
        """Inner product with a real vector."""
        w = np.asarray(w, dtype=float)
        return HyperDual(*(float(b @ w) for b in self.blocks))

    def norm(self):
        """Largest Euclidean block norm."""
        return max(float(np.linalg.norm(b)) for b in self.blocks)


@dataclass(frozen=True, eq=False)
class HDMatrix:
    re: np.ndarray
    eps: np.ndarray
    eps_star: np.ndarray
    eps_es: np.ndarray

    def __post_init__(self):
        blocks = [np.asarray(b, dtype=float) for b in self.blocks]
        if any(b.shape != blocks[0].shape or b.ndim != 2 for b in blocks):
            raise DimensionMismatch("HDMatrix blocks must be 2-d arrays of equal shape")
        for name, b in zip(("re", "eps", "eps_star", "eps_es"), blocks):
            object.__setattr__(self, name, b)

    @classmethod
    def from_real(cls, a):
        a = np.asarray(a, dtype=float)
        z = np.zeros_like(a)
        return cls(a, z, z, z)

    @classmethod
    def identity(cls, n):
        return cls.from_real(np.eye(n))

    @property
    def blocks(self):
        return (self.re, self.eps, self.eps_star, self.eps_es)

    @property
    def shape(self):
        return self.re.shape

    @property
    def T(self):
        return HDMatrix(*(b.T for b in self.blocks))

    def __add__(self, other):
        return HDMatrix(*(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other):
        return HDMatrix(*(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self):
        return HDMatrix(*(-b for b in self.blocks))

    def scale(self, c):
        return HDMatrix(*(c * b for b in self.blocks))

    def __matmul__(self, other):
        if isinstance(other, HDMatrix):
            return hd_mat_mul(self, other)
        if isinstance(other, HDVector):
            return hd_mat_vec(self, other)
        return NotImplemented

    def entry(self, r, c) -> HyperDual:
        """Entry at 0-based position (r, c)."""
        return HyperDual(*(float(b[r, c]) for b in self.blocks))

    def contraction(self, i, j) -> HyperDual:
        """``P_ii + P_jj - P_ij - P_ji`` for 1-based vertices i, j."""
        b = pair_vector(self.shape[0], i, j)
        return HyperDual(*(float(b @ blk @ b) for blk in self.blocks))

    def trace(self) -> HyperDual:
        return HyperDual(*(float(np.trace(b)) for b in self.blocks))

    def norm(self):
        """Largest Frobenius norm over the four blocks."""
        return max(frobenius_norm(b) for b in self.blocks)


def hd_mat_mul(a: HDMatrix, b: HDMatrix) -> HDMatrix:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return HDMatrix(*_blocks_mul(a.blocks, b.blocks, np.matmul))


def hd_mat_vec(a: HDMatrix, v: HDVector) -> HDVector:
    if a.shape[1] != len(v):
        raise DimensionMismatch(f"cannot multiply {a.shape} by vector of length {len(v)}")
    return HDVector(*_blocks_mul(a.blocks, v.blocks, np.matmul))


def hd_laplacian(g: WeightedGraph, p) -> HDMatrix:
    """Laplacian ``L + L1 (e + e*)`` of the graph with weights ``x + dx (e + e*)``."""
    check_perturbation(g, p, positive=True)
    lap = build_laplacian(g)
    l1 = build_l1(g, p)
    return HDMatrix(lap, l1, l1, np.zeros_like(lap))


def _pinv_blocks(ldag, l1):
    a = ldag @ l1 @ ldag
    first = -a
    second = 2.0 * (a @ l1 @ ldag)
    first = 0.5 * (first + first.T)
    second = 0.5 * (second + second.T)
    return HDMatrix(ldag, first, first.copy(), second)


def hd_pinv_laplacian(lap, l1, ldag=None, rank_tol=None) -> HDMatrix:
    """Closed-form pseudoinverse of ``lap + l1 (e + e*)``.

    ``lap`` must be the Laplacian of a connected graph and ``l1`` must have zero
    row sums. ``ldag`` may be passed in when ``lap``'s pseudoinverse is already known.
    """
    lap = np.asarray(lap, dtype=float)
    l1 = np.asarray(l1, dtype=float)
    if lap.shape != l1.shape:
        raise DimensionMismatch(f"L is {lap.shape} but L1 is {l1.shape}")
    for name, mat in (("L", lap), ("L1", l1)):
        row_sums = np.abs(mat.sum(axis=1))
        if row_sums.size and row_sums.max() > ROW_SUM_TOL * max(1.0, np.abs(mat).max()):
            raise NonZeroRowSums(f"{name} row sums reach {row_sums.max():.3e}")
    spectrum = eig_sym(lap)
    tol = default_rank_tol(spectrum) if rank_tol is None else rank_tol
    if not is_connected_spectrum(spectrum, tol):
        raise NotConnected(f"algebraic connectivity {spectrum.algebraic_connectivity:.3e} <= {tol:.3e}")
    if ldag is None:
        ldag = pinv_psd(spectrum, tol)
    return _pinv_blocks(np.asarray(ldag, dtype=float), l1)


def hd_pinv_graph(g: WeightedGraph, p, rank_tol=None) -> HDMatrix:
    """Pseudoinverse of the hyper-dual Laplacian of ``g`` perturbed by ``p``."""
    dx = check_perturbation(g, p, positive=True)
    ctx = connected_context(g, rank_tol)
    return _pinv_blocks(ctx.pinv, build_l1(g, dx))


@dataclass(frozen=True)
class PenroseResiduals:
    """Block-max Frobenius residuals of the four Penrose equations and of ``XA = I - J/n``."""

    axa: float
    xax: float
    ax_symmetric: float
    xa_symmetric: float
    projector: float

    def as_dict(self):
        return {
            "axa_minus_a": self.axa,
            "xax_minus_x": self.xax,
            "ax_asymmetry": self.ax_symmetric,
            "xa_asymmetry": self.xa_symmetric,
            "xa_minus_projector": self.projector,
        }

    def max(self):
        return max(self.axa, self.xax, self.ax_symmetric, self.xa_symmetric, self.projector)


def penrose_residuals(a: HDMatrix, x: HDMatrix) -> PenroseResiduals:
    ax = a @ x
    xa = x @ a
    n = xa.shape[0]
    centering = HDMatrix.from_real(np.eye(n) - np.full((n, n), 1.0 / n))
    return PenroseResiduals(
        axa=(ax @ a - a).norm(),
        xax=(xa @ x - x).norm(),
        ax_symmetric=(ax.T - ax).norm(),
        xa_symmetric=(xa.T - xa).norm(),
        projector=(xa - centering).norm(),
    )


@dataclass(frozen=True, eq=False)
class HDSolveResult:
    """Particular solution ``A^+ b`` and the projector ``I - A^+ A`` onto the homogeneous part."""

    solution: HDVector
    consistent: bool
    residual: float
    projector: HDMatrix

    def general(self, u: HDVector) -> HDVector:
        """Member of the solution family for the free vector ``u``."""
        return self.solution + self.projector @ u


def hd_solve(a: HDMatrix, adag: HDMatrix, b: HDVector) -> HDSolveResult:
    """Solve ``A x = b`` given ``A^+``; inconsistency is reported, not raised."""
    residual = (a @ (adag @ b) - b).norm()
    n = adag.shape[0]
    projector = HDMatrix.identity(n) - adag @ a
    return HDSolveResult(adag @ b, residual <= CONSISTENCY_TOL, residual, projector)


def solve_potentials(g: WeightedGraph, p, i: int, j: int, current: float = 1.0, rank_tol=None) -> HDVector:
    """Vertex potentials when ``current`` enters at vertex i and leaves at j."""
    check_vertex(g, i)
    check_vertex(g, j)
    if i == j:
        raise SameVertex(f"source and sink are both vertex {i}")
    if current == 0:
        raise ZeroCurrent("net current must be nonzero")
    lap_hd = hd_laplacian(g, p)
    result = hd_solve(lap_hd, hd_pinv_graph(g, p, rank_tol), HDVector.from_real(current * pair_vector(g.n, i, j)))
    if not result.consistent:
        raise NumericalError(f"potential equations inconsistent (residual {result.residual:.3e})")
    return result.solution
