"""Resistance distance, Kirchhoff index and biharmonic distance.

The hyper-dual variants evaluate at weights ``x + dx (e + e*)``: the real slot
is the plain value, the ``e`` and ``e*`` slots both hold the directional
derivative ``grad . dx`` and the ``e*e*`` slot holds ``dx^T H dx``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import WeightedGraph, build_l1, check_perturbation
from .hdmatrix import hd_pinv_graph
from .hyperdual import HyperDual
from .laplacian import check_vertex, connected_context, contract


@dataclass(frozen=True)
class ResistanceReport:
    pair: tuple
    value: HyperDual

    @property
    def resistance(self):
        return self.value.re

    @property
    def directional_derivative(self):
        return self.value.eps

    @property
    def quadratic_form(self):
        return self.value.eps_eps_star


@dataclass(frozen=True)
class KirchhoffReport:
    value: HyperDual

    @property
    def kirchhoff(self):
        return self.value.re

    @property
    def directional_derivative(self):
        return self.value.eps

    @property
    def quadratic_form(self):
        return self.value.eps_eps_star


def resistance(g: WeightedGraph, i: int, j: int, rank_tol=None) -> float:
    check_vertex(g, i)
    check_vertex(g, j)
    ctx = connected_context(g, rank_tol)
    if i == j:
        return 0.0
    return float(contract(ctx.pinv, i, j))


def kirchhoff(g: WeightedGraph, rank_tol=None) -> float:
    """``n tr(L^+)``, i.e. the sum of resistances over unordered vertex pairs."""
    ctx = connected_context(g, rank_tol)
    return float(g.n * ctx.pinv.trace())


def biharmonic_distance(g: WeightedGraph, i: int, j: int, rank_tol=None) -> float:
    """Contraction of ``(L^2)^+ = (L^+)^2`` against ``1_i - 1_j``."""
    check_vertex(g, i)
    check_vertex(g, j)
    ctx = connected_context(g, rank_tol)
    if i == j:
        return 0.0
    return float(contract(ctx.pinv_sq, i, j))


def hd_resistance(g: WeightedGraph, p, i: int, j: int, rank_tol=None) -> ResistanceReport:
    check_vertex(g, i)
    check_vertex(g, j)
    check_perturbation(g, p, positive=True)
    connected_context(g, rank_tol)
    if i == j:
        return ResistanceReport((i, j), HyperDual(0.0, 0.0, 0.0, 0.0))
    return ResistanceReport((i, j), hd_pinv_graph(g, p, rank_tol).contraction(i, j))


def hd_kirchhoff(g: WeightedGraph, p, rank_tol=None) -> KirchhoffReport:
    dx = check_perturbation(g, p, positive=True)
    ctx = connected_context(g, rank_tol)
    ldag, ldag2 = ctx.pinv, ctx.pinv_sq
    l1 = build_l1(g, dx)
    n = g.n
    first = -n * float(((ldag2 @ l1)).trace())
    second = 2.0 * n * float((ldag2 @ l1 @ ldag @ l1).trace())
    return KirchhoffReport(HyperDual(n * float(ldag.trace()), first, first, second))
