"""Eigenvalue bounds for the resistance and Kirchhoff-index Hessians.

``d_max`` is always the unweighted maximum degree. The weighted maximum degree
only enters the premise ``lambda_1 <= 2 d_max^w`` behind the strong-convexity
constant.

The Kirchhoff lower bound divides by ``lambda_1^3`` (it comes from
``||L^{1/2}||_2^2 ||L||_2^2 = lambda_1^3``), not by ``lambda_{n-1}^3``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import BoundViolation, ValidationError
from .graph import WeightedGraph, build_l1, check_perturbation
from .hessian import assemble_hessian, hessian_extreme_eigs
from .laplacian import connected_context
from .resistance import biharmonic_distance
from .spectral import frobenius_norm

SLACK = 1e-9
ALPHA_SLACK = 1e-12


def max_degree(g: WeightedGraph) -> int:
    return int(g.degrees().max()) if g.m else 0


def max_weighted_degree(g: WeightedGraph) -> float:
    return float(g.weighted_degrees().max()) if g.m else 0.0


def resistance_eig_bound(g: WeightedGraph, i: int, j: int, rank_tol=None) -> float:
    """``4 (d_max + 1) / lambda_{n-1} * biharmonic(i, j)``."""
    ctx = connected_context(g, rank_tol)
    bih = biharmonic_distance(g, i, j, rank_tol)
    return 4.0 * (max_degree(g) + 1) / ctx.algebraic_connectivity * bih


def resistance_eig_bound_coarse(g: WeightedGraph, rank_tol=None) -> float:
    """Pair-independent ``8 (d_max + 1) / lambda_{n-1}^3``."""
    ctx = connected_context(g, rank_tol)
    return 8.0 * (max_degree(g) + 1) / ctx.algebraic_connectivity**3


def kirchhoff_eig_bounds(g: WeightedGraph, rank_tol=None) -> tuple:
    """``(4n / lambda_1^3, 4n (d_max + 1) / lambda_{n-1}^3)``."""
    ctx = connected_context(g, rank_tol)
    n = g.n
    lower = 4.0 * n / ctx.largest_eigenvalue**3
    upper = 4.0 * n * (max_degree(g) + 1) / ctx.algebraic_connectivity**3
    return (lower, upper)


@dataclass(frozen=True)
class Sandwich:
    lower: float
    value: float
    upper: float
    holds: bool

    def as_list(self):
        return [self.lower, self.value, self.upper, self.holds]


def l1_norm_sandwich(g: WeightedGraph, p) -> Sandwich:
    """``2 |dx|^2 <= ||L1||_F^2 <= 2 (d_max + 1) |dx|^2``."""
    dx = check_perturbation(g, p)
    sq = float(dx @ dx)
    value = frobenius_norm(build_l1(g, dx)) ** 2
    lower = 2.0 * sq
    upper = 2.0 * (max_degree(g) + 1) * sq
    tol = 1e-12 * max(1.0, upper)
    return Sandwich(lower, value, upper, lower - tol <= value <= upper + tol)


def strong_convexity_alpha(n: int, weight_cap: float) -> float:
    """``n / (2 (n-1)^3 M^3)`` for graphs whose weights never exceed ``M``."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValidationError(f"need at least 2 vertices, got {n!r}")
    if not weight_cap > 0:
        raise ValidationError(f"weight cap must be positive, got {weight_cap!r}")
    return n / (2.0 * (n - 1) ** 3 * weight_cap**3)


@dataclass
class PairBounds:
    pair: tuple
    bound: float
    observed_min: float
    observed_max: float


@dataclass
class BoundsReport:
    n: int
    m: int
    largest_eigenvalue: float
    algebraic_connectivity: float
    max_degree: int
    max_weighted_degree: float
    resistance_coarse_bound: float
    pairs: list
    kirchhoff_bounds: tuple
    kirchhoff_observed: tuple
    weight_cap: float | None
    alpha: float | None
    sandwich: Sandwich | None = None
    violations: list = field(default_factory=list)

    def as_dict(self):
        return {
            "largest_eigenvalue": self.largest_eigenvalue,
            "algebraic_connectivity": self.algebraic_connectivity,
            "max_degree": self.max_degree,
            "max_weighted_degree": self.max_weighted_degree,
            "resistance_coarse_bound": self.resistance_coarse_bound,
            "resistance_pairs": [
                {
                    "pair": list(pb.pair),
                    "bound": pb.bound,
                    "observed": [pb.observed_min, pb.observed_max],
                }
                for pb in self.pairs
            ],
            "kirchhoff_bounds": list(self.kirchhoff_bounds),
            "kirchhoff_observed": list(self.kirchhoff_observed),
            "weight_cap": self.weight_cap,
            "strong_convexity_alpha": self.alpha,
            "l1_sandwich": None if self.sandwich is None else self.sandwich.as_list(),
        }


def certify(g: WeightedGraph, p=None, pairs=None, weight_cap=None, strict=False, rank_tol=None) -> BoundsReport:
    """Compare every bound against the observed Hessian spectra.

    ``pairs`` defaults to all vertex pairs ``i < j``. ``weight_cap`` defaults to
    the largest weight. With ``strict`` any violation raises ``BoundViolation``.
    """
    ctx = connected_context(g, rank_tol)
    dmax = max_degree(g)
    dmax_w = max_weighted_degree(g)
    lam1 = ctx.largest_eigenvalue
    violations = []

    coarse = resistance_eig_bound_coarse(g, rank_tol) if g.n >= 2 else 0.0
    pair_reports = []
    pairs = sorted(combinations(range(1, g.n + 1), 2)) if pairs is None else sorted(tuple(pr) for pr in pairs)
    for i, j in pairs:
        h = assemble_hessian(g, "resistance", (i, j), rank_tol=rank_tol)
        mu_min, mu_max = hessian_extreme_eigs(h)
        bound = resistance_eig_bound(g, i, j, rank_tol)
        pair_reports.append(PairBounds((i, j), bound, mu_min, mu_max))
        if mu_min < -SLACK:
            violations.append(f"resistance({i},{j}) Hessian has negative eigenvalue {mu_min:.6g}")
        if mu_max > bound + SLACK:
            violations.append(f"resistance({i},{j}) eigenvalue {mu_max:.12g} exceeds pair bound {bound:.12g}")
        if mu_max > coarse + SLACK:
            violations.append(f"resistance({i},{j}) eigenvalue {mu_max:.12g} exceeds coarse bound {coarse:.12g}")

    if g.n >= 2:
        kb = kirchhoff_eig_bounds(g, rank_tol)
        ko = hessian_extreme_eigs(assemble_hessian(g, "kirchhoff", rank_tol=rank_tol))
        if ko[0] < kb[0] - SLACK:
            violations.append(f"kirchhoff eigenvalue {ko[0]:.12g} below lower bound {kb[0]:.12g}")
        if ko[1] > kb[1] + SLACK:
            violations.append(f"kirchhoff eigenvalue {ko[1]:.12g} exceeds upper bound {kb[1]:.12g}")
        cap = float(np.max(g.x)) if weight_cap is None else float(weight_cap)
        if np.max(g.x) > cap:
            raise ValidationError(f"weight cap {cap} is below the largest weight {np.max(g.x)}")
        alpha = strong_convexity_alpha(g.n, cap)
        if ko[0] < alpha - ALPHA_SLACK:
            violations.append(f"kirchhoff eigenvalue {ko[0]:.12g} below strong-convexity constant {alpha:.12g}")
        if lam1 > 2.0 * dmax_w * (1 + 1e-12):
            violations.append(f"largest Laplacian eigenvalue {lam1:.12g} exceeds twice the max weighted degree")
    else:
        kb, ko, cap, alpha = (0.0, 0.0), (0.0, 0.0), None, None

    sandwich = None
    if p is not None:
        sandwich = l1_norm_sandwich(g, p)
        if not sandwich.holds:
            violations.append(f"L1 norm sandwich fails: {sandwich.as_list()}")

    report = BoundsReport(
        n=g.n,
        m=g.m,
        largest_eigenvalue=lam1,
        algebraic_connectivity=ctx.algebraic_connectivity,
        max_degree=dmax,
        max_weighted_degree=dmax_w,
        resistance_coarse_bound=coarse,
        pairs=pair_reports,
        kirchhoff_bounds=kb,
        kirchhoff_observed=ko,
        weight_cap=cap,
        alpha=alpha,
        sandwich=sandwich,
        violations=violations,
    )
    if strict and violations:
        raise BoundViolation("; ".join(violations))
    return report
