"""Resistance distance and Kirchhoff index with exact edge-weight derivatives.

Derivatives come from hyper-dual arithmetic on the graph Laplacian: perturbing
the weights as ``x + dx (e + e*)`` and taking the Moore-Penrose inverse of the
resulting hyper-dual Laplacian yields first and second directional derivatives
in closed form.
"""
from .bounds import (
    certify,
    kirchhoff_eig_bounds,
    l1_norm_sandwich,
    resistance_eig_bound,
    resistance_eig_bound_coarse,
    strong_convexity_alpha,
)
from .errors import (
    HDResistError,
    InvalidPerturbation,
    NonInvertible,
    NotConnected,
    ParseError,
    UnknownEdge,
    ValidationError,
)
from .graph import (
    Perturbation,
    WeightedGraph,
    build_adjacency,
    build_l1,
    build_laplacian,
    complete_graph,
    edge_vector,
    parse_graph,
    parse_perturbation,
)
from .hdmatrix import HDMatrix, HDVector, hd_laplacian, hd_pinv_laplacian, hd_solve, penrose_residuals, solve_potentials
from .hessian import (
    assemble_hessian,
    fd_hessian_oracle,
    gradient_kirchhoff,
    gradient_resistance,
    hessian_extreme_eigs,
    quad_form_kirchhoff,
    quad_form_resistance,
)
from .hyperdual import HyperDual, hd_add, hd_coeff, hd_inv, hd_mul
from .resistance import biharmonic_distance, hd_kirchhoff, hd_resistance, kirchhoff, resistance
from .spectral import eig_sym, frobenius_norm, pinv_psd, spectral_norm, sqrt_psd

__version__ = "0.1.0"
