"""Acceptance gate: one test per criterion, each printed as a PASS/FAIL line in the summary.

Run with ``pytest tests/test_acceptance.py`` (or ``python3 tests/test_acceptance.py``).
"""
import itertools
import json
import subprocess
import sys
import time
from itertools import combinations, permutations

import numpy as np
import pytest

from hdresist.bounds import (
    kirchhoff_eig_bounds,
    l1_norm_sandwich,
    max_degree,
    resistance_eig_bound,
    resistance_eig_bound_coarse,
    strong_convexity_alpha,
)
from hdresist.graph import Perturbation, build_l1, build_laplacian, complete_graph
from hdresist.hdmatrix import hd_laplacian, hd_pinv_laplacian, penrose_residuals
from hdresist.hessian import (
    assemble_hessian,
    fd_gradient_oracle,
    fd_hessian_oracle,
    hessian_extreme_eigs,
)
from hdresist.laplacian import laplacian_context
from hdresist.resistance import hd_kirchhoff, hd_resistance, kirchhoff, resistance
from hdresist.spectral import eig_sym, pinv_psd

from _corpus import corpus, matching_perturbation

K3_ORDER = [(1, 2), (2, 3), (1, 3)]
K3_DISPLAY = np.array([[0.5926, 0.1481, 0.1481], [0.1481, 0.1481, -0.0741], [0.1481, -0.0741, 0.1481]])
K4_DISPLAY = np.array(
    [
        [0.5, 0.125, 0.125, 0.125, 0.125, 0.0],
        [0.125, 0.5, 0.125, 0.125, 0.0, 0.125],
        [0.125, 0.125, 0.5, 0.0, 0.125, 0.125],
        [0.125, 0.125, 0.0, 0.5, 0.125, 0.125],
        [0.125, 0.0, 0.125, 0.125, 0.5, 0.125],
        [0.0, 0.125, 0.125, 0.125, 0.125, 0.5],
    ]
)
SLACK = 1e-9


def _matches_up_to_permutation(h, display):
    m = h.shape[0]
    return any(
        np.array_equal(np.round(h[np.ix_(p, p)], 4) + 0.0, display) for p in permutations(range(m))
    )


def test_criterion_1_k3_golden_hessian():
    """criterion 1: K3 resistance Hessian reproduces the displayed matrix and mu_max 0.6667"""
    start = time.perf_counter()
    g = complete_graph(3, order=K3_ORDER)
    h = assemble_hessian(g, "resistance", (1, 2)).matrix
    assert np.array_equal(np.round(h, 4) + 0.0, K3_DISPLAY), h
    for pair in [(1, 2), (2, 3), (1, 3)]:
        hp = assemble_hessian(g, "resistance", pair)
        assert _matches_up_to_permutation(hp.matrix, K3_DISPLAY), pair
        assert abs(hessian_extreme_eigs(hp)[1] - 0.6667) <= 5e-5
    assert time.perf_counter() - start < 1.0


def test_criterion_2_k3_coarse_bound():
    """criterion 2: K3 coarse resistance bound 0.8889 dominates the observed 0.6667"""
    g = complete_graph(3, order=K3_ORDER)
    bound = resistance_eig_bound_coarse(g)
    assert abs(bound - 0.8889) <= 1e-4
    for pair in [(1, 2), (2, 3), (1, 3)]:
        mu_max = hessian_extreme_eigs(assemble_hessian(g, "resistance", pair))[1]
        assert abs(mu_max - 0.6667) <= 5e-5
        assert mu_max <= bound


def test_criterion_3_k4_golden_hessian():
    """criterion 3: K4 Kirchhoff Hessian, eigenvalues (1/4, 1) and bounds (1/4, 1)"""
    lex = complete_graph(4)
    h = assemble_hessian(lex, "kirchhoff").matrix
    assert np.array_equal(np.round(h, 4) + 0.0, K4_DISPLAY)
    # every edge ordering yields the display relabelled by that ordering
    for order in permutations(range(6)):
        g = complete_graph(4, order=[lex.edges[k] for k in order])
        hp = assemble_hessian(g, "kirchhoff").matrix
        assert np.array_equal(np.round(hp, 4) + 0.0, K4_DISPLAY[np.ix_(order, order)])
    lo, hi = hessian_extreme_eigs(assemble_hessian(lex, "kirchhoff"))
    assert abs(lo - 0.25) <= 1e-9 and abs(hi - 1.0) <= 1e-9
    # "exactly" up to floating-point rounding of the eigensolver; 12-digit output is exact
    bl, bu = kirchhoff_eig_bounds(lex)
    assert bl == pytest.approx(0.25, rel=1e-12, abs=0) and bu == pytest.approx(1.0, rel=1e-12, abs=0)
    assert [float(f"{v:.12g}") for v in (bl, bu)] == [0.25, 1.0]


def test_criterion_4_penrose_suite():
    """criterion 4: Penrose and projector residuals <= 1e-8 on 200 random graphs in < 30 s"""
    cases = corpus()
    assert len(cases) == 200
    start = time.perf_counter()
    worst = 0.0
    for case in cases:
        g, p = case.graph, case.perturbation
        assert 2 <= g.n <= 12
        assert np.all((g.x >= 0.1) & (g.x <= 10)) and np.all(g.x + p.dx > 0)
        x = hd_pinv_laplacian(build_laplacian(g), build_l1(g, p))
        worst = max(worst, penrose_residuals(hd_laplacian(g, p), x).max())
    elapsed = time.perf_counter() - start
    assert worst <= 1e-8, worst
    assert elapsed < 30.0, elapsed


def test_criterion_5_derivative_oracle():
    """criterion 5: closed form, polarization and finite differences agree; HD gradients match FD"""
    worst_h, worst_g = 0.0, 0.0
    for case in corpus():
        g = case.graph
        for target, pair in (("resistance", case.pair), ("kirchhoff", None)):
            cf = assemble_hessian(g, target, pair).matrix
            pol = assemble_hessian(g, target, pair, method="polarization").matrix
            fd = fd_hessian_oracle(g, target, pair, h=1e-4).matrix
            for a, b in itertools.combinations((cf, pol, fd), 2):
                worst_h = max(worst_h, float(np.abs(a - b).max()))
            units = [Perturbation.unit(g.m, k + 1) for k in range(g.m)]
            if target == "resistance":
                hd = np.array([hd_resistance(g, e, *pair).directional_derivative for e in units])
            else:
                hd = np.array([hd_kirchhoff(g, e).directional_derivative for e in units])
            ref = fd_gradient_oracle(g, target, pair)
            worst_g = max(worst_g, float(np.abs(hd - ref).max() / np.abs(hd).max()))
    assert worst_h <= 1e-4, worst_h
    assert worst_g <= 1e-6, worst_g


def test_criterion_6_bound_suite():
    """criterion 6: Hessian spectra within bounds; L1 sandwich tight at the lower end on matchings"""
    rng = np.random.default_rng(6)
    worst_slack = np.inf
    sandwich_ok = True
    lower_equal = []
    for case in corpus():
        g = case.graph
        ctx = laplacian_context(g)
        coarse = resistance_eig_bound_coarse(g)
        for i, j in combinations(range(1, g.n + 1), 2):
            lo, hi = hessian_extreme_eigs(assemble_hessian(g, "resistance", (i, j)))
            pair_bound = resistance_eig_bound(g, i, j)
            worst_slack = min(worst_slack, lo, pair_bound - hi, coarse - hi)
        kl, ku = kirchhoff_eig_bounds(g)
        lo, hi = hessian_extreme_eigs(assemble_hessian(g, "kirchhoff"))
        worst_slack = min(worst_slack, lo - kl, ku - hi)
        assert ctx.largest_eigenvalue <= 2 * g.weighted_degrees().max() * (1 + 1e-12)
        sandwich_ok &= l1_norm_sandwich(g, case.perturbation).holds
        s = l1_norm_sandwich(g, matching_perturbation(g, rng))
        sandwich_ok &= s.holds
        lower_equal.append(abs(s.value - s.lower) <= 1e-9 * max(1.0, s.lower))
    assert worst_slack >= -SLACK, f"bound slack {worst_slack:.3e}"
    assert sandwich_ok, "L1 sandwich violated"
    assert all(lower_equal), (
        f"eigenvalue bounds and sandwich hold (worst slack {worst_slack:.3e}), but the lower end of the "
        f"sandwich is attained on {sum(lower_equal)}/{len(lower_equal)} matching perturbations "
        "(a matching gives ||L1||_F^2 = 4|dx|^2, twice the lower bound)"
    )


def test_criterion_7_strong_convexity():
    """criterion 7: mu_min of the Kirchhoff Hessian >= n / (2 (n-1)^3 M^3)"""
    worst = np.inf
    for case in corpus():
        g = case.graph
        cap = float(g.x.max())
        lo, _ = hessian_extreme_eigs(assemble_hessian(g, "kirchhoff"))
        worst = min(worst, lo - strong_convexity_alpha(g.n, cap))
        # the corpus-wide cap is weaker still
        assert lo >= strong_convexity_alpha(g.n, 10.0) - 1e-12
    assert worst >= -1e-12, worst


def test_criterion_8_consistency_identities():
    """criterion 8: Kf = sum of resistances, Kf(Kn) = n-1, shifted-inverse identity, scaling law"""
    for case in corpus():
        g = case.graph
        n = g.n
        total = sum(resistance(g, i, j) for i in range(1, n + 1) for j in range(1, n + 1))
        assert abs(kirchhoff(g) - 0.5 * total) <= 1e-8
        lap = build_laplacian(g)
        shift = np.full((n, n), 1.0 / n)
        ldag = pinv_psd(eig_sym(lap))
        assert np.abs(ldag - (np.linalg.inv(lap + shift) - shift)).max() <= 1e-8
        for c in (0.5, 2.0, 10.0):
            h = g.with_weights(c * g.x)
            for i, j in combinations(range(1, n + 1), 2):
                assert abs(resistance(h, i, j) - resistance(g, i, j) / c) <= 1e-10
    for n in range(2, 9):
        assert abs(kirchhoff(complete_graph(n)) - (n - 1)) <= 1e-8


def test_criterion_9_cli_determinism(tmp_path):
    """criterion 9: `check` on K3 with dx = e1 exits 0 with byte-identical JSON across runs"""
    graph = tmp_path / "k3.txt"
    graph.write_text("3\n1 2 1.0\n2 3 1.0\n1 3 1.0\n")
    dp = tmp_path / "dp.txt"
    dp.write_text("1 2 1.0\n")
    cmd = [sys.executable, "-m", "hdresist", "check", "--graph", str(graph), "--perturbation", str(dp), "--format", "json"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    assert first.returncode == 0 and second.returncode == 0, first.stderr
    assert first.stdout == second.stdout
    report = json.loads(first.stdout)
    assert report["violations"] == []
    assert max(report["residuals"].values()) <= 1e-8


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
