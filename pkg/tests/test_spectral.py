import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdresist.errors import ConvergenceError, NegativeEigenvalue, NonFinite
from hdresist.graph import build_l1, build_laplacian, complete_graph, edge_vector, random_connected_graph
from hdresist.spectral import (
    _round_robin,
    eig_sym,
    frobenius_norm,
    is_connected_spectrum,
    pinv_psd,
    spectral_norm,
    sqrt_psd,
)


def test_eig_examples(k3, k4):
    assert np.allclose(eig_sym(build_laplacian(k3)).eigenvalues, [3, 3, 0], atol=1e-13)
    assert np.allclose(eig_sym(build_laplacian(k4)).eigenvalues, [4, 4, 4, 0], atol=1e-13)
    assert np.allclose(eig_sym([[1, -1], [-1, 1]]).eigenvalues, [2, 0], atol=1e-15)


def test_spectral_decomposition_accessors(k3):
    d = eig_sym(build_laplacian(k3))
    assert d.n == 3
    assert d.largest == pytest.approx(3)
    assert d.algebraic_connectivity == pytest.approx(3)
    assert np.allclose(d.reconstruct(), build_laplacian(k3), atol=1e-13)


@pytest.mark.parametrize("n", range(1, 10))
def test_round_robin_covers_every_pair_once(n):
    seen = []
    for ps, qs in _round_robin(n):
        flat = list(ps) + list(qs)
        assert len(flat) == len(set(flat))
        seen += [(int(p), int(q)) for p, q in zip(ps, qs)]
    assert sorted(seen) == [(p, q) for p in range(n) for q in range(p + 1, n)]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 14), st.integers(0, 2**32 - 1))
def test_eig_matches_reference(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) * rng.choice([1e-3, 1, 1e3])
    a = a + a.T
    d = eig_sym(a)
    assert np.all(np.diff(d.eigenvalues) <= 0)
    ref = np.linalg.eigvalsh(a)[::-1]
    scale = max(1.0, np.abs(ref).max())
    assert np.allclose(d.eigenvalues, ref, atol=1e-12 * scale)
    v = d.eigenvectors
    assert np.allclose(v.T @ v, np.eye(n), atol=1e-12)
    assert np.allclose(d.reconstruct(), a, atol=1e-12 * scale)


def test_eig_rejects_non_finite():
    with pytest.raises(NonFinite):
        eig_sym([[1.0, np.nan], [np.nan, 1.0]])


def test_eig_reports_non_convergence():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(8, 8))
    with pytest.raises(ConvergenceError):
        eig_sym(a + a.T, max_sweeps=1)


def test_pinv_examples(k3):
    lap = build_laplacian(k3)
    p = pinv_psd(eig_sym(lap))
    assert np.allclose(p, (np.eye(3) - np.ones((3, 3)) / 3) / 3, atol=1e-14)
    assert np.allclose(p @ np.ones(3), 0, atol=1e-14)
    two = np.array([[1.0, -1], [-1, 1]])
    p2 = pinv_psd(eig_sym(two))
    assert np.allclose(p2, two / 4, atol=1e-15)
    assert np.allclose(two @ p2 @ two, two, atol=1e-15)
    assert not pinv_psd(eig_sym(np.zeros((3, 3)))).any()


def _penrose(a, x):
    return max(
        np.abs(a @ x @ a - a).max(),
        np.abs(x @ a @ x - x).max(),
        np.abs((a @ x).T - a @ x).max(),
        np.abs((x @ a).T - x @ a).max(),
    )


def test_pinv_against_reference_on_random_laplacians():
    rng = np.random.default_rng(5)
    for _ in range(30):
        g = random_connected_graph(rng, int(rng.integers(2, 13)), rng.uniform(0.05, 0.8))
        lap = build_laplacian(g)
        p = pinv_psd(eig_sym(lap))
        assert _penrose(lap, p) < 1e-10
        assert np.allclose(p, np.linalg.pinv(lap), atol=1e-10)
        # shifted-inverse identity for connected graphs
        j = np.full(lap.shape, 1.0 / g.n)
        assert np.allclose(p, np.linalg.inv(lap + j) - j, atol=1e-10)


def test_pinv_rejects_indefinite():
    with pytest.raises(NegativeEigenvalue):
        pinv_psd(eig_sym(np.diag([1.0, -1.0])))


def test_sqrt_examples():
    assert np.allclose(sqrt_psd(eig_sym(np.eye(3))), np.eye(3), atol=1e-15)
    m = np.array([[1.0, -1], [-1, 1]]) / 4
    r = sqrt_psd(eig_sym(m))
    assert np.allclose(r, m * 4 / (2 * np.sqrt(2)), atol=1e-15)
    assert np.allclose(r @ r, m, atol=1e-15)
    assert np.allclose(sqrt_psd(eig_sym(np.diag([4.0, 9.0]))), np.diag([2.0, 3.0]), atol=1e-15)


def test_norm_examples(k3):
    two = np.array([[1.0, -1], [-1, 1]])
    assert frobenius_norm(two) == pytest.approx(2)
    assert spectral_norm(build_laplacian(k3)) == pytest.approx(3)
    g1 = np.outer(edge_vector(k3, 1), edge_vector(k3, 1))
    assert frobenius_norm(g1) == pytest.approx(2)
    assert spectral_norm(np.array([[0.0, 2.0], [0.0, 0.0]])) == pytest.approx(2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_frobenius_dominates_spectral_norm(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(5, 5))
    sym = a + a.T
    assert spectral_norm(sym) <= frobenius_norm(sym) + 1e-12
    assert spectral_norm(sym) == pytest.approx(np.linalg.norm(sym, 2), rel=1e-12)
    assert spectral_norm(a) == pytest.approx(np.linalg.norm(a, 2), rel=1e-10)


def test_connectivity_from_spectrum():
    assert is_connected_spectrum(eig_sym(build_laplacian(complete_graph(4))))
    from hdresist.graph import WeightedGraph

    split = WeightedGraph(4, ((1, 2), (3, 4)), (1.0, 1.0))
    assert not is_connected_spectrum(eig_sym(build_laplacian(split)))
    assert is_connected_spectrum(eig_sym(np.zeros((1, 1))))


def test_l1_single_edge_frobenius(k3):
    l1 = build_l1(k3, [1.0, 0, 0])
    assert frobenius_norm(l1) ** 2 == pytest.approx(4)


def test_eigenvalues_only_mode():
    rng = np.random.default_rng(12)
    a = rng.normal(size=(9, 9))
    a = a + a.T
    d = eig_sym(a, vectors=False)
    assert d.eigenvectors is None
    assert np.allclose(d.eigenvalues, eig_sym(a).eigenvalues, atol=1e-12)
    with pytest.raises(ValueError):
        pinv_psd(d)
