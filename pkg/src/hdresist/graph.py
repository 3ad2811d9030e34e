"""Positive-weighted simple graphs, weight perturbations and their matrices.

Vertices and edges are numbered from 1 in every public signature, the way
the input files number them. Arrays (weight vectors, matrices, Hessians) are
ordinary 0-based numpy arrays in canonical edge order, which is file order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidPerturbation,
    ParseError,
    UnknownEdge,
    ValidationError,
)


def _readonly(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph on vertices 1..n with positive edge weights."""

    n: int
    edges: tuple
    weights: tuple

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValidationError(f"vertex count must be a positive integer, got {self.n!r}")
        if len(edges) != len(weights):
            raise DimensionMismatch(f"{len(edges)} edges but {len(weights)} weights")
        seen = set()
        for k, ((u, v), w) in enumerate(zip(edges, weights), start=1):
            if u == v:
                raise ValidationError(f"edge {k}: self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValidationError(f"edge {k}: vertex out of range [1, {self.n}] in ({u}, {v})")
            if u > v:
                raise ValidationError(f"edge {k}: endpoints must satisfy u < v, got ({u}, {v})")
            if (u, v) in seen:
                raise ValidationError(f"edge {k}: duplicate edge ({u}, {v})")
            seen.add((u, v))
            if not math.isfinite(w) or w <= 0:
                raise ValidationError(f"edge {k}: nonpositive weight {w!r}")

    @classmethod
    def from_edges(cls, n, weighted_edges):
        """Build from ``(u, v, w)`` triples in any endpoint orientation."""
        edges, weights = [], []
        for u, v, w in weighted_edges:
            edges.append((min(u, v), max(u, v)))
            weights.append(w)
        return cls(n, tuple(edges), tuple(weights))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def x(self) -> np.ndarray:
        """Edge weight vector (read-only)."""
        return _readonly(self.weights)

    @cached_property
    def edge_index(self) -> dict:
        """Map ``(u, v)`` with ``u < v`` to the 0-based edge position."""
        return {e: k for k, e in enumerate(self.edges)}

    @cached_property
    def incidence(self) -> np.ndarray:
        """n x m signed incidence matrix whose columns are the edge vectors."""
        b = np.zeros((self.n, self.m))
        for k, (u, v) in enumerate(self.edges):
            b[u - 1, k] = 1.0
            b[v - 1, k] = -1.0
        b.flags.writeable = False
        return b

    def degrees(self) -> np.ndarray:
        """Unweighted vertex degrees."""
        return np.abs(self.incidence).sum(axis=1)

    def weighted_degrees(self) -> np.ndarray:
        return np.abs(self.incidence) @ self.x

    def with_weights(self, x) -> "WeightedGraph":
        return WeightedGraph(self.n, self.edges, tuple(np.asarray(x, dtype=float)))

    def perturbed(self, p: "Perturbation") -> "WeightedGraph":
        """The graph with weights ``x + dx``."""
        check_perturbation(self, p, positive=True)
        return self.with_weights(self.x + p.dx)


@dataclass(frozen=True, eq=False)
class Perturbation:
    """Real edge-weight perturbation ``dx`` in canonical edge order."""

    dx: np.ndarray

    def __post_init__(self):
        dx = _readonly(np.ravel(self.dx))
        if not np.all(np.isfinite(dx)):
            raise ValidationError("perturbation contains non-finite values")
        object.__setattr__(self, "dx", dx)

    @classmethod
    def zeros(cls, m):
        return cls(np.zeros(m))

    @classmethod
    def unit(cls, m, k):
        """Unit perturbation of edge k (1-based)."""
        dx = np.zeros(m)
        dx[k - 1] = 1.0
        return cls(dx)

    def __len__(self):
        return self.dx.size


def check_perturbation(g: WeightedGraph, p, positive=False):
    dx = p.dx if isinstance(p, Perturbation) else np.asarray(p, dtype=float)
    if dx.shape != (g.m,):
        raise DimensionMismatch(f"perturbation has length {dx.size}, graph has {g.m} edges")
    if positive and not np.all(g.x + dx > 0):
        k = int(np.argmin(g.x + dx)) + 1
        raise InvalidPerturbation(f"edge {k}: weight plus perturbation must stay positive")
    return dx


def build_adjacency(g: WeightedGraph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for (u, v), w in zip(g.edges, g.weights):
        a[u - 1, v - 1] = a[v - 1, u - 1] = w
    return a


def build_degree(g: WeightedGraph) -> np.ndarray:
    return np.diag(build_adjacency(g).sum(axis=1))


def build_laplacian(g: WeightedGraph) -> np.ndarray:
    return _edge_laplacian(g, g.x)


def build_a1(g: WeightedGraph, p) -> np.ndarray:
    """Adjacency-shaped perturbation block (entries ``dx_k`` at each edge)."""
    dx = check_perturbation(g, p)
    a1 = np.zeros((g.n, g.n))
    for (u, v), d in zip(g.edges, dx):
        a1[u - 1, v - 1] = a1[v - 1, u - 1] = d
    return a1


def build_d1(g: WeightedGraph, p) -> np.ndarray:
    return np.diag(build_a1(g, p).sum(axis=1))


def build_l1(g: WeightedGraph, p) -> np.ndarray:
    """Perturbation Laplacian ``sum_k dx_k g_k g_k^T``; row sums are exactly 0."""
    return _edge_laplacian(g, check_perturbation(g, p))


def _edge_laplacian(g, c):
    # Accumulate per edge so each row sum cancels exactly: +c and -c on the same row.
    lap = np.zeros((g.n, g.n))
    for (u, v), ck in zip(g.edges, c):
        i, j = u - 1, v - 1
        lap[i, i] += ck
        lap[j, j] += ck
        lap[i, j] -= ck
        lap[j, i] -= ck
    return lap


def edge_vector(g: WeightedGraph, k: int) -> np.ndarray:
    """``1_u - 1_v`` for edge k = (u, v), k counted from 1."""
    if not 1 <= k <= g.m:
        raise IndexError(f"edge index {k} out of range [1, {g.m}]")
    return g.incidence[:, k - 1].copy()


def _content_lines(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _parse_triple(tokens, lineno, what):
    if len(tokens) != 3:
        raise ParseError(f"expected 'u v {what}', got {' '.join(tokens)!r}", lineno)
    try:
        u, v = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise ParseError(f"vertex labels must be integers, got {tokens[:2]}", lineno) from None
    try:
        w = float(tokens[2])
    except ValueError:
        raise ParseError(f"{what} must be a decimal number, got {tokens[2]!r}", lineno) from None
    if not math.isfinite(w):
        raise ParseError(f"{what} must be finite, got {tokens[2]!r}", lineno)
    return u, v, w


def parse_graph(text) -> WeightedGraph:
    """Parse the edge-list format: a line with n, then lines ``u v w``."""
    lines = _content_lines(text)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("empty graph file") from None
    if len(tokens) != 1:
        raise ParseError(f"first line must hold the vertex count, got {' '.join(tokens)!r}", lineno)
    try:
        n = int(tokens[0])
    except ValueError:
        raise ParseError(f"vertex count must be an integer, got {tokens[0]!r}", lineno) from None
    if n < 1:
        raise ValidationError(f"line {lineno}: vertex count must be positive, got {n}")

    edges, weights, seen = [], [], {}
    for lineno, tokens in lines:
        u, v, w = _parse_triple(tokens, lineno, "w")
        if u == v:
            raise ValidationError(f"line {lineno}: self-loop at vertex {u}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValidationError(f"line {lineno}: vertex out of range [1, {n}] in ({u}, {v})")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValidationError(f"line {lineno}: duplicate edge {key} (first on line {seen[key]})")
        if w <= 0:
            raise ValidationError(f"line {lineno}: nonpositive weight {w!r}")
        seen[key] = lineno
        edges.append(key)
        weights.append(w)
    return WeightedGraph(n, tuple(edges), tuple(weights))


def parse_perturbation(text, g: WeightedGraph) -> Perturbation:
    """Parse lines ``u v dw``; edges not listed get ``dw = 0``."""
    dx = np.zeros(g.m)
    seen = set()
    for lineno, tokens in _content_lines(text):
        u, v, d = _parse_triple(tokens, lineno, "dw")
        key = (min(u, v), max(u, v))
        k = g.edge_index.get(key)
        if k is None:
            raise UnknownEdge(f"line {lineno}: ({u}, {v}) is not an edge of the graph")
        if k in seen:
            raise ValidationError(f"line {lineno}: edge {key} listed twice")
        seen.add(k)
        dx[k] = d
    return Perturbation(dx)


def format_graph(g: WeightedGraph) -> str:
    lines = [str(g.n)]
    lines += [f"{u} {v} {w!r}" for (u, v), w in zip(g.edges, g.weights)]
    return "\n".join(lines) + "\n"


def complete_graph(n, weights=None, order=None) -> WeightedGraph:
    """K_n, edges in lexicographic order unless ``order`` lists them."""
    edges = list(order) if order is not None else [(u, v) for u, v in combinations(range(1, n + 1), 2)]
    weights = [1.0] * len(edges) if weights is None else list(weights)
    return WeightedGraph.from_edges(n, [(u, v, w) for (u, v), w in zip(edges, weights)])


def path_graph(n, weights=None) -> WeightedGraph:
    weights = [1.0] * (n - 1) if weights is None else list(weights)
    return WeightedGraph.from_edges(n, [(k, k + 1, w) for k, w in zip(range(1, n), weights)])


def star_graph(leaves, weights=None) -> WeightedGraph:
    """Hub is vertex 1."""
    weights = [1.0] * leaves if weights is None else list(weights)
    return WeightedGraph.from_edges(leaves + 1, [(1, k + 2, w) for k, w in enumerate(weights)])


def random_connected_graph(rng, n, edge_prob=0.3, low=0.1, high=10.0) -> WeightedGraph:
    """Random spanning tree plus independent extra edges, uniform weights."""
    order = rng.permutation(n) + 1
    edges = set()
    for k in range(1, n):
        parent = order[rng.integers(k)]
        child = order[k]
        edges.add((int(min(parent, child)), int(max(parent, child))))
    for u, v in combinations(range(1, n + 1), 2):
        if (u, v) not in edges and rng.random() < edge_prob:
            edges.add((u, v))
    edges = sorted(edges)
    rng.shuffle(edges)
    weights = rng.uniform(low, high, size=len(edges))
    return WeightedGraph(n, tuple(edges), tuple(weights))
