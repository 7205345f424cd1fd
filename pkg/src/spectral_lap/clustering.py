"""Ratio-cut spectral clustering.

Two clusters are split by the sign of the Fiedler vector; more clusters run
k-means on the rows of the spectral embedding.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DegenerateVector, DisconnectedGraph, EmptySide, TooManyClusters
from .graph import DEFAULT_SIGMA2, RBF, NeighborhoodSpec, as_weights, build_graph
from .laplacian import count_components, unnormalized
from .linalg import drop_trivial, eig_gen_sym, eig_sym

PLAIN = "plain"
DEGREE_CONSTRAINED = "degree_constrained"

SIGN_ZERO_TOL = 1e-12
KMEANS_TOL = 1e-8
KMEANS_MAX_ITER = 300


@dataclass(frozen=True)
class ClusterAssignment:
    labels: np.ndarray
    c: int
    centroids: np.ndarray | None = None
    inertia: float | None = None


@dataclass(frozen=True)
class SpectralEmbedding:
    """Rows are embedded points; ``eigenvalues`` are the retained ones."""

    coordinates: np.ndarray
    variant: str
    eigenvalues: np.ndarray


def _split_sides(n: int, subset) -> tuple[np.ndarray, np.ndarray]:
    mask = np.zeros(n, dtype=bool)
    idx = np.asarray(list(subset), dtype=int)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise EmptySide(f"subset indices must lie in [0, {n})")
    mask[idx] = True
    if not mask.any() or mask.all():
        raise EmptySide("both sides of the cut must be nonempty")
    return np.flatnonzero(mask), np.flatnonzero(~mask)


def cut(W, subset) -> float:
    """Total weight crossing between ``subset`` and its complement."""
    W = as_weights(W)
    a, b = _split_sides(W.shape[0], subset)
    return float(W[np.ix_(a, b)].sum())


def ratio_cut(W, subset) -> float:
    """``cut / |A| + cut / |A'|``."""
    W = as_weights(W)
    a, b = _split_sides(W.shape[0], subset)
    value = float(W[np.ix_(a, b)].sum())
    return value / a.size + value / b.size


def spectral_embed(W, c: int, variant: str = PLAIN) -> SpectralEmbedding:
    """The ``c`` smallest nontrivial eigenvectors of ``L`` (or of ``(L, D)``).

    ``plain`` solves ``L f = lambda f`` with ``F^T F = I``;
    ``degree_constrained`` solves ``L f = lambda D f`` with ``F^T D F = I``.
    """
    W = as_weights(W)
    n = W.shape[0]
    if not 1 <= c <= n - 1:
        raise TooManyClusters(f"c must lie in [1, {n - 1}], got {c}")
    components = count_components(W)
    if components != 1:
        raise DisconnectedGraph(
            f"graph has {components} connected components; cluster them separately")
    lap = unnormalized(W)
    if variant == PLAIN:
        basis = eig_sym(lap.matrix)
    elif variant == DEGREE_CONSTRAINED:
        basis = eig_gen_sym(lap.matrix, np.diag(lap.degrees))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    basis = drop_trivial(basis, 1).head(c)
    return SpectralEmbedding(basis.eigenvectors, variant, basis.eigenvalues)


def two_way_split(f) -> ClusterAssignment:
    """Label 0 where ``f_i > 0``, label 1 where ``f_i < 0``.

    Entries with ``|f_i| < 1e-12`` go to the positive side.
    """
    f = np.asarray(f, dtype=float).ravel()
    positive = (f > 0) | (np.abs(f) < SIGN_ZERO_TOL)
    if positive.all() or not positive.any():
        raise DegenerateVector("all entries have the same sign; no split exists")
    return ClusterAssignment(np.where(positive, 0, 1), 2)


def _kmeans_pp_init(P: np.ndarray, c: int, rng: np.random.Generator) -> np.ndarray:
    n = P.shape[0]
    chosen = [int(rng.integers(n))]
    closest = np.sum((P - P[chosen[0]]) ** 2, axis=1)
    for _ in range(1, c):
        total = closest.sum()
        if total > 0:
            r = rng.random() * total
            nxt = int(np.searchsorted(np.cumsum(closest), r, side="right"))
            nxt = min(nxt, n - 1)
            # guard against picking a zero-probability point through roundoff
            if closest[nxt] == 0:
                nxt = int(np.flatnonzero(closest > 0)[-1])
        else:
            free = np.setdiff1d(np.arange(n), chosen)
            nxt = int(free[rng.integers(free.size)])
        chosen.append(nxt)
        closest = np.minimum(closest, np.sum((P - P[nxt]) ** 2, axis=1))
    return P[chosen].copy()


def _assign(P: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = np.zeros((P.shape[0], centers.shape[0]))
    for j in range(P.shape[1]):
        diff = P[:, j][:, None] - centers[:, j][None, :]
        d2 += diff * diff
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(P.shape[0]), labels]


def kmeans(points, c: int, seed: int = 0, tol: float = KMEANS_TOL,
           max_iter: int = KMEANS_MAX_ITER) -> ClusterAssignment:
    """Lloyd's algorithm with k-means++ seeding.

    Stops when no centroid moves more than ``tol`` or after ``max_iter``
    iterations. An emptied cluster is re-seeded at the point farthest from
    its current centroid.
    """
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P[:, None]
    n = P.shape[0]
    if not 1 <= c <= n:
        raise TooManyClusters(f"c must lie in [1, {n}], got {c}")
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_init(P, c, rng)
    labels, dist = _assign(P, centers)
    for _ in range(max_iter):
        new = centers.copy()
        for j in range(c):
            members = labels == j
            if members.any():
                new[j] = P[members].mean(axis=0)
            else:
                far = int(np.argmax(dist))
                new[j] = P[far]
                dist[far] = 0.0
        shift = float(np.max(np.sqrt(np.sum((new - centers) ** 2, axis=1))))
        centers = new
        labels, dist = _assign(P, centers)
        if shift < tol:
            break
    return ClusterAssignment(labels, c, centers, float(dist.sum()))


def spectral_cluster(W, c: int, variant: str = PLAIN, seed: int = 0,
                     sign_split: bool | None = None, dims: int | None = None
                     ) -> ClusterAssignment:
    """Embed with :func:`spectral_embed`, then cluster the rows.

    For ``c == 2`` the sign rule on the Fiedler vector is used unless
    ``sign_split=False``; otherwise k-means runs on the rows of a
    ``dims``-dimensional embedding (default ``c``). With ``c`` well separated
    groups only ``c - 1`` nontrivial eigenvectors are informative, so
    ``dims=c - 1`` is often the better choice.
    """
    if sign_split is None:
        sign_split = c == 2
    if sign_split:
        if c != 2:
            raise TooManyClusters("the sign rule only produces two clusters")
        emb = spectral_embed(W, 1, variant)
        return two_way_split(emb.coordinates[:, 0])
    emb = spectral_embed(W, c if dims is None else dims, variant)
    return kmeans(emb.coordinates, c, seed)


def cluster_points(X, c: int, spec: NeighborhoodSpec, weight_kind: str = RBF,
                   sigma2: float = DEFAULT_SIGMA2, variant: str = PLAIN, seed: int = 0,
                   sign_split: bool | None = None, dims: int | None = None
                   ) -> ClusterAssignment:
    """Build the neighborhood graph of ``X`` (d x n) and run :func:`spectral_cluster`."""
    graph = build_graph(X, spec, weight_kind, sigma2)
    return spectral_cluster(graph, c, variant, seed, sign_split, dims)


def matched_accuracy(labels, truth) -> float:
    """Fraction of agreeing labels under the best one-to-one relabeling."""
    labels = np.asarray(labels)
    truth = np.asarray(truth)
    if labels.shape != truth.shape:
        raise ValueError(f"label arrays differ in shape: {labels.shape} vs {truth.shape}")
    a = np.unique(labels, return_inverse=True)[1]
    b = np.unique(truth, return_inverse=True)[1]
    table = np.zeros((a.max() + 1, b.max() + 1))
    np.add.at(table, (a, b), 1.0)
    rows, cols = linear_sum_assignment(-table)
    return float(table[rows, cols].sum() / labels.size)
