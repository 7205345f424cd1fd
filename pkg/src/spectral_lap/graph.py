"""Neighborhood graphs and weighted adjacency matrices.

Data matrices follow the column convention: ``X`` has shape ``(d, n)`` with
one sample per column.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSigma, InvalidSpec, NonFinite, NonSymmetric

EPSILON = "epsilon"
KNN = "knn"
FULL = "full"

RBF = "rbf"
BINARY = "binary"

DEFAULT_SIGMA2 = 1.0


@dataclass(frozen=True)
class NeighborhoodSpec:
    """How points are connected: ``epsilon``, ``knn`` or ``full``.

    kNN edges are symmetrized by union.
    """

    mode: str = KNN
    epsilon: float | None = None
    k: int | None = None

    @classmethod
    def eps(cls, epsilon: float) -> "NeighborhoodSpec":
        return cls(EPSILON, epsilon=float(epsilon))

    @classmethod
    def knn(cls, k: int) -> "NeighborhoodSpec":
        return cls(KNN, k=int(k))

    @classmethod
    def full(cls) -> "NeighborhoodSpec":
        return cls(FULL)

    def validate(self, n: int) -> None:
        if self.mode == EPSILON:
            if self.epsilon is None or not np.isfinite(self.epsilon) or self.epsilon < 0:
                raise InvalidSpec(f"epsilon must be a nonnegative real, got {self.epsilon!r}")
        elif self.mode == KNN:
            if self.k is None or not 1 <= self.k <= n - 1:
                raise InvalidSpec(f"k must lie in [1, {n - 1}], got {self.k!r}")
        elif self.mode != FULL:
            raise InvalidSpec(f"unknown neighborhood mode {self.mode!r}")

    def to_dict(self) -> dict:
        return {"mode": self.mode, "epsilon": self.epsilon, "k": self.k}

    @classmethod
    def from_dict(cls, d: dict) -> "NeighborhoodSpec":
        return cls(d["mode"], epsilon=d.get("epsilon"), k=d.get("k"))


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric nonnegative adjacency with zero diagonal.

    ``spec`` and ``sigma2`` record how the graph was built so that
    out-of-sample kernels can reuse the same weight function.
    """

    weights: np.ndarray
    spec: NeighborhoodSpec = field(default_factory=NeighborhoodSpec.full)
    weight_kind: str = RBF
    sigma2: float | None = None

    @property
    def n(self) -> int:
        return self.weights.shape[0]


def as_data_matrix(X) -> np.ndarray:
    """Validate a ``(d, n)`` data matrix and return it as a float array."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise InvalidSpec(f"data matrix must be 2-D (d x n), got {X.ndim}-D")
    if X.shape[1] < 2:
        raise InvalidSpec("need at least two samples (columns)")
    if not np.all(np.isfinite(X)):
        raise NonFinite("data matrix contains NaN or Inf")
    return X


def as_weights(W) -> np.ndarray:
    """Return the adjacency array of a :class:`WeightedGraph` or raw matrix."""
    if isinstance(W, WeightedGraph):
        return W.weights
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise NonSymmetric(f"weight matrix must be square, got shape {W.shape}")
    if not np.all(np.isfinite(W)):
        raise NonFinite("weight matrix contains NaN or Inf")
    if np.any(W < 0):
        raise InvalidSpec("weights must be nonnegative")
    if np.max(np.abs(W - W.T), initial=0.0) > 1e-12 * max(1.0, float(np.max(W, initial=0.0))):
        raise NonSymmetric("weight matrix is not symmetric")
    return W


def squared_distances(X, Y=None) -> np.ndarray:
    """Exact pairwise squared Euclidean distances between columns.

    Accumulates one feature at a time so that every entry is summed in the
    same order; the self-distance matrix is exactly symmetric with zero
    diagonal.
    """
    X = np.asarray(X, dtype=float)
    Y = X if Y is None else np.asarray(Y, dtype=float)
    out = np.zeros((X.shape[1], Y.shape[1]))
    for a, b in zip(X, Y):
        diff = a[:, None] - b[None, :]
        out += diff * diff
    return out


def build_neighborhood(X, spec: NeighborhoodSpec) -> np.ndarray:
    """Boolean symmetric connectivity matrix with a false diagonal.

    kNN distance ties are broken by ascending sample index.
    """
    X = as_data_matrix(X)
    n = X.shape[1]
    spec.validate(n)
    d2 = squared_distances(X)
    if spec.mode == EPSILON:
        conn = d2 <= spec.epsilon
    elif spec.mode == FULL:
        conn = np.ones((n, n), dtype=bool)
    else:
        conn = np.zeros((n, n), dtype=bool)
        for i in range(n):
            row = d2[i].copy()
            row[i] = np.inf
            nearest = np.argsort(row, kind="stable")[: spec.k]
            conn[i, nearest] = True
        conn = conn | conn.T
    np.fill_diagonal(conn, False)
    return conn


def rbf_weights(X, conn, sigma2: float = DEFAULT_SIGMA2,
                spec: NeighborhoodSpec | None = None) -> WeightedGraph:
    """Heat-kernel weights ``exp(-|xi - xj|^2 / (2 sigma2))`` on connected pairs."""
    if not np.isfinite(sigma2) or sigma2 <= 0:
        raise InvalidSigma(f"sigma2 must be positive, got {sigma2!r}")
    X = as_data_matrix(X)
    conn = _check_conn(conn)
    if conn.shape[0] != X.shape[1]:
        raise InvalidSpec("connectivity size does not match sample count")
    W = np.where(conn, np.exp(-squared_distances(X) / (2.0 * sigma2)), 0.0)
    return WeightedGraph(W, spec or NeighborhoodSpec.full(), RBF, float(sigma2))


def binary_weights(conn, spec: NeighborhoodSpec | None = None,
                   sigma2: float | None = None) -> WeightedGraph:
    """0/1 weights: 1 iff the pair is connected.

    ``sigma2`` is only stored for later out-of-sample kernels.
    """
    conn = _check_conn(conn)
    return WeightedGraph(conn.astype(float), spec or NeighborhoodSpec.full(), BINARY,
                         None if sigma2 is None else float(sigma2))


def _check_conn(conn) -> np.ndarray:
    conn = np.asarray(conn, dtype=bool)
    if conn.ndim != 2 or conn.shape[0] != conn.shape[1]:
        raise InvalidSpec(f"connectivity must be square, got shape {conn.shape}")
    if not np.array_equal(conn, conn.T):
        raise InvalidSpec("connectivity must be symmetric")
    if np.any(np.diag(conn)):
        raise InvalidSpec("connectivity diagonal must be false")
    return conn


def build_graph(X, spec: NeighborhoodSpec, weight_kind: str = RBF,
                sigma2: float = DEFAULT_SIGMA2) -> WeightedGraph:
    """Neighborhood construction followed by RBF or binary weighting."""
    conn = build_neighborhood(X, spec)
    if weight_kind == RBF:
        return rbf_weights(X, conn, sigma2, spec)
    if weight_kind == BINARY:
        return binary_weights(conn, spec, sigma2)
    raise InvalidSpec(f"unknown weight kind {weight_kind!r}")
