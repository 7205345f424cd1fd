"""Laplacian eigenmap with eigenfunction-based out-of-sample extension.

The training embedding solves either ``L y = lambda y`` (approach 1, plain) or
``L y = lambda D y`` (approach 2, degree constrained). New points are embedded
in the spectral coordinates of the symmetric-normalized kernel
``W(i, j) / sqrt(d_i d_j)``; the top eigenpair of that kernel (eigenvalue 1,
eigenvector proportional to ``sqrt(d)``) mirrors the dropped constant vector
of the Laplacian and is skipped as well.

The out-of-sample kernel is always dense and always RBF: a graph trained
with binary weights falls back to ``exp(-|x - xi|^2 / (2 sigma2))`` using the
stored ``sigma2``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (DimensionMismatch, DisconnectedGraph, NearZeroEigenvalue,
                     TooManyDimensions, ZeroExpectation)
from .graph import (BINARY, DEFAULT_SIGMA2, NeighborhoodSpec, WeightedGraph, as_data_matrix,
                    as_weights, squared_distances)
from .laplacian import count_components, symmetric_normalized_kernel, unnormalized
from .linalg import DESCENDING, EigenBasis, drop_trivial, eig_gen_sym, eig_sym

PLAIN = "plain"
DEGREE_CONSTRAINED = "degree_constrained"
APPROACHES = {1: PLAIN, 2: DEGREE_CONSTRAINED, PLAIN: PLAIN, DEGREE_CONSTRAINED: DEGREE_CONSTRAINED}

DELTA_MIN = 1e-12


@dataclass(frozen=True)
class KernelParams:
    weight_kind: str
    sigma2: float
    spec: NeighborhoodSpec


@dataclass(frozen=True)
class EmbeddingModel:
    """Everything needed to reproduce a fitted eigenmap and extend it.

    ``embedding`` is ``(n, p)``; ``oos_vectors`` / ``oos_eigenvalues`` are the
    unit eigenvectors ``v_k`` and eigenvalues ``delta_k`` of the
    symmetric-normalized kernel matching the ``p`` embedding dimensions.
    """

    training_points: np.ndarray
    embedding: np.ndarray
    basis: EigenBasis
    oos_vectors: np.ndarray
    oos_eigenvalues: np.ndarray
    train_degrees: np.ndarray
    approach: str
    kernel: KernelParams

    @property
    def n(self) -> int:
        return self.embedding.shape[0]

    @property
    def p(self) -> int:
        return self.embedding.shape[1]

    def training_oos_embedding(self) -> np.ndarray:
        """``sqrt(delta_k) v_ki``: what :func:`transform` targets on training points."""
        return self.oos_vectors * np.sqrt(self.oos_eigenvalues)[None, :]


def fit(W, X, p: int, approach=DEGREE_CONSTRAINED, sigma2: float | None = None,
        spec: NeighborhoodSpec | None = None) -> EmbeddingModel:
    """Fit a ``p``-dimensional Laplacian eigenmap.

    Parameters
    ----------
    W : WeightedGraph or array_like, shape (n, n)
        Training adjacency. When a :class:`WeightedGraph` is given its weight
        kind, ``sigma2`` and neighborhood are stored for out-of-sample use.
    X : array_like, shape (d, n)
        Training points, one per column.
    p : int
        Embedding dimension, ``1 <= p <= n - 1``.
    approach : {1, 2, "plain", "degree_constrained"}
        1 / plain constrains ``Y^T Y = I``; 2 / degree_constrained constrains
        ``Y^T D Y = I``.
    """
    approach = APPROACHES.get(approach)
    if approach is None:
        raise ValueError("approach must be 1, 2, 'plain' or 'degree_constrained'")
    if isinstance(W, WeightedGraph):
        kparams = KernelParams(W.weight_kind, W.sigma2 or sigma2 or DEFAULT_SIGMA2, W.spec)
    else:
        kparams = KernelParams("rbf", sigma2 or DEFAULT_SIGMA2, spec or NeighborhoodSpec.full())
    Wm = as_weights(W)
    X = as_data_matrix(X)
    n = Wm.shape[0]
    if X.shape[1] != n:
        raise DimensionMismatch(f"X has {X.shape[1]} samples but W is {n} x {n}")
    if not 1 <= p <= n - 1:
        raise TooManyDimensions(f"p must lie in [1, {n - 1}], got {p}")
    if count_components(Wm) != 1:
        raise DisconnectedGraph("Laplacian eigenmap needs a connected graph")

    lap = unnormalized(Wm)
    if approach == PLAIN:
        basis = eig_sym(lap.matrix)
    else:
        basis = eig_gen_sym(lap.matrix, np.diag(lap.degrees))
    basis = drop_trivial(basis, 1).head(p)

    sym = eig_sym(symmetric_normalized_kernel(Wm).matrix, DESCENDING)
    kept = sym.select(np.arange(1, p + 1))
    return EmbeddingModel(
        training_points=X.copy(),
        embedding=basis.eigenvectors.copy(),
        basis=basis,
        oos_vectors=kept.eigenvectors,
        oos_eigenvalues=kept.eigenvalues,
        train_degrees=lap.degrees.copy(),
        approach=approach,
        kernel=kparams,
    )


def raw_kernel(model: EmbeddingModel, X_t) -> np.ndarray:
    """Dense RBF kernel between training points (rows) and test points (columns)."""
    X_t = np.asarray(X_t, dtype=float)
    if X_t.ndim == 1:
        X_t = X_t[:, None]
    if X_t.ndim != 2 or not np.all(np.isfinite(X_t)):
        raise DimensionMismatch("test points must be a finite (d, n_t) array")
    d = model.training_points.shape[0]
    if X_t.shape[0] != d:
        raise DimensionMismatch(f"test points have dimension {X_t.shape[0]}, training has {d}")
    if model.kernel.weight_kind == BINARY:
        warnings.warn("binary training weights: the out-of-sample kernel falls back to "
                      f"RBF with sigma2={model.kernel.sigma2}", stacklevel=3)
    return np.exp(-squared_distances(model.training_points, X_t) / (2.0 * model.kernel.sigma2))


def oos_kernel(model: EmbeddingModel, X_t) -> np.ndarray:
    """Normalized train x test kernel, shape ``(n, n_t)``.

    Each raw value ``k(xi, x)`` is divided by ``n`` and by the square root of
    the mean kernel value of training point ``xi`` over the test batch times
    the mean kernel value of test point ``x`` over the training set.
    """
    K = raw_kernel(model, X_t)
    n = K.shape[0]
    row_mean_train = K.mean(axis=1)  # over test points, one per training point
    col_mean_test = K.mean(axis=0)  # over training points, one per test point
    empty = np.flatnonzero(col_mean_test <= 0)
    if empty.size:
        raise ZeroExpectation(f"test point {int(empty[0])} has zero similarity to all "
                              "training points")
    denom = np.sqrt(np.outer(row_mean_train, col_mean_test))
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(denom > 0, K / denom, 0.0) / n
    return out


def transform(model: EmbeddingModel, X_t) -> np.ndarray:
    """Embed test points: ``y_k(x) = delta_k^-1/2 sum_i v_ki k_norm(xi, x)``.

    Returns an ``(n_t, p)`` array in the out-of-sample spectral coordinates
    (compare with :meth:`EmbeddingModel.training_oos_embedding`).
    """
    delta = model.oos_eigenvalues
    small = np.flatnonzero(delta <= DELTA_MIN)
    if small.size:
        raise NearZeroEigenvalue(f"kernel eigenvalue {delta[small[0]]:.3g} of dimension "
                                 f"{int(small[0]) + 1} is too small to divide by")
    Kn = oos_kernel(model, X_t)
    return (Kn.T @ model.oos_vectors) / np.sqrt(delta)[None, :]
