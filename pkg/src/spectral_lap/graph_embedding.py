"""Graph embedding: one solver for direct, linearized and kernelized problems.

A problem is a pair ``(L, B)`` plus a form and an extremum direction:

* direct:      ``L y = lambda B y``                         -> ``Y`` (n x p)
* linearized:  ``X L X^T u = lambda X B X^T u``             -> ``U`` (d x p)
* kernelized:  ``K L K theta = lambda K B K theta``         -> ``Theta`` (n x p)

``B`` may also be the marker ``"identity"`` (plain orthonormality on the
solution vectors) or, for the kernelized form, ``"kernel"``
(``Theta^T K Theta = I``). :func:`config_to_problem` builds the ``(L, B)``
pair and direction for the classical special cases.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (BadDistanceMatrix, DimensionMismatch, DisconnectedGraph, LabelMismatch,
                     MissingParameter, RowSumViolation, TooManyDimensions)
from .graph import as_data_matrix, as_weights, squared_distances
from .laplacian import MAXIMIZE, MINIMIZE, count_components, unnormalized
from .linalg import (ASCENDING, DEFAULT_RIDGE, DESCENDING, EigenBasis, drop_trivial,
                     eig_gen_sym, eig_sym)
from .lpp import ridge_noise_floor, select_nondegenerate

DIRECT = "direct"
LINEARIZED = "linearized"
KERNELIZED = "kernelized"

IDENTITY = "identity"
KERNEL = "kernel"

# trivial-pair policies
NO_DROP = 0
DEGENERATE = "degenerate"

METHODS = ("laplacian_eigenmap_1", "laplacian_eigenmap_2", "lpp", "kernel_lpp", "pca",
           "kernel_pca", "fda", "kernel_fda", "mds_isomap", "lle")

ROW_SUM_TOL = 1e-8


@dataclass(frozen=True)
class GEProblem:
    """``trivial`` is a count of near-zero pairs to drop (direct form) or
    ``"degenerate"`` to skip zero-eigenvalue directions whose embedding is
    constant (projected forms)."""

    form: str
    L: np.ndarray
    B: object
    direction: str
    p: int
    X: np.ndarray | None = None
    K: np.ndarray | None = None
    trivial: int | str = NO_DROP
    ridge: float = DEFAULT_RIDGE
    degrees: np.ndarray | None = None


@dataclass(frozen=True)
class GESolution:
    """``vectors`` is Y, U or Theta depending on the form; ``embedding`` always
    has one row per sample."""

    form: str
    vectors: np.ndarray
    eigenvalues: np.ndarray
    embedding: np.ndarray
    ridge_used: float = 0.0


@dataclass(frozen=True)
class MethodConfig:
    method: str
    labels: np.ndarray | None = None
    distances: np.ndarray | None = None
    recon_weights: np.ndarray | None = None
    extra: dict = field(default_factory=dict)


def _solve_pair(A, B, direction: str, ridge: float) -> EigenBasis:
    order = ASCENDING if direction == MINIMIZE else DESCENDING
    if direction not in (MINIMIZE, MAXIMIZE):
        raise ValueError(f"direction must be minimize or maximize, got {direction!r}")
    if isinstance(B, str) and B == IDENTITY:
        return eig_sym(A, order)
    return eig_gen_sym(A, B, order, ridge=ridge)


def solve(problem: GEProblem) -> GESolution:
    """Return the ``p`` extreme eigenvectors of the problem's eigensystem."""
    pr = problem
    L = np.asarray(pr.L, dtype=float)
    n = L.shape[0]
    if pr.form == DIRECT:
        Bm = pr.B if isinstance(pr.B, str) else np.asarray(pr.B, dtype=float)
        if isinstance(Bm, str) and Bm != IDENTITY:
            raise ValueError("direct form accepts only the 'identity' marker")
        basis = _solve_pair(L, Bm, pr.direction, pr.ridge)
        if pr.trivial:
            basis = drop_trivial(basis, int(pr.trivial))
        if not 1 <= pr.p <= len(basis):
            raise TooManyDimensions(f"p must lie in [1, {len(basis)}], got {pr.p}")
        chosen = basis.head(pr.p)
        return GESolution(DIRECT, chosen.eigenvectors, chosen.eigenvalues,
                          chosen.eigenvectors, basis.ridge)

    if pr.form == LINEARIZED:
        if pr.X is None:
            raise MissingParameter("linearized form needs X")
        F = np.asarray(pr.X, dtype=float)  # d x n
    elif pr.form == KERNELIZED:
        if pr.K is None:
            raise MissingParameter("kernelized form needs K")
        F = np.asarray(pr.K, dtype=float)  # n x n, symmetric
    else:
        raise ValueError(f"unknown form {pr.form!r}")
    if F.shape[1] != n:
        raise DimensionMismatch(f"data has {F.shape[1]} samples, L is {n} x {n}")

    A = F @ L @ F.T
    if isinstance(pr.B, str):
        if pr.B == IDENTITY:
            Bm = IDENTITY
        elif pr.B == KERNEL and pr.form == KERNELIZED:
            Bm = F
        else:
            raise ValueError(f"marker {pr.B!r} not valid for {pr.form} form")
    else:
        Bm = F @ np.asarray(pr.B, dtype=float) @ F.T
    basis = _solve_pair(A, Bm, pr.direction, pr.ridge)
    rows = basis.eigenvectors.T @ F  # one embedding row per eigenvector
    if pr.trivial == DEGENERATE:
        weights = pr.degrees if pr.degrees is not None else np.ones(n)
        keep = select_nondegenerate(basis, rows, weights, pr.p,
                                    floor=ridge_noise_floor(A, basis.ridge))
    else:
        if not 1 <= pr.p <= len(basis):
            raise TooManyDimensions(f"p must lie in [1, {len(basis)}], got {pr.p}")
        keep = np.arange(pr.p)
    chosen = basis.select(keep)
    return GESolution(pr.form, chosen.eigenvectors, chosen.eigenvalues,
                      rows[keep].T.copy(), basis.ridge)


def mds_kernel(squared_distances_matrix) -> np.ndarray:
    """Double-centered kernel ``-1/2 H Dsq H`` with ``H = I - 11^T / n``."""
    Dsq = np.asarray(squared_distances_matrix, dtype=float)
    if Dsq.ndim != 2 or Dsq.shape[0] != Dsq.shape[1]:
        raise BadDistanceMatrix(f"distance matrix must be square, got {Dsq.shape}")
    if not np.all(np.isfinite(Dsq)) or np.any(Dsq < 0):
        raise BadDistanceMatrix("distances must be finite and nonnegative")
    if np.any(np.diag(Dsq) != 0):
        raise BadDistanceMatrix("distance matrix must have a zero diagonal")
    scale = max(1.0, float(Dsq.max(initial=0.0)))
    if np.max(np.abs(Dsq - Dsq.T), initial=0.0) > 1e-10 * scale:
        raise BadDistanceMatrix("distance matrix must be symmetric")
    n = Dsq.shape[0]
    H = np.eye(n) - np.full((n, n), 1.0 / n)
    K = -0.5 * H @ Dsq @ H
    return (K + K.T) * 0.5


def lle_m_matrix(W_recon) -> np.ndarray:
    """``M = (I - W)^T (I - W)`` for unit-row-sum reconstruction weights.

    This is the quadratic form of the reconstruction error
    ``sum_i |y_i - sum_j W_ij y_j|^2``; its rows sum to zero whenever the
    rows of ``W`` sum to one.
    """
    W = np.asarray(W_recon, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise RowSumViolation(f"reconstruction weights must be square, got {W.shape}")
    sums = W.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)
    if bad.size:
        raise RowSumViolation(f"row {int(bad[0])} of the reconstruction weights sums to "
                              f"{sums[bad[0]]!r}, expected 1")
    R = np.eye(W.shape[0]) - W
    M = R.T @ R
    return (M + M.T) * 0.5


def fda_constraint(labels) -> np.ndarray:
    """``I - sum_j e_j e_j^T / n_j`` for class indicator vectors ``e_j``."""
    labels = np.asarray(labels)
    n = labels.size
    B = np.eye(n)
    for cls in np.unique(labels):
        e = (labels == cls).astype(float)
        B -= np.outer(e, e) / e.sum()
    return B


def _graph_parts(W):
    Wm = as_weights(W)
    if count_components(Wm) != 1:
        raise DisconnectedGraph("graph Laplacian problems need a connected graph")
    return unnormalized(Wm)


def config_to_problem(config: MethodConfig, p: int, X=None, W=None, K_x=None,
                      ridge: float = DEFAULT_RIDGE) -> GEProblem:
    """Translate a classical method into its graph-embedding ``(L, B)`` problem.

    ``X`` is ``(d, n)`` for linearized methods (PCA and FDA expect it already
    centered), ``W`` the adjacency for graph-based methods and ``K_x`` the
    training kernel for kernelized methods.
    """
    m = config.method

    def need(value, name):
        if value is None:
            raise MissingParameter(f"method {m!r} requires {name}")
        return value

    if m in ("laplacian_eigenmap_1", "laplacian_eigenmap_2"):
        lap = _graph_parts(need(W, "W"))
        B = IDENTITY if m.endswith("1") else np.diag(lap.degrees)
        return GEProblem(DIRECT, lap.matrix, B, MINIMIZE, p, trivial=1, ridge=ridge)
    if m == "lpp":
        lap = _graph_parts(need(W, "W"))
        return GEProblem(LINEARIZED, lap.matrix, np.diag(lap.degrees), MINIMIZE, p,
                         X=as_data_matrix(need(X, "X")), trivial=DEGENERATE, ridge=ridge,
                         degrees=lap.degrees)
    if m == "kernel_lpp":
        lap = _graph_parts(need(W, "W"))
        return GEProblem(KERNELIZED, lap.matrix, np.diag(lap.degrees), MINIMIZE, p,
                         K=np.asarray(need(K_x, "K_x"), float), trivial=DEGENERATE,
                         ridge=ridge, degrees=lap.degrees)
    if m == "pca":
        X = as_data_matrix(need(X, "X"))
        return GEProblem(LINEARIZED, np.eye(X.shape[1]), IDENTITY, MAXIMIZE, p, X=X, ridge=ridge)
    if m == "kernel_pca":
        K = np.asarray(need(K_x, "K_x"), float)
        return GEProblem(KERNELIZED, np.eye(K.shape[0]), KERNEL, MAXIMIZE, p, K=K, ridge=ridge)
    if m in ("fda", "kernel_fda"):
        labels = np.asarray(need(config.labels, "labels"))
        data = as_data_matrix(need(X, "X")) if m == "fda" else np.asarray(need(K_x, "K_x"), float)
        n = data.shape[1]
        if labels.size != n:
            raise LabelMismatch(f"{labels.size} labels for {n} samples")
        n_classes = np.unique(labels).size
        if p > n_classes - 1:
            warnings.warn(f"FDA has at most {n_classes - 1} informative directions; "
                          f"{p} requested", stacklevel=2)
        B = fda_constraint(labels)
        if m == "fda":
            return GEProblem(LINEARIZED, np.eye(n), B, MAXIMIZE, p, X=data, ridge=ridge)
        return GEProblem(KERNELIZED, np.eye(n), B, MAXIMIZE, p, K=data, ridge=ridge)
    if m == "mds_isomap":
        if config.distances is not None:
            Dist = np.asarray(config.distances, dtype=float)
            Dsq = Dist * Dist
        else:
            Dsq = squared_distances(as_data_matrix(need(X, "X or distances")))
        return GEProblem(DIRECT, mds_kernel(Dsq), IDENTITY, MAXIMIZE, p, ridge=ridge)
    if m == "lle":
        M = lle_m_matrix(need(config.recon_weights, "recon_weights"))
        n = M.shape[0]
        return GEProblem(DIRECT, M, np.eye(n) / n, MINIMIZE, p, trivial=1, ridge=ridge)
    raise MissingParameter(f"unknown method {m!r}; expected one of {', '.join(METHODS)}")
