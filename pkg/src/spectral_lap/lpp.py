"""Linear projection algebra and locality preserving projection (LPP).

LPP solves ``X L X^T u = lambda X D X^T u``; kernel LPP solves the same
problem in feature space, ``K L K theta = lambda K D K theta``. Data are used
exactly as given (no centering).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DisconnectedGraph, NonOrthonormal, NotPSD, TooManyDimensions
from .graph import as_data_matrix, as_weights
from .laplacian import count_components, unnormalized
from .linalg import DEFAULT_RIDGE, ZERO_TOL, EigenBasis, eig_gen_sym, eig_sym

DEGENERATE_VAR = 1e-12


@dataclass(frozen=True)
class ProjectionModel:
    U: np.ndarray
    generalized_eigenvalues: np.ndarray
    ridge_used: float

    def embed(self, X) -> np.ndarray:
        return project(self.U, X)


@dataclass(frozen=True)
class KernelProjectionModel:
    theta: np.ndarray
    training_kernel: np.ndarray
    generalized_eigenvalues: np.ndarray
    ridge_used: float


def project(U, X) -> np.ndarray:
    """``U^T X``, shape ``(p, n)``. ``U`` need not be orthonormal."""
    U = np.asarray(U, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if U.shape[0] != X.shape[0]:
        raise DimensionMismatch(f"U has {U.shape[0]} rows, X has dimension {X.shape[0]}")
    return U.T @ X


def reconstruct(U, X, tol: float = 1e-8) -> np.ndarray:
    """``U U^T X``; requires orthonormal columns."""
    U = np.asarray(U, dtype=float)
    gram = U.T @ U
    if np.max(np.abs(gram - np.eye(U.shape[1])), initial=0.0) > tol:
        raise NonOrthonormal("reconstruction needs U^T U = I")
    return U @ project(U, X)


def weighted_variance(y: np.ndarray, weights: np.ndarray) -> float:
    """Weighted spread ``sum_i w_i (y_i - ybar_w)^2`` of one embedding row."""
    mean = float(weights @ y) / float(weights.sum())
    return float(weights @ (y - mean) ** 2)


def ridge_noise_floor(A: np.ndarray, shift: float) -> float:
    """Rounding level of eigenvalues computed against a ridge-shifted ``B``.

    Reducing with a Cholesky factor of ``B + shift I`` amplifies the rounding
    error of ``A`` by up to ``1 / shift``; zero eigenvalues of rank-deficient
    problems then come out near ``dim * eps * |A|_2 / shift`` instead of 0.
    """
    if shift <= 0:
        return 0.0
    return A.shape[0] * np.finfo(float).eps * float(np.linalg.norm(A, 2)) / shift


def select_nondegenerate(basis: EigenBasis, embeddings: np.ndarray, degrees: np.ndarray,
                         p: int, tol: float = ZERO_TOL, floor: float = 0.0) -> np.ndarray:
    """Indices of the first ``p`` usable eigenpairs of a projected problem.

    A pair is skipped when its eigenvalue is numerically zero (below
    ``tol * max(1, max|lambda|)`` or the ridge ``floor``) *and* the embedding
    it induces (one row of ``embeddings``) has degree-weighted variance below
    1e-12. This removes the constant embedding and directions in the null
    space of the data, and keeps everything else.
    """
    lam = basis.eigenvalues
    scale = max(1.0, float(np.max(np.abs(lam)))) if lam.size else 1.0
    zero = max(tol * scale, floor)
    keep = []
    for j in range(len(lam)):
        if abs(lam[j]) < zero and weighted_variance(embeddings[j], degrees) < DEGENERATE_VAR:
            continue
        keep.append(j)
        if len(keep) == p:
            break
    if len(keep) < p:
        raise TooManyDimensions(f"only {len(keep)} non-degenerate directions available, "
                                f"{p} requested")
    return np.asarray(keep)


def fit(X, W, p: int, ridge: float = DEFAULT_RIDGE) -> ProjectionModel:
    """Fit LPP directions ``U`` (d x p) with ``U^T X D X^T U = I``."""
    X = as_data_matrix(X)
    Wm = as_weights(W)
    d, n = X.shape
    if Wm.shape[0] != n:
        raise DimensionMismatch(f"X has {n} samples but W is {Wm.shape[0]} x {Wm.shape[0]}")
    if not 1 <= p <= min(d, n - 1):
        raise TooManyDimensions(f"p must lie in [1, {min(d, n - 1)}], got {p}")
    if count_components(Wm) != 1:
        raise DisconnectedGraph("LPP needs a connected graph")
    lap = unnormalized(Wm)
    A = X @ lap.matrix @ X.T
    B = (X * lap.degrees[None, :]) @ X.T
    basis = eig_gen_sym(A, B, ridge=ridge)
    keep = select_nondegenerate(basis, basis.eigenvectors.T @ X, lap.degrees, p,
                                floor=ridge_noise_floor(A, basis.ridge))
    chosen = basis.select(keep)
    return ProjectionModel(chosen.eigenvectors, chosen.eigenvalues, basis.ridge)


def _check_psd(K: np.ndarray, tol: float = 1e-8):
    w = eig_sym(K).eigenvalues
    if w.size and w[0] < -tol * max(1.0, float(np.max(np.abs(w)))):
        raise NotPSD(f"kernel matrix has eigenvalue {w[0]:.3g} < 0")


def fit_kernel(K_x, W, p: int, ridge: float = DEFAULT_RIDGE) -> KernelProjectionModel:
    """Fit kernel LPP coefficients ``Theta`` (n x p) with ``Theta^T K D K Theta = I``."""
    K = np.asarray(K_x, dtype=float)
    Wm = as_weights(W)
    n = Wm.shape[0]
    if K.shape != (n, n):
        raise DimensionMismatch(f"kernel shape {K.shape} does not match {n} samples")
    if not 1 <= p <= n - 1:
        raise TooManyDimensions(f"p must lie in [1, {n - 1}], got {p}")
    _check_psd(K)
    if count_components(Wm) != 1:
        raise DisconnectedGraph("kernel LPP needs a connected graph")
    lap = unnormalized(Wm)
    A = K @ lap.matrix @ K
    B = (K * lap.degrees[None, :]) @ K
    basis = eig_gen_sym(A, B, ridge=ridge)
    keep = select_nondegenerate(basis, basis.eigenvectors.T @ K, lap.degrees, p,
                                floor=ridge_noise_floor(A, basis.ridge))
    chosen = basis.select(keep)
    return KernelProjectionModel(chosen.eigenvectors, K.copy(), chosen.eigenvalues, basis.ridge)


def embed_kernel(model: KernelProjectionModel, K_new=None) -> np.ndarray:
    """``Theta^T K``, shape ``(p, n)``; pass ``K_new`` (n x n_t) for new points."""
    K = model.training_kernel if K_new is None else np.asarray(K_new, dtype=float)
    return model.theta.T @ K
