"""Dense symmetric and generalized-symmetric eigensolvers.

All solvers return an :class:`EigenBasis` with a fixed ordering, tie-break and
sign convention so that results are reproducible bit-for-bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NonFinite, NonSymmetric, NotEnoughTrivialPairs, NotPositiveDefinite

ASCENDING = "ascending"
DESCENDING = "descending"

DEFAULT_RIDGE = 1e-10
ZERO_TOL = 1e-8
SYMMETRY_TOL = 1e-10
# entries whose magnitude is within this fraction of the column max count as
# tied for the sign convention
_SIGN_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class EigenBasis:
    """Sorted eigenpairs of a standard or generalized symmetric problem.

    Attributes
    ----------
    eigenvalues : ndarray, shape (m,)
    eigenvectors : ndarray, shape (n, m)
        Column ``j`` pairs with ``eigenvalues[j]``.
    order : {"ascending", "descending"}
    problem : {"standard", "generalized"}
    ridge : float
        Absolute ridge added to the right-hand matrix (0 when none was needed).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    order: str = ASCENDING
    problem: str = "standard"
    ridge: float = 0.0

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def select(self, indices) -> "EigenBasis":
        idx = np.asarray(indices, dtype=int)
        return EigenBasis(self.eigenvalues[idx].copy(), self.eigenvectors[:, idx].copy(),
                          self.order, self.problem, self.ridge)

    def head(self, k: int) -> "EigenBasis":
        return self.select(np.arange(k))


def _check_finite(*mats):
    for m in mats:
        if not np.all(np.isfinite(m)):
            raise NonFinite("matrix contains NaN or Inf")


def _check_symmetric(A: np.ndarray, name: str = "A", tol: float = SYMMETRY_TOL):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NonSymmetric(f"{name} must be square, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if np.max(np.abs(A - A.T), initial=0.0) > tol * scale:
        raise NonSymmetric(f"{name} is not symmetric within {tol:g} relative")


def _symmetrize(A: np.ndarray) -> np.ndarray:
    return (A + A.T) * 0.5


def _sort_order(values: np.ndarray, order: str) -> np.ndarray:
    if order == ASCENDING:
        return np.argsort(values, kind="stable")
    if order == DESCENDING:
        return np.argsort(-values, kind="stable")
    raise ValueError(f"order must be 'ascending' or 'descending', got {order!r}")


def fix_signs(V: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry is nonnegative.

    Near-ties (within a relative 1e-12 of the column maximum) go to the lowest
    index, which keeps e.g. ``[1, -1] / sqrt(2)`` stable under roundoff.
    """
    V = np.array(V, dtype=float, copy=True)
    if V.size == 0:
        return V
    mag = np.abs(V)
    colmax = mag.max(axis=0)
    for j in range(V.shape[1]):
        if colmax[j] == 0.0:
            continue
        lead = int(np.flatnonzero(mag[:, j] >= colmax[j] * (1.0 - _SIGN_TIE_RTOL))[0])
        if V[lead, j] < 0:
            V[:, j] = -V[:, j]
    return V


def eig_sym(A, order: str = ASCENDING) -> EigenBasis:
    """Full eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    A : array_like, shape (n, n)
        Symmetric within 1e-10 relative; it is symmetrized before solving.
    order : {"ascending", "descending"}

    Returns
    -------
    EigenBasis
        Unit-norm eigenvectors, sorted per ``order`` with ties broken by the
        solver's original position.
    """
    A = np.asarray(A, dtype=float)
    _check_finite(A)
    _check_symmetric(A)
    w, V = scipy.linalg.eigh(_symmetrize(A), driver="evd")
    idx = _sort_order(w, order)
    w, V = w[idx], V[:, idx]
    V = V / np.linalg.norm(V, axis=0)
    return EigenBasis(w, fix_signs(V), order, "standard", 0.0)


def _cholesky_with_ridge(B: np.ndarray, ridge: float):
    n = B.shape[0]
    shift = ridge * (np.trace(B) / n) if n else 0.0
    try:
        C = scipy.linalg.cholesky(B, lower=True)
        pivots = np.diag(C) ** 2
        if n and ridge > 0 and pivots.min() < 1e-12 * np.trace(B) / n:
            raise np.linalg.LinAlgError("small pivot")
        return C, 0.0
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        if ridge <= 0 or shift <= 0:
            raise NotPositiveDefinite("right-hand matrix is not positive definite") from None
    try:
        C = scipy.linalg.cholesky(B + shift * np.eye(n), lower=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        raise NotPositiveDefinite(
            f"right-hand matrix not positive definite even after ridge {shift:g}") from None
    return C, float(shift)


def eig_gen_sym(A, B, order: str = ASCENDING, ridge: float = DEFAULT_RIDGE) -> EigenBasis:
    """Solve ``A v = lambda B v`` by Cholesky reduction.

    ``B = C C^T`` is factorized, the standard problem ``C^-1 A C^-T`` is solved
    with :func:`eig_sym`, and eigenvectors are mapped back with ``C^-T`` and
    scaled to unit B-norm. If the factorization fails, or its smallest pivot is
    below ``1e-12 * trace(B)/n``, ``ridge * trace(B)/n`` is added to the
    diagonal of ``B`` first; the amount used is recorded on the result.
    Pass ``ridge=0`` to forbid regularization.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    _check_finite(A, B)
    _check_symmetric(A, "A")
    _check_symmetric(B, "B")
    if A.shape != B.shape:
        raise NonSymmetric(f"A and B shapes differ: {A.shape} vs {B.shape}")
    C, shift = _cholesky_with_ridge(_symmetrize(B), ridge)
    Br = _symmetrize(B) + shift * np.eye(B.shape[0]) if shift else _symmetrize(B)
    tmp = scipy.linalg.solve_triangular(C, _symmetrize(A), lower=True)
    Ahat = scipy.linalg.solve_triangular(C, tmp.T, lower=True)
    inner = eig_sym(_symmetrize(Ahat), order)
    V = scipy.linalg.solve_triangular(C, inner.eigenvectors, lower=True, trans="T")
    bnorm = np.sqrt(np.einsum("ij,ij->j", V, Br @ V))
    V = V / bnorm
    return EigenBasis(inner.eigenvalues, fix_signs(V), order, "generalized", shift)


def near_zero_mask(values: np.ndarray, tol: float = ZERO_TOL) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    return np.abs(values) < tol * scale


def drop_trivial(basis: EigenBasis, count: int, tol: float = ZERO_TOL) -> EigenBasis:
    """Remove the ``count`` smallest-magnitude near-zero eigenpairs."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count == 0:
        return basis
    mask = near_zero_mask(basis.eigenvalues, tol)
    if mask.sum() < count:
        raise NotEnoughTrivialPairs(
            f"requested {count} trivial pairs, only {int(mask.sum())} eigenvalues are near zero")
    candidates = np.flatnonzero(mask)
    by_mag = candidates[np.argsort(np.abs(basis.eigenvalues[candidates]), kind="stable")]
    drop = set(by_mag[:count].tolist())
    keep = [i for i in range(len(basis)) if i not in drop]
    return basis.select(keep)
