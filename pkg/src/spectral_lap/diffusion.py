"""Diffusion maps: random-walk operator, diffusion embedding and distances.

The transition matrix ``M = D_a^-1 L_a`` with ``L_a = D^-a W D^-a`` is not
symmetric, so its spectrum is taken from the conjugate
``S = D_a^-1/2 L_a D_a^-1/2``. Right eigenvectors are scaled to be
orthonormal under the stationary distribution ``pi``; with that scaling the
leading eigenvector is exactly the constant 1 and the diffusion distance

    sqrt(sum_l (M^t[i, l] - M^t[j, l])^2 / pi(l))

equals ``sqrt(sum_l lambda_l^(2t) (psi_l(i) - psi_l(j))^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DisconnectedGraph, IndexOutOfRange, TooManyDimensions
from .graph import as_weights
from .laplacian import alpha_normalized, count_components, degree_vector
from .linalg import DESCENDING, eig_sym

PROBABILITY = "probability"
SPECTRAL = "spectral"
DEFAULT_ALPHA = 0.5


@dataclass(frozen=True)
class DiffusionModel:
    """Transition operator and its spectrum.

    ``right_eigenvectors[:, l]`` is ``psi_l``; ``left_eigenvectors[:, l]`` is
    ``phi_l = pi * psi_l`` so that ``M = sum_l lambda_l psi_l phi_l^T``.
    """

    transition: np.ndarray
    alpha: float
    right_eigenvectors: np.ndarray
    left_eigenvectors: np.ndarray
    eigenvalues: np.ndarray
    stationary: np.ndarray
    drop_stationary: bool = True

    @property
    def n(self) -> int:
        return self.transition.shape[0]


def diffusion_operator(W, alpha: float = DEFAULT_ALPHA, drop_stationary: bool = True
                       ) -> DiffusionModel:
    """Build the random-walk operator of ``W`` and its full spectrum."""
    Wm = as_weights(W)
    degree_vector(Wm)  # raises IsolatedVertex
    if count_components(Wm) != 1:
        raise DisconnectedGraph("diffusion maps need a connected graph")
    La = alpha_normalized(Wm, alpha).matrix
    da = La.sum(axis=1)
    M = La / da[:, None]
    vol = float(da.sum())
    pi = da / vol
    s = 1.0 / np.sqrt(da)
    S = La * s[:, None] * s[None, :]
    basis = eig_sym(S, DESCENDING)
    psi = basis.eigenvectors * (np.sqrt(vol) * s)[:, None]
    phi = basis.eigenvectors * (np.sqrt(da) / np.sqrt(vol))[:, None]
    return DiffusionModel(M, float(alpha), psi, phi, basis.eigenvalues, pi, drop_stationary)


def transition_probabilities(model: DiffusionModel, t: int) -> np.ndarray:
    """``M^t`` by repeated squaring; time ``t >= 1``."""
    t = _check_time(t, minimum=1)
    return np.linalg.matrix_power(model.transition, t)


def _check_time(t, minimum: int = 0) -> int:
    if int(t) != t or t < minimum:
        raise ValueError(f"time must be an integer >= {minimum}, got {t!r}")
    return int(t)


def _columns(model: DiffusionModel, p: int | None) -> np.ndarray:
    start = 1 if model.drop_stationary else 0
    available = len(model.eigenvalues) - start
    if p is None:
        p = available
    if not 1 <= p <= available:
        raise TooManyDimensions(f"p must lie in [1, {available}], got {p}")
    return np.arange(start, start + p)


def diffusion_embed(model: DiffusionModel, t: int = 1, p: int | None = None) -> np.ndarray:
    """Rows ``[lambda_k^t psi_k(i)]`` over the leading ``p`` eigenpairs.

    The constant stationary eigenvector is excluded when ``drop_stationary``.
    """
    t = _check_time(t)
    cols = _columns(model, p)
    return model.right_eigenvectors[:, cols] * (model.eigenvalues[cols] ** t)[None, :]


def _check_index(model: DiffusionModel, *idx):
    for i in idx:
        if not 0 <= i < model.n:
            raise IndexOutOfRange(f"index {i} outside [0, {model.n})")


def diffusion_distance(model: DiffusionModel, i: int, j: int, t: int = 1,
                       form: str = PROBABILITY, p: int | None = None) -> float:
    """Diffusion distance between points ``i`` and ``j`` at time ``t``.

    ``form="probability"`` compares rows of ``M^t`` weighted by ``1 / pi``.
    ``form="spectral"`` sums over eigenpairs; with ``p=None`` the full spectrum
    is used, otherwise the same ``p`` pairs as :func:`diffusion_embed`.
    """
    _check_index(model, i, j)
    t = _check_time(t, minimum=1)
    if i == j:
        return 0.0
    if form == PROBABILITY:
        Mt = transition_probabilities(model, t)
        diff = Mt[i] - Mt[j]
        return float(np.sqrt(np.sum(diff * diff / model.stationary)))
    if form == SPECTRAL:
        if p is None:
            lam, psi = model.eigenvalues, model.right_eigenvectors
        else:
            cols = _columns(model, p)
            lam, psi = model.eigenvalues[cols], model.right_eigenvectors[:, cols]
        diff = psi[i] - psi[j]
        return float(np.sqrt(np.sum(lam ** (2 * t) * diff * diff)))
    raise ValueError(f"form must be 'probability' or 'spectral', got {form!r}")


def pairwise_distances(model: DiffusionModel, t: int = 1, form: str = PROBABILITY
                       ) -> np.ndarray:
    """Full ``(n, n)`` diffusion-distance matrix with an exact zero diagonal."""
    t = _check_time(t, minimum=1)
    if form == PROBABILITY:
        F = transition_probabilities(model, t) / np.sqrt(model.stationary)[None, :]
    elif form == SPECTRAL:
        F = model.right_eigenvectors * (model.eigenvalues ** t)[None, :]
    else:
        raise ValueError(f"form must be 'probability' or 'spectral', got {form!r}")
    n = model.n
    out = np.zeros((n, n))
    for a in range(n):
        diff = F[a][None, :] - F[a + 1:]
        out[a, a + 1:] = np.sqrt(np.sum(diff * diff, axis=1))
    out = out + out.T
    return out
