"""Degree vectors, Laplacian variants and connected-component counting."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IsolatedVertex
from .graph import as_weights
from .linalg import ZERO_TOL, eig_sym

UNNORMALIZED = "unnormalized"
ALPHA_NORMALIZED = "alpha_normalized"
SYMMETRIC_NORMALIZED_KERNEL = "symmetric_normalized_kernel"

MINIMIZE = "minimize"
MAXIMIZE = "maximize"

# Similarity-type variants (W is not negated) flip the extremum of the
# embedding objective.
VARIANT_DIRECTION = {
    UNNORMALIZED: MINIMIZE,
    ALPHA_NORMALIZED: MAXIMIZE,
    SYMMETRIC_NORMALIZED_KERNEL: MAXIMIZE,
}


@dataclass(frozen=True)
class LaplacianMatrix:
    matrix: np.ndarray
    variant: str
    degrees: np.ndarray
    alpha: float | None = None

    @property
    def direction(self) -> str:
        return VARIANT_DIRECTION[self.variant]


def degree_vector(W) -> np.ndarray:
    """Row sums of ``W``; raises :class:`IsolatedVertex` on any zero row."""
    W = as_weights(W)
    d = W.sum(axis=1)
    bad = np.flatnonzero(d <= 0)
    if bad.size:
        raise IsolatedVertex(f"vertex {int(bad[0])} has zero degree "
                             f"({bad.size} isolated in total)")
    return d


def unnormalized(W) -> LaplacianMatrix:
    """``L = D - W``."""
    W = as_weights(W)
    d = degree_vector(W)
    return LaplacianMatrix(np.diag(d) - W, UNNORMALIZED, d)


def alpha_normalized(W, alpha: float) -> LaplacianMatrix:
    """``D^-alpha W D^-alpha``; ``alpha = 0`` returns ``W`` unchanged."""
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    W = as_weights(W)
    d = degree_vector(W)
    if alpha == 0:
        return LaplacianMatrix(W.copy(), ALPHA_NORMALIZED, d, 0.0)
    dd = np.outer(d, d)
    # the 0.5 case shares the symmetric-normalized kernel's expression so the
    # two agree bit-for-bit
    denom = np.sqrt(dd) if alpha == 0.5 else dd ** alpha
    return LaplacianMatrix(W / denom, ALPHA_NORMALIZED, d, float(alpha))


def symmetric_normalized_kernel(W) -> LaplacianMatrix:
    """Entrywise ``W(i, j) / sqrt(d_i d_j)``."""
    W = as_weights(W)
    d = degree_vector(W)
    return LaplacianMatrix(W / np.sqrt(np.outer(d, d)), SYMMETRIC_NORMALIZED_KERNEL, d)


def count_components(W, tol: float = ZERO_TOL) -> int:
    """Number of connected components from the zero spectrum of ``D - W``.

    Isolated vertices are counted up front (they would make the degree
    matrix singular) and the rest of the graph is counted spectrally.
    """
    W = as_weights(W)
    d = W.sum(axis=1)
    isolated = d <= 0
    keep = np.flatnonzero(~isolated)
    count = int(isolated.sum())
    if keep.size == 0:
        return count
    sub = W[np.ix_(keep, keep)]
    L = np.diag(sub.sum(axis=1)) - sub
    w = eig_sym(L).eigenvalues
    scale = max(1.0, float(np.max(np.abs(w))))
    return count + int(np.sum(np.abs(w) < tol * scale))


def is_connected(W, tol: float = ZERO_TOL) -> bool:
    return count_components(W, tol) == 1
