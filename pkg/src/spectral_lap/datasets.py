"""Synthetic manifold-learning fixtures.

Every generator returns ``(X, labels)`` with ``X`` of shape ``(d, n)``.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidSpec, UnknownDataset

DATASETS = ("two_moons", "blobs", "swiss_roll", "s_curve")


def two_moons(n: int, noise: float = 0.0, seed: int = 0):
    """Two interleaved unit half-circles; the second is shifted by (1, -0.5) and flipped."""
    rng = np.random.default_rng(seed)
    n_out = n // 2
    n_in = n - n_out
    a = np.linspace(0.0, np.pi, n_out)
    b = np.linspace(0.0, np.pi, n_in)
    X = np.vstack([np.concatenate([np.cos(a), 1.0 - np.cos(b)]),
                   np.concatenate([np.sin(a), 1.0 - np.sin(b) - 0.5])])
    labels = np.concatenate([np.zeros(n_out, int), np.ones(n_in, int)])
    if noise > 0:
        X = X + rng.normal(scale=noise, size=X.shape)
    return X, labels


def blobs(n: int, noise: float = 1.0, seed: int = 0, centers=None):
    """Isotropic Gaussian blobs, contiguous blocks of near-equal size.

    Default centers are ``(5, 5)`` and ``(-5, -5)``.
    """
    rng = np.random.default_rng(seed)
    centers = np.array([[5.0, 5.0], [-5.0, -5.0]] if centers is None else centers, dtype=float)
    k = centers.shape[0]
    labels = np.repeat(np.arange(k), [n // k + (i < n % k) for i in range(k)])
    X = centers[labels].T + rng.normal(scale=noise, size=(centers.shape[1], n))
    return X, labels


def _quantile_labels(s: np.ndarray, bins: int) -> np.ndarray:
    edges = np.quantile(s, np.linspace(0, 1, bins + 1)[1:-1])
    return np.searchsorted(edges, s, side="right")


def swiss_roll(n: int, noise: float = 0.0, seed: int = 0, bins: int = 4):
    """Spiral ``r = t`` rolled in 3-D; labels are arc-length quartiles."""
    rng = np.random.default_rng(seed)
    t = 1.5 * np.pi * (1.0 + 2.0 * rng.random(n))
    h = 21.0 * rng.random(n)
    X = np.vstack([t * np.cos(t), h, t * np.sin(t)])
    if noise > 0:
        X = X + rng.normal(scale=noise, size=X.shape)
    arc = 0.5 * (t * np.sqrt(1.0 + t * t) + np.arcsinh(t))
    return X, _quantile_labels(arc, bins)


def s_curve(n: int, noise: float = 0.0, seed: int = 0, bins: int = 4):
    """S-shaped sheet in 3-D; the curve has unit speed so arc length is ``t``."""
    rng = np.random.default_rng(seed)
    t = 3.0 * np.pi * (rng.random(n) - 0.5)
    h = 2.0 * rng.random(n)
    X = np.vstack([np.sin(t), h, np.sign(t) * (np.cos(t) - 1.0)])
    if noise > 0:
        X = X + rng.normal(scale=noise, size=X.shape)
    return X, _quantile_labels(t, bins)


_GENERATORS = {"two_moons": two_moons, "blobs": blobs, "swiss_roll": swiss_roll,
               "s_curve": s_curve}


def generate_dataset(name: str, n: int, noise: float = 0.0, seed: int = 0, **kwargs):
    """Dispatch to a named generator; deterministic given ``seed``."""
    gen = _GENERATORS.get(name)
    if gen is None:
        raise UnknownDataset(f"unknown dataset {name!r}; choose from {', '.join(DATASETS)}")
    if n < 4:
        raise InvalidSpec(f"n must be at least 4, got {n}")
    if noise < 0:
        raise InvalidSpec(f"noise must be nonnegative, got {noise}")
    return gen(int(n), float(noise), int(seed), **kwargs)
