import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_lap.diffusion import (diffusion_distance, diffusion_embed, diffusion_operator,
                                    pairwise_distances, transition_probabilities)
from spectral_lap.errors import DisconnectedGraph, IndexOutOfRange, IsolatedVertex, TooManyDimensions

EDGE = np.array([[0.0, 1.0], [1.0, 0.0]])


def random_connected(rng, n, extra=0.3):
    W = np.zeros((n, n))
    for v in range(1, n):
        u = int(rng.integers(0, v))
        W[u, v] = W[v, u] = rng.uniform(0.1, 1.0)
    mask = np.triu(rng.random((n, n)) < extra, 1)
    W[mask] = rng.uniform(0.1, 1.0, mask.sum())
    return np.triu(W, 1) + np.triu(W, 1).T


def test_two_node_walk():
    m = diffusion_operator(EDGE, alpha=0.0, drop_stationary=False)
    np.testing.assert_array_equal(m.transition, EDGE)
    np.testing.assert_allclose(m.eigenvalues, [1.0, -1.0], atol=1e-15)
    np.testing.assert_allclose(transition_probabilities(m, 2), np.eye(2), atol=1e-15)
    np.testing.assert_array_equal(transition_probabilities(m, 1), m.transition)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(3, 12), alpha=st.sampled_from([0.0, 0.5, 1.0]))
def test_model_invariants(seed, n, alpha):
    rng = np.random.default_rng(seed)
    m = diffusion_operator(random_connected(rng, n), alpha)
    M, psi, lam, pi = m.transition, m.right_eigenvectors, m.eigenvalues, m.stationary
    assert np.max(np.abs(M.sum(1) - 1)) <= 1e-12 and np.all(M >= 0)
    assert np.max(np.abs(M @ psi - psi * lam)) <= 1e-8
    np.testing.assert_allclose(psi.T @ (pi[:, None] * psi), np.eye(n), atol=1e-8)
    assert np.max(np.abs(pi @ M - pi)) <= 1e-10
    assert abs(pi.sum() - 1) < 1e-12 and np.all(pi > 0)
    assert lam[0] == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(psi[:, 0] - 1.0)) < 1e-8
    assert np.max(np.abs(lam)) <= 1 + 1e-12


def test_spectral_reconstruction_of_powers():
    rng = np.random.default_rng(1)
    m = diffusion_operator(random_connected(rng, 9))
    for t in (1, 2, 5):
        rec = (m.right_eigenvectors * m.eigenvalues ** t) @ m.left_eigenvectors.T
        assert np.linalg.norm(rec - transition_probabilities(m, t)) < 1e-8


def test_rows_stochastic_under_powers():
    rng = np.random.default_rng(2)
    m = diffusion_operator(random_connected(rng, 10))
    for t in (1, 3, 16, 64):
        assert np.max(np.abs(transition_probabilities(m, t).sum(1) - 1)) <= 1e-10


def test_embedding_time_scaling():
    rng = np.random.default_rng(3)
    m = diffusion_operator(random_connected(rng, 10))
    e0 = diffusion_embed(m, 0, 3)
    np.testing.assert_array_equal(e0, m.right_eigenvectors[:, 1:4])
    e1, e2 = diffusion_embed(m, 1, 3), diffusion_embed(m, 2, 3)
    np.testing.assert_allclose(e2, e1 * m.eigenvalues[1:4], atol=1e-10)
    norms = [np.linalg.norm(diffusion_embed(m, t, 3), axis=0) for t in range(5)]
    assert all(np.all(a >= b) for a, b in zip(norms, norms[1:]))


def test_distance_forms_agree():
    rng = np.random.default_rng(4)
    for _ in range(10):
        n = int(rng.integers(3, 13))
        m = diffusion_operator(random_connected(rng, n))
        for t in (1, 2, 4, 8):
            for i, j in itertools.combinations(range(n), 2):
                a = diffusion_distance(m, i, j, t, "probability")
                b = diffusion_distance(m, i, j, t, "spectral")
                assert abs(a - b) <= 1e-8 * max(a, b, 1e-300) or max(a, b) < 1e-14


def test_truncated_spectral_equals_embedding_distance():
    rng = np.random.default_rng(5)
    m = diffusion_operator(random_connected(rng, 11))
    Y = diffusion_embed(m, 3, 4)
    for i, j in itertools.combinations(range(11), 2):
        d = diffusion_distance(m, i, j, 3, "spectral", p=4)
        assert abs(d - np.linalg.norm(Y[i] - Y[j])) <= 1e-10


def test_self_distance_zero_and_stationary_irrelevant():
    rng = np.random.default_rng(6)
    W = random_connected(rng, 8)
    a, b = diffusion_operator(W), diffusion_operator(W, drop_stationary=False)
    assert diffusion_distance(a, 3, 3, 2, "probability") == 0.0
    assert diffusion_distance(a, 3, 3, 2, "spectral") == 0.0
    for i, j in itertools.combinations(range(8), 2):
        assert diffusion_distance(a, i, j, 2, "spectral") == diffusion_distance(b, i, j, 2, "spectral")
    p = a.n - 1
    np.testing.assert_allclose(
        np.linalg.norm(diffusion_embed(a, 2, p)[0] - diffusion_embed(a, 2, p)[5]),
        np.linalg.norm(diffusion_embed(b, 2, p + 1)[0] - diffusion_embed(b, 2, p + 1)[5]),
        atol=1e-12)


def test_metric_properties():
    rng = np.random.default_rng(7)
    for _ in range(5):
        n = int(rng.integers(3, 11))
        m = diffusion_operator(random_connected(rng, n))
        D = pairwise_distances(m, 2)
        assert np.array_equal(D, D.T) and np.all(np.diag(D) == 0)
        for i, j, k in itertools.product(range(n), repeat=3):
            assert D[i, k] <= D[i, j] + D[j, k] + 1e-10
        S = pairwise_distances(m, 2, "spectral")
        np.testing.assert_allclose(S, D, rtol=1e-7, atol=1e-12)


def test_errors():
    rng = np.random.default_rng(8)
    m = diffusion_operator(random_connected(rng, 5))
    with pytest.raises(IndexOutOfRange):
        diffusion_distance(m, 0, 5)
    with pytest.raises(TooManyDimensions):
        diffusion_embed(m, 1, 5)
    with pytest.raises(ValueError):
        transition_probabilities(m, 0)
    W = np.zeros((3, 3))
    W[0, 1] = W[1, 0] = 1
    with pytest.raises(IsolatedVertex):
        diffusion_operator(W)
    W4 = np.zeros((4, 4))
    W4[0, 1] = W4[1, 0] = W4[2, 3] = W4[3, 2] = 1
    with pytest.raises(DisconnectedGraph):
        diffusion_operator(W4)
