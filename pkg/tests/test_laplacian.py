from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_lap.errors import IsolatedVertex
from spectral_lap.laplacian import (MAXIMIZE, MINIMIZE, alpha_normalized, count_components,
                                    degree_vector, is_connected, symmetric_normalized_kernel,
                                    unnormalized)
from spectral_lap.linalg import eig_sym

PAIR = np.array([[0.0, 1.0], [1.0, 0.0]])
PATH = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])


def random_graph(rng, n, p=0.4):
    W = np.triu(rng.uniform(0.1, 1.0, size=(n, n)) * (rng.random((n, n)) < p), 1)
    return W + W.T


def bfs_components(W):
    n = W.shape[0]
    seen = np.zeros(n, bool)
    count = 0
    for s in range(n):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        q = deque([s])
        while q:
            u = q.popleft()
            for v in np.flatnonzero(W[u] > 0):
                if not seen[v]:
                    seen[v] = True
                    q.append(v)
    return count


def test_degrees():
    np.testing.assert_array_equal(degree_vector(PAIR), [1.0, 1.0])
    np.testing.assert_array_equal(degree_vector(PATH), [1.0, 2.0, 1.0])
    W = PATH.copy()
    W[2, 1] = W[1, 2] = 0.0
    with pytest.raises(IsolatedVertex):
        degree_vector(W)


def test_unnormalized_examples():
    np.testing.assert_array_equal(unnormalized(PAIR).matrix, [[1, -1], [-1, 1]])
    L = unnormalized(PATH)
    np.testing.assert_array_equal(L.matrix, [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])
    assert L.direction == MINIMIZE
    np.testing.assert_allclose(unnormalized(3.5 * PATH).matrix, 3.5 * L.matrix)


def test_alpha_examples():
    rng = np.random.default_rng(0)
    W = random_graph(rng, 8, 0.8) + 0.01 * (1 - np.eye(8))
    np.testing.assert_array_equal(alpha_normalized(W, 0.0).matrix, W)
    np.testing.assert_array_equal(alpha_normalized(PAIR, 0.5).matrix, PAIR)
    np.testing.assert_array_equal(alpha_normalized(2 * PAIR, 0.5).matrix, PAIR)
    np.testing.assert_array_equal(alpha_normalized(W, 0.5).matrix,
                                  symmetric_normalized_kernel(W).matrix)
    assert alpha_normalized(W, 1.0).direction == MAXIMIZE


def test_sym_kernel_pair_spectrum():
    S = symmetric_normalized_kernel(PAIR)
    np.testing.assert_array_equal(S.matrix, PAIR)
    np.testing.assert_allclose(eig_sym(S.matrix).eigenvalues, [-1.0, 1.0], atol=1e-15)
    assert S.direction == MAXIMIZE


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 30))
def test_laplacian_invariants(seed, n):
    rng = np.random.default_rng(seed)
    W = random_graph(rng, n, 0.5)
    W[np.arange(n - 1), np.arange(1, n)] = W[np.arange(1, n), np.arange(n - 1)] = 0.5
    lap = unnormalized(W)
    dmax = lap.degrees.max()
    assert np.max(np.abs(lap.matrix.sum(1))) <= 1e-10 * max(1.0, dmax)
    lam = eig_sym(lap.matrix).eigenvalues
    assert lam[0] >= -1e-8 * lam[-1]
    S = symmetric_normalized_kernel(W).matrix
    assert np.max(np.abs(S - S.T)) <= 1e-12
    assert np.max(np.abs(eig_sym(S).eigenvalues)) <= 1 + 1e-8
    A = alpha_normalized(W, 0.7).matrix
    assert np.max(np.abs(A - A.T)) <= 1e-12


def test_null_vector_constant_for_connected():
    rng = np.random.default_rng(5)
    W = random_graph(rng, 20, 0.6)
    assert is_connected(W)
    v = eig_sym(unnormalized(W).matrix).eigenvectors[:, 0]
    assert np.max(np.abs(v - v.mean())) < 1e-8


def test_count_components_examples():
    assert count_components(PATH) == 1
    two = np.zeros((4, 4))
    two[0, 1] = two[1, 0] = two[2, 3] = two[3, 2] = 1.0
    assert count_components(two) == 2
    assert count_components(np.zeros((5, 5))) == 5
    mixed = np.zeros((5, 5))
    mixed[0, 1] = mixed[1, 0] = 1.0
    assert count_components(mixed) == 4


def test_count_components_matches_bfs():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(2, 40))
        W = random_graph(rng, n, float(rng.uniform(0.02, 0.3)))
        assert count_components(W) == bfs_components(W)
