import logging

import numpy as np
import pytest
from scipy import linalg as sla

from sepgeom import linalg
from sepgeom.errors import NotHermitian, NotPSD

DIMS = (2, 4, 8, 16, 36, 64)


def random_hermitian(rng, n, scale=1.0):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (A + A.conj().T) / 2


def random_psd(rng, n):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return A @ A.conj().T


def count_below(M, x):
    """Sylvester inertia: eigenvalues of M below x = negative pivots of LDL^T(M - xI)."""
    _, d, _ = sla.ldl(M - x * np.eye(len(M)), hermitian=True)
    return int(np.sum(np.linalg.eigvalsh(d) < 0))


def bisect_eigenvalue(M, k, lo, hi, tol=1e-13):
    """k-th smallest eigenvalue (0-based) by bisection on the inertia count."""
    while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if count_below(M, mid) > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_identity_eigenvalues():
    es = linalg.hermitian_eigensystem(np.eye(4))
    np.testing.assert_allclose(es.eigenvalues, np.ones(4), atol=1e-15)


def test_eigensystem_invariants_on_1000_random_matrices():
    rng = np.random.default_rng(11)
    for trial in range(1002):
        n = DIMS[trial % len(DIMS)]
        M = random_hermitian(rng, n)
        es = linalg.hermitian_eigensystem(M)
        V = es.eigenvectors
        assert np.all(np.diff(es.eigenvalues) >= 0)
        assert np.max(np.abs(es.reconstruct() - M)) <= 1e-12 * max(1.0, n / 8)
        assert np.max(np.abs(V.conj().T @ V - np.eye(n))) <= 1e-12 * max(1.0, n / 8)


def test_eigenvalues_match_inertia_bisection_oracle():
    rng = np.random.default_rng(5)
    for n in (2, 3, 4, 4, 4, 8, 16):
        M = random_hermitian(rng, n)
        w = linalg.hermitian_eigensystem(M).eigenvalues
        bound = np.abs(M).sum(axis=1).max()  # Gershgorin radius
        oracle = [bisect_eigenvalue(M, k, -bound, bound) for k in range(n)]
        np.testing.assert_allclose(w, oracle, atol=1e-11)


def test_random_4x4_against_characteristic_polynomial():
    rng = np.random.default_rng(2)
    M = random_hermitian(rng, 4)
    # coefficients from traces of powers (Newton identities), independent of eigh
    p = [np.real(np.trace(np.linalg.matrix_power(M, k))) for k in range(1, 5)]
    e1 = p[0]
    e2 = (e1 * p[0] - p[1]) / 2
    e3 = (e2 * p[0] - e1 * p[1] + p[2]) / 3
    e4 = (e3 * p[0] - e2 * p[1] + e1 * p[2] - p[3]) / 4
    char = np.poly1d([1.0, -e1, e2, -e3, e4])
    grid = np.linspace(-10, 10, 20001)
    vals = char(grid)
    roots = []
    for i in np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:])):
        a, b = grid[i], grid[i + 1]
        for _ in range(80):
            m = 0.5 * (a + b)
            if np.sign(char(m)) == np.sign(char(a)):
                a = m
            else:
                b = m
        roots.append(0.5 * (a + b))
    np.testing.assert_allclose(linalg.hermitian_eigensystem(M).eigenvalues, roots, atol=1e-10)


def test_non_hermitian_rejected():
    M = np.array([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(NotHermitian):
        linalg.hermitian_eigensystem(M)


def test_psd_sqrt_examples():
    np.testing.assert_allclose(linalg.psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)
    v = np.array([1, 1j, 0]) / np.sqrt(2)
    P = np.outer(v, v.conj())
    np.testing.assert_allclose(linalg.psd_sqrt(P), P, atol=1e-14)


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(3)
    for n in DIMS:
        M = random_psd(rng, n) / n
        R = linalg.psd_sqrt(M)
        assert np.max(np.abs(R @ R - M)) < 1e-10


def test_psd_sqrt_clamps_tiny_negatives_and_logs(caplog):
    M = np.diag([1.0, -5e-11])
    with caplog.at_level(logging.DEBUG, logger="sepgeom.linalg"):
        R = linalg.psd_sqrt(M)
    assert R[1, 1] == 0
    assert any("clamp" in r.message for r in caplog.records)
    with pytest.raises(NotPSD):
        linalg.psd_sqrt(np.diag([1.0, -1e-6]))


def test_kron():
    np.testing.assert_array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    rng = np.random.default_rng(4)
    A, B = random_hermitian(rng, 2), random_hermitian(rng, 3)
    assert np.isclose(np.trace(linalg.kron(A, B)), np.trace(A) * np.trace(B))


def test_kron_of_tetra_qubits_is_rank_one():
    from sepgeom import states
    a = states.qubit_from_bloch(states.TETRA_VERTICES[0])
    b = states.qubit_from_bloch(states.TETRA_VERTICES[2])
    w = linalg.hermitian_eigensystem(linalg.kron(a, b)).eigenvalues
    np.testing.assert_allclose(w, [0, 0, 0, 1], atol=1e-14)


def test_partial_transpose_of_product_state():
    rng = np.random.default_rng(6)
    a, b = random_psd(rng, 2), random_psd(rng, 2)
    a, b = a / np.trace(a), b / np.trace(b)
    np.testing.assert_allclose(linalg.partial_transpose(np.kron(a, b)), np.kron(a, b.T), atol=1e-15)
    np.testing.assert_allclose(linalg.partial_transpose(np.kron(a, b), subsystem="A"), np.kron(a.T, b), atol=1e-15)


def test_bell_partial_transpose_min_eigenvalue():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    w = linalg.eigvalsh(linalg.partial_transpose(np.outer(phi, phi)))
    assert abs(w[0] + 0.5) < 1e-12


def test_partial_transpose_involution_trace_hermiticity():
    rng = np.random.default_rng(7)
    for dims in ((2, 2), (2, 4), (4, 2), (3, 3)):
        n = dims[0] * dims[1]
        M = random_hermitian(rng, n)
        for sub in ("A", "B"):
            T = linalg.partial_transpose(M, dims, sub)
            np.testing.assert_allclose(linalg.partial_transpose(T, dims, sub), M, atol=0)
            assert abs(np.trace(T) - np.trace(M)) < 1e-14 * n
            assert np.max(np.abs(T - T.conj().T)) < 1e-14


def test_partial_transpose_batched():
    rng = np.random.default_rng(8)
    stack = np.array([random_hermitian(rng, 4) for _ in range(5)])
    out = linalg.partial_transpose(stack)
    for M, T in zip(stack, out):
        np.testing.assert_array_equal(T, linalg.partial_transpose(M))


def test_cluster_eigenvalues():
    vals = [-2] * 9 + [2] * 6 + [6]
    got = linalg.cluster_eigenvalues(np.array(vals) + 1e-13)
    assert [(round(v, 10), m) for v, m in got] == [(-2, 9), (2, 6), (6, 1)]
    assert [m for _, m in linalg.cluster_eigenvalues([1.0, 1.0 + 1e-6, 2.0])] == [1, 1, 1]
