import numpy as np
import pytest
from scipy.stats import unitary_group

from sepgeom import separability, states
from sepgeom.errors import DimensionMismatch, InvalidDensityMatrix

PHI = np.array([1, 0, 0, 1]) / np.sqrt(2)
BELL = np.outer(PHI, PHI)


def werner(p):
    return p * BELL + (1 - p) * np.eye(4) / 4


def random_state(rng, rank=4):
    G = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    W = G @ G.conj().T
    return W / np.trace(W).real


def test_product_members_separable():
    for m in states.tetra_basis(2).members:
        assert separability.classify_2qubit(m).is_separable


def test_bell_entangled():
    v = separability.classify_2qubit(BELL)
    assert not v.is_separable
    assert abs(v.min_pt_eigenvalue + 0.5) < 1e-12


def test_werner_threshold():
    # PT minimum eigenvalue of the Werner family is (1 - 3p)/4
    for p in np.linspace(0, 1, 21):
        assert abs(separability.min_pt_eigenvalue(werner(p)) - min((1 - 3 * p) / 4, (1 + p) / 4)) < 1e-14
    assert separability.classify_2qubit(werner(1 / 3)).is_separable
    assert separability.classify_2qubit(werner(1 / 3 - 1e-10)).is_separable
    assert not separability.classify_2qubit(werner(1 / 3 + 1e-10)).is_separable


def test_local_unitary_invariance():
    rng = np.random.default_rng(0)
    for _ in range(100):
        rho = random_state(rng, rank=int(rng.integers(1, 5)))
        U = np.kron(unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng))
        a = separability.classify_2qubit(rho)
        b = separability.classify_2qubit(U @ rho @ U.conj().T)
        assert abs(a.min_pt_eigenvalue - b.min_pt_eigenvalue) < 1e-12
        if abs(a.min_pt_eigenvalue) > 1e-10:
            assert a.is_separable == b.is_separable


def test_hull_mixtures_separable():
    rng = np.random.default_rng(1)
    members = states.tetra_basis(2).members
    for _ in range(1000):
        w1, w2 = rng.dirichlet(np.ones(16)), rng.dirichlet(np.ones(16))
        a = np.tensordot(w1, members, axes=1)
        b = np.tensordot(w2, members, axes=1)
        t = rng.uniform()
        assert separability.classify_2qubit(t * a + (1 - t) * b).is_separable


def test_subsystem_symmetry():
    rng = np.random.default_rng(2)
    for _ in range(50):
        rho = random_state(rng)
        a = separability.min_pt_eigenvalue(rho, "A")
        b = separability.min_pt_eigenvalue(rho, "B")
        assert abs(a - b) < 1e-13


def test_vectorized_matches_scalar():
    rng = np.random.default_rng(3)
    stack = np.array([random_state(rng) for _ in range(20)])
    got = separability.min_pt_eigenvalues(stack)
    want = [separability.min_pt_eigenvalue(r) for r in stack]
    np.testing.assert_allclose(got, want, atol=1e-14)


def test_input_validation():
    with pytest.raises(DimensionMismatch):
        separability.classify_2qubit(np.eye(8) / 8)
    with pytest.raises(InvalidDensityMatrix):
        separability.classify_2qubit(np.eye(4))
