import itertools

import numpy as np
import pytest

from sepgeom import linalg, states
from sepgeom.errors import BlochNormExceeded, InvalidDensityMatrix, NotInSpan, OutsideChartDomain
from sepgeom.states import Chart

CHARTS = list(Chart)


def random_interior_state(rng, n=4, mix=0.5):
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    W = G @ G.conj().T
    return mix * W / np.trace(W).real + (1 - mix) * np.eye(n) / n


def random_weights(rng, n=4):
    w = rng.dirichlet(np.ones(n * n))
    return w[:-1]


def test_qubit_from_bloch():
    np.testing.assert_allclose(states.qubit_from_bloch((0, 0, 0)), np.eye(2) / 2)
    np.testing.assert_allclose(states.qubit_from_bloch((0, 0, 1)), np.diag([1, 0]))
    v = 1 / np.sqrt(3)
    r = states.qubit_from_bloch((v, v, v))
    assert abs(np.trace(r @ r).real - 1) < 1e-14
    with pytest.raises(BlochNormExceeded):
        states.qubit_from_bloch((1, 1, 0))


def test_check_density_matrix():
    states.check_density_matrix(np.eye(4) / 4)
    with pytest.raises(InvalidDensityMatrix):
        states.check_density_matrix(np.eye(4) / 3)
    with pytest.raises(InvalidDensityMatrix):
        states.check_density_matrix(np.diag([1.5, -0.5]))


@pytest.mark.parametrize("name,count", [("tetra16", 16), ("tetra64", 64), ("pauli36", 36)])
def test_basis_members_are_pure(name, count):
    b = states.basis_by_name(name)
    assert len(b) == count
    for m in b.members:
        assert abs(np.trace(m @ m).real - 1) < 1e-12
        assert abs(linalg.eigvalsh(m)[-1] - 1) < 1e-10


def test_basis_ordering_is_lexicographic():
    b = states.tetra_basis(3)
    assert list(b.factors) == sorted(b.factors)
    assert b.factors[0] == (0, 0, 0) and b.factors[-1] == (3, 3, 3)


def test_tetra16_trace_products():
    b = states.tetra_basis(2)
    vals = [np.trace(b.members[i] @ b.members[j]).real for i, j in itertools.combinations(range(16), 2)]
    assert sum(abs(v - 1 / 3) < 1e-12 for v in vals) == 48
    assert sum(abs(v - 1 / 9) < 1e-12 for v in vals) == 72


def test_basis_json_roundtrip():
    b = states.pauli36_basis()
    b2 = states.ProductBasis.from_json(b.to_json())
    np.testing.assert_array_equal(b.members, b2.members)
    assert list(b.factors) == list(b2.factors)


def test_generator_basis():
    lam = states.generator_basis(4)
    assert lam.shape == (15, 4, 4)
    for L in lam:
        assert np.max(np.abs(L - L.conj().T)) == 0
        assert abs(np.trace(L)) <= 1e-14
    gram = np.real(np.einsum("aij,bji->ab", lam, lam))
    np.testing.assert_allclose(gram, 2 * np.eye(15), atol=1e-12)


def test_generator_table_order():
    # interleaved order: sym(1,2), asym(1,2), diag_2, sym(1,3), ...
    labels = [states.generator_label(i) for i in range(1, 16)]
    assert labels[0].startswith("sym") and labels[1].startswith("asym") and labels[2].startswith("diag")
    lam = states.generator_basis(4)
    np.testing.assert_allclose(lam[14], np.diag([1, 1, 1, -3]) / np.sqrt(6))
    np.testing.assert_allclose(lam[5], np.array([[0, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 0]]))


@pytest.mark.parametrize("chart", CHARTS)
def test_maximally_mixed(chart):
    p = states.maximally_mixed_point(chart)
    np.testing.assert_allclose(states.to_matrix(chart, p.params), np.eye(4) / 4, atol=1e-15)


def test_maximally_mixed_coordinates():
    np.testing.assert_allclose(states.maximally_mixed_point(Chart.WEIGHTS).params, np.full(15, 1 / 16))
    np.testing.assert_allclose(states.maximally_mixed_point(Chart.GENERATOR).params, np.zeros(15), atol=1e-16)
    naive = states.maximally_mixed_point(Chart.NAIVE).params
    np.testing.assert_allclose(naive[:3], 0.25)
    np.testing.assert_allclose(naive[3:], 0, atol=1e-16)


def test_weights_domain_enforced():
    w = np.full(15, 1 / 16)
    w[0] = -0.01
    with pytest.raises(OutsideChartDomain):
        states.to_matrix(Chart.WEIGHTS, w)


@pytest.mark.parametrize("chart", CHARTS)
def test_to_matrix_is_affine(chart):
    rng = np.random.default_rng(1)
    for _ in range(10):
        p = states.from_matrix(random_interior_state(rng), chart).params
        q = states.from_matrix(random_interior_state(rng), chart).params
        a = rng.uniform()
        lhs = states.to_matrix(chart, a * p + (1 - a) * q, check=False)
        rhs = a * states.to_matrix(chart, p, check=False) + (1 - a) * states.to_matrix(chart, q, check=False)
        assert np.max(np.abs(lhs - rhs)) < 1e-13


@pytest.mark.parametrize("chart", CHARTS)
def test_roundtrip(chart):
    rng = np.random.default_rng(2)
    for _ in range(10):
        rho = random_interior_state(rng)
        p = states.from_matrix(rho, chart)
        np.testing.assert_allclose(states.to_matrix(chart, p.params, check=False), rho, atol=1e-12)


def test_weights_roundtrip_in_domain():
    rng = np.random.default_rng(3)
    for _ in range(10):
        w = random_weights(rng)
        back = states.from_matrix(states.to_matrix(Chart.WEIGHTS, w), Chart.WEIGHTS).params
        np.testing.assert_allclose(back, w, atol=1e-12)


def test_not_in_span():
    with pytest.raises(NotInSpan):
        states.from_matrix(np.eye(4) / 4 + 0.1j * (np.eye(4)), Chart.WEIGHTS)


@pytest.mark.parametrize("a,b", list(itertools.permutations(CHARTS, 2)))
def test_jacobian_composition(a, b):
    Jab, _, _ = states.jacobian(a, b)
    Jba, _, _ = states.jacobian(b, a)
    np.testing.assert_allclose(Jab @ Jba, np.eye(15), atol=1e-10)


def test_jacobian_self_is_identity():
    for c in CHARTS:
        J, const, det = states.jacobian(c, c)
        np.testing.assert_allclose(J, np.eye(15), atol=1e-12)
        assert abs(det - 1) < 1e-12


def test_jacobian_maps_points():
    rng = np.random.default_rng(4)
    rho = random_interior_state(rng)
    for a, b in itertools.permutations(CHARTS, 2):
        J, const, _ = states.jacobian(a, b)
        pa = states.from_matrix(rho, a).params
        pb = states.from_matrix(rho, b).params
        np.testing.assert_allclose(J @ pa + const, pb, atol=1e-12)


def test_jacobian_determinants():
    _, _, d_nw = states.jacobian(Chart.WEIGHTS, Chart.NAIVE)
    assert abs(d_nw - 2**10 / 3**12) < 1e-12 * d_nw
    _, _, d_ng = states.jacobian(Chart.NAIVE, Chart.GENERATOR)
    assert abs(d_ng - 2**14 * np.sqrt(2)) < 1e-9 * d_ng


def test_generator_to_naive_determinant_by_column_assembly():
    # assemble the linear map one coordinate at a time through matrices only
    base = states.to_matrix(Chart.GENERATOR, np.zeros(15))
    cols = []
    for i in range(15):
        e = np.zeros(15)
        e[i] = 1e-3
        a = states.from_matrix(states.to_matrix(Chart.GENERATOR, e, check=False), Chart.NAIVE).params
        b = states.from_matrix(base, Chart.NAIVE).params
        cols.append((a - b) / 1e-3)
    brute = abs(np.linalg.det(np.array(cols).T))
    _, _, det = states.jacobian(Chart.GENERATOR, Chart.NAIVE)
    assert abs(brute - det) < 1e-9 * det


def test_chart_directions_n8_weights():
    offset, dirs = states.chart_affine(Chart.WEIGHTS, 8)
    assert dirs.shape == (63, 8, 8)
    np.testing.assert_allclose(offset + np.tensordot(np.full(63, 1 / 64), dirs, axes=1), np.eye(8) / 8, atol=1e-15)
