"""Pure-product bases, SU(N) generators and the three affine coordinate charts.

Every chart writes a state as ``rho = offset + sum_i p_i * D_i`` with constant
Hermitian direction matrices ``D_i``:

* ``weights``   -- convex weights on the tetrahedral product basis; the last
  member carries the dependent weight ``1 - sum(p)``.
* ``naive``     -- diagonal entries ``a_11 .. a_{N-1,N-1}`` followed by the
  real and imaginary parts ``(a_jk, b_jk)`` of the upper triangle, row-major.
* ``generator`` -- ``rho = I/N + 1/2 sum_i <lambda_i> lambda_i``.

Generator table (N = 4), standard Gell-Mann order: for k = 2..N the
symmetric and antisymmetric generators coupling level j < k come in pairs,
followed by the k-th diagonal generator::

    1 sym(1,2)   2 asym(1,2)  3 diag(1,-1,0,0)
    4 sym(1,3)   5 asym(1,3)  6 sym(2,3)   7 asym(2,3)   8 diag(1,1,-2,0)/sqrt3
    9 sym(1,4)  10 asym(1,4) 11 sym(2,4)  12 asym(2,4)  13 sym(3,4)
   14 asym(3,4) 15 diag(1,1,1,-3)/sqrt6
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import (
    BlochNormExceeded,
    DimensionMismatch,
    InvalidDensityMatrix,
    NotInSpan,
    OutsideChartDomain,
)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

TETRA_V = 1.0 / np.sqrt(3.0)
TETRA_VERTICES = (
    (TETRA_V, TETRA_V, TETRA_V),
    (-TETRA_V, -TETRA_V, TETRA_V),
    (-TETRA_V, TETRA_V, -TETRA_V),
    (TETRA_V, -TETRA_V, -TETRA_V),
)
# +x, -x, +y, -y, +z, -z
PAULI_AXES = (
    (1.0, 0.0, 0.0),
    (-1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, -1.0, 0.0),
    (0.0, 0.0, 1.0),
    (0.0, 0.0, -1.0),
)


class Chart(str, enum.Enum):
    WEIGHTS = "weights"
    NAIVE = "naive"
    GENERATOR = "generator"


def check_density_matrix(rho, herm_tol=1e-12, trace_tol=1e-12, psd_tol=1e-10) -> np.ndarray:
    """Return ``rho`` as a complex array, raising InvalidDensityMatrix if it
    is not Hermitian, unit-trace and positive semidefinite."""
    rho = linalg.as_matrix(rho)
    if linalg.hermiticity_defect(rho) > herm_tol:
        raise InvalidDensityMatrix("not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1) > trace_tol:
        raise InvalidDensityMatrix(f"trace {tr.real:.15g} != 1")
    lo = linalg.eigvalsh(rho)[0]
    if lo < -psd_tol:
        raise InvalidDensityMatrix(f"minimum eigenvalue {lo:.3e}")
    return rho


def qubit_from_bloch(v) -> np.ndarray:
    x, y, z = (float(c) for c in v)
    if np.sqrt(x * x + y * y + z * z) > 1 + 1e-12:
        raise BlochNormExceeded(f"|v| = {np.sqrt(x*x + y*y + z*z):.15g} > 1")
    return 0.5 * (np.eye(2) + x * PAULI_X + y * PAULI_Y + z * PAULI_Z)


@dataclass(frozen=True)
class ProductBasis:
    kind: str  # tetra16 | tetra64 | pauli36
    members: np.ndarray  # (count, N, N)
    factors: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.members)

    @property
    def dim(self) -> int:
        return self.members.shape[1]

    def permuted(self, order) -> "ProductBasis":
        order = list(order)
        return ProductBasis(self.kind, self.members[order], tuple(self.factors[i] for i in order))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.dim,
            "members": [
                {
                    "factors": list(f),
                    "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m],
                }
                for f, m in zip(self.factors, self.members)
            ],
        }

    @classmethod
    def from_json(cls, data) -> "ProductBasis":
        if isinstance(data, str):
            data = json.loads(data)
        members = np.array(
            [[[complex(re, im) for re, im in row] for row in m["entries"]] for m in data["members"]]
        )
        return cls(data["kind"], members, tuple(tuple(m["factors"]) for m in data["members"]))


def _product_basis(kind: str, qubits, k: int) -> ProductBasis:
    factors = tuple(itertools.product(range(len(qubits)), repeat=k))
    members = np.array([linalg.kron(*(qubits[i] for i in f)) for f in factors])
    return ProductBasis(kind, members, factors)


@lru_cache(maxsize=None)
def tetra_basis(k: int = 2) -> ProductBasis:
    """All ``4**k`` tensor products of the four tetrahedral qubit states."""
    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")
    qubits = [qubit_from_bloch(v) for v in TETRA_VERTICES]
    return _product_basis("tetra16" if k == 2 else "tetra64", qubits, k)


@lru_cache(maxsize=None)
def pauli36_basis() -> ProductBasis:
    qubits = [qubit_from_bloch(v) for v in PAULI_AXES]
    return _product_basis("pauli36", qubits, 2)


def basis_by_name(name: str) -> ProductBasis:
    try:
        return {"tetra16": lambda: tetra_basis(2), "tetra64": lambda: tetra_basis(3),
                "pauli36": pauli36_basis}[name]()
    except KeyError:
        raise ValueError(f"unknown basis {name!r}") from None


@lru_cache(maxsize=None)
def generator_basis(n: int = 4) -> np.ndarray:
    """The ``n**2 - 1`` generalized Gell-Mann matrices, shape (n*n-1, n, n).

    Normalized so that Tr[l_i l_j] = 2 delta_ij; ordering documented in the
    module docstring.
    """
    out = []
    for k in range(1, n):
        for j in range(k):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            out += [s, a]
        d = np.zeros(n)
        d[:k] = 1
        d[k] = -k
        out.append(np.diag(d * np.sqrt(2.0 / (k * (k + 1)))).astype(complex))
    G = np.array(out)
    G.setflags(write=False)
    return G


def generator_label(index: int, n: int = 4) -> str:
    """Human readable name of the 1-based generator ``index``."""
    i = 0
    for k in range(1, n):
        for j in range(k):
            i += 1
            if i == index:
                return f"sym({j + 1},{k + 1})"
            i += 1
            if i == index:
                return f"asym({j + 1},{k + 1})"
        i += 1
        if i == index:
            return f"diag{k}"
    raise IndexError(index)


def _naive_directions(n: int) -> np.ndarray:
    out = []
    for i in range(n - 1):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1
        e[n - 1, n - 1] = -1
        out.append(e)
    for j in range(n):
        for k in range(j + 1, n):
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = a[k, j] = 1
            b = np.zeros((n, n), dtype=complex)
            b[j, k] = 1j
            b[k, j] = -1j
            out += [a, b]
    return np.array(out)


@lru_cache(maxsize=None)
def chart_affine(chart: Chart | str, n: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """``(offset, directions)`` of a chart; directions has shape (n*n-1, n, n)."""
    chart = Chart(chart)
    if n not in (4, 8):
        raise DimensionMismatch("charts are defined for N = 4 or 8")
    if chart is Chart.WEIGHTS:
        members = tetra_basis(2 if n == 4 else 3).members
        offset = members[-1].copy()
        dirs = members[:-1] - offset
    elif chart is Chart.NAIVE:
        offset = np.zeros((n, n), dtype=complex)
        offset[n - 1, n - 1] = 1
        dirs = _naive_directions(n)
    else:
        offset = np.eye(n, dtype=complex) / n
        dirs = generator_basis(n) / 2
    offset.setflags(write=False)
    dirs.setflags(write=False)
    return offset, dirs


@dataclass(frozen=True)
class ChartPoint:
    chart: Chart
    params: np.ndarray

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(len(self.params) + 1)))


def in_weights_domain(w, tol: float = 1e-12) -> bool:
    w = np.asarray(w, dtype=float)
    return bool(np.all(w >= -tol) and w.sum() <= 1 + tol)


def to_matrix(chart, params, *, check: bool = True) -> np.ndarray:
    """Map chart parameters to a Hermitian unit-trace matrix.

    With ``check`` the convex-weight chart rejects points outside the
    simplex; validity of the resulting state is checked by
    :func:`check_density_matrix` on demand.
    """
    chart = Chart(chart)
    p = np.asarray(params, dtype=float)
    n = int(round(np.sqrt(p.size + 1)))
    if n * n - 1 != p.size or n not in (4, 8):
        raise DimensionMismatch(f"{p.size} parameters do not describe N = 4 or 8")
    if check and chart is Chart.WEIGHTS and not in_weights_domain(p):
        raise OutsideChartDomain("convex weights must be >= 0 with sum <= 1")
    offset, dirs = chart_affine(chart, n)
    return offset + np.tensordot(p, dirs, axes=1)


def to_matrix_point(point: ChartPoint, check: bool = True) -> np.ndarray:
    return to_matrix(point.chart, point.params, check=check)


def _gen_coords(X: np.ndarray, n: int) -> np.ndarray:
    """Real coordinates Tr[X l_i] of (stacks of) Hermitian matrices."""
    return np.real(np.einsum("...jk,ikj->...i", X, generator_basis(n)))


@lru_cache(maxsize=None)
def _chart_linear(chart: Chart, n: int) -> tuple[np.ndarray, np.ndarray]:
    offset, dirs = chart_affine(chart, n)
    A = _gen_coords(dirs, n).T  # columns = coordinates of directions
    c = _gen_coords(offset - np.eye(n) / n, n)
    return A, c


def from_matrix(rho, chart, *, span_tol: float = 1e-10, check: bool = False) -> ChartPoint:
    """Chart parameters of ``rho`` (inverse of :func:`to_matrix`).

    The convex-weight inverse is a least-squares solve on the affine span of
    the basis; a residual above ``span_tol`` raises NotInSpan. With ``check``
    negative weights raise OutsideChartDomain.
    """
    chart = Chart(chart)
    rho = linalg.as_matrix(rho)
    n = rho.shape[0]
    if n not in (4, 8):
        raise DimensionMismatch("charts are defined for N = 4 or 8")
    offset, dirs = chart_affine(chart, n)
    if chart is Chart.WEIGHTS:
        M = dirs.reshape(len(dirs), -1).T
        rhs = (rho - offset).ravel()
        Mr = np.vstack([M.real, M.imag])
        br = np.concatenate([rhs.real, rhs.imag])
        p, *_ = np.linalg.lstsq(Mr, br, rcond=None)
        resid = float(np.max(np.abs(Mr @ p - br)))
        if resid > span_tol:
            raise NotInSpan(f"residual {resid:.3e} exceeds {span_tol:.0e}")
        if check and not in_weights_domain(p):
            raise OutsideChartDomain("state lies outside the convex hull of the basis")
    elif chart is Chart.NAIVE:
        diag = [rho[i, i].real for i in range(n - 1)]
        off = []
        for j in range(n):
            for k in range(j + 1, n):
                off += [rho[j, k].real, rho[j, k].imag]
        p = np.array(diag + off)
    else:
        p = _gen_coords(rho, n)
    return ChartPoint(chart, p)


def jacobian(from_chart, to_chart, n: int = 4) -> tuple[np.ndarray, np.ndarray, float]:
    """Affine change of coordinates ``to = J @ from + const``.

    Returns ``(J, const, |det J|)``.
    """
    Af, cf = _chart_linear(Chart(from_chart), n)
    At, ct = _chart_linear(Chart(to_chart), n)
    J = np.linalg.solve(At, Af)
    const = np.linalg.solve(At, cf - ct)
    return J, const, float(abs(np.linalg.det(J)))


def maximally_mixed_point(chart, n: int = 4) -> ChartPoint:
    return from_matrix(np.eye(n) / n, chart)
