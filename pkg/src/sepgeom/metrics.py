"""Monotone-metric distances, Bures metric tensors and volume elements.

Convention anchor: the tensor is built from the spectral formula

    g_ab = 1/2 sum_jk Re(<j|D_a|k><k|D_b|j>) / (l_j + l_k)

so that ``d_Bures(rho, rho + drho)**2 ~ g_ab dx_a dx_b`` for the distance
``d^2 = 2 - 2 Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))``. :func:`fd_oracle`
checks this against the distance directly. The statistical-distinguishability
convention is four times larger.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg, states
from .errors import BoundaryState, DimensionMismatch
from .states import Chart

BOUNDARY_EIG = 1e-9
CONVENTION_FACTOR = {"bures": 1.0, "sd": 4.0}


def fidelity_root(rho1, rho2) -> float:
    """Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)), the square root of the fidelity."""
    s = linalg.psd_sqrt(rho1)
    inner = s @ linalg.as_matrix(rho2) @ s
    w = linalg.eigvalsh(inner)
    return float(np.sum(np.sqrt(linalg.roundoff_floor(w))))


def bures_distance(rho1, rho2) -> float:
    """sqrt(2 - 2 sqrt F), evaluated as min_U ||sqrt(rho1) - sqrt(rho2) U||_F.

    The optimal unitary comes from the SVD of sqrt(rho2)^dag sqrt(rho1); the
    norm form avoids the cancellation in 2 - 2 sqrt F for nearby states.
    """
    r1, r2 = linalg.as_matrix(rho1), linalg.as_matrix(rho2)
    if r1.shape != r2.shape:
        raise DimensionMismatch("states must have equal dimension")
    a, b = linalg.psd_sqrt(r1), linalg.psd_sqrt(r2)
    W, _, Vh = np.linalg.svd(b.conj().T @ a)
    d1 = np.linalg.norm(a - b @ (W @ Vh))
    W, _, Vh = np.linalg.svd(a.conj().T @ b)
    d2 = np.linalg.norm(b - a @ (W @ Vh))
    return float(0.5 * (d1 + d2))


def bures_distance_sq(rho1, rho2) -> float:
    return bures_distance(rho1, rho2) ** 2


def hs_distance(rho1, rho2) -> float:
    d = linalg.as_matrix(rho1) - linalg.as_matrix(rho2)
    return float(np.sqrt(max(np.real(np.trace(d @ d)), 0.0)))


def wy_distance(rho1, rho2) -> float:
    """Wigner-Yanase distance 2 arccos Tr[sqrt(rho1) sqrt(rho2)].

    For unit-trace inputs the overlap is 1 - h^2/2 with h the Frobenius
    norm of sqrt(rho1) - sqrt(rho2), so the distance is 4 arcsin(h/2),
    which stays accurate for nearby states where arccos does not.
    """
    h = np.linalg.norm(linalg.psd_sqrt(rho1) - linalg.psd_sqrt(rho2))
    return float(4.0 * np.arcsin(min(h / 2.0, 1.0)))


def trace_product(rho1, rho2) -> float:
    return float(np.real(np.trace(linalg.as_matrix(rho1) @ linalg.as_matrix(rho2))))


DISTANCES = {
    "bures": bures_distance,
    "hs": hs_distance,
    "wy": wy_distance,
    "trace-product": trace_product,
}


@dataclass(frozen=True)
class SpectrumReport:
    clusters: list[tuple[float, int]]
    rtol: float

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.clusters]

    def to_json(self) -> dict:
        return {"rtol": self.rtol, "clusters": [{"value": v, "multiplicity": m} for v, m in self.clusters]}


def spectrum_report(values, rtol: float = linalg.CLUSTER_RTOL) -> SpectrumReport:
    return SpectrumReport(linalg.cluster_eigenvalues(values, rtol), rtol)


@dataclass(frozen=True)
class MetricTensor:
    chart: str
    params: np.ndarray
    g: np.ndarray
    convention: str = "bures"
    eigenvalues: np.ndarray = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def spectrum(self, rtol: float = linalg.CLUSTER_RTOL) -> SpectrumReport:
        return spectrum_report(self.eigenvalues, rtol)

    def to_json(self, rtol: float = linalg.CLUSTER_RTOL) -> dict:
        return {
            "chart": self.chart,
            "base_point": [float(x) for x in self.params],
            "convention": self.convention,
            "g": [float(x) for x in self.g.ravel()],
            "eigenvalue_clusters": self.spectrum(rtol).to_json()["clusters"],
        }


def tensor_from_directions(rho, directions, *, boundary: float | None = BOUNDARY_EIG) -> np.ndarray:
    """Bures tensor at ``rho`` for the tangent directions ``directions``.

    ``rho`` and ``directions`` may carry a common leading batch shape, i.e.
    ``rho`` of shape (..., N, N) and ``directions`` of shape (d, N, N).
    With ``boundary=None`` eigenvalues are floored at 1e-18 instead of
    raising BoundaryState; used by quadrature near domain edges.
    """
    rho = np.asarray(rho, dtype=complex)
    D = np.asarray(directions, dtype=complex)
    lam, V = np.linalg.eigh(0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2))))
    if boundary is not None:
        lo = float(np.min(lam[..., 0]))
        if lo <= boundary:
            raise BoundaryState(f"minimum eigenvalue {lo:.3e} <= {boundary:.0e}")
    else:
        lam = np.maximum(lam, 1e-18)
    Vh = np.conj(np.swapaxes(V, -1, -2))
    Dt = np.einsum("...ij,ajk,...kl->...ail", Vh, D, V)
    W = 1.0 / (lam[..., :, None] + lam[..., None, :])
    g = 0.5 * np.real(np.einsum("...ajk,...bkj,...jk->...ab", Dt, Dt, W))
    return 0.5 * (g + np.swapaxes(g, -1, -2))


def bures_tensor(chart, params, convention: str = "bures") -> MetricTensor:
    """Bures (or SD) metric tensor in ``chart`` at the point ``params``."""
    chart = Chart(chart)
    p = np.asarray(params, dtype=float)
    rho = states.to_matrix(chart, p, check=False)
    _, dirs = states.chart_affine(chart, rho.shape[0])
    g = tensor_from_directions(rho, dirs) * CONVENTION_FACTOR[convention]
    return MetricTensor(chart.value, p, g, convention, np.linalg.eigvalsh(g))


def tensor_at_mixed(chart, n: int = 4, convention: str = "bures") -> MetricTensor:
    return bures_tensor(chart, states.maximally_mixed_point(chart, n).params, convention)


def fd_oracle(chart, params, direction, eps: float = 1e-5) -> float:
    """Finite-difference estimate of ``u^T g u`` from Bures distances alone.

    Uses the symmetric pair ``x -/+ eps*u/2`` (even in eps) and one
    Richardson step over eps and eps/2, which cancels the O(eps^2) term.
    """
    chart = Chart(chart)
    x = np.asarray(params, dtype=float)
    u = np.asarray(direction, dtype=float)
    if not np.any(u):
        return 0.0

    def q(h):
        a = states.to_matrix(chart, x - 0.5 * h * u, check=False)
        b = states.to_matrix(chart, x + 0.5 * h * u, check=False)
        for r in (a, b):
            if linalg.eigvalsh(r)[0] <= BOUNDARY_EIG:
                raise BoundaryState("finite-difference stencil leaves the interior")
        return bures_distance_sq(a, b) / h**2

    return (4.0 * q(eps / 2) - q(eps)) / 3.0


def volume_element(g) -> float:
    """sqrt(det g) as a product of eigenvalues; 0 if g is singular."""
    if isinstance(g, MetricTensor):
        w = g.eigenvalues
    else:
        w = np.linalg.eigvalsh(np.asarray(g, dtype=float))
    if w[0] <= 0:
        return 0.0
    return float(np.prod(np.sqrt(w)))


def fit_scale(reference, computed) -> float:
    """Least-squares factor s minimizing |reference - s * computed|."""
    r = np.ravel(np.asarray(reference, dtype=float))
    c = np.ravel(np.asarray(computed, dtype=float))
    return float(r @ c / (c @ c))


@dataclass(frozen=True)
class DiagonalChart:
    """Orthonormal rotation of the weight chart that diagonalizes g at I_N."""

    eigenvalues: np.ndarray
    rotation: np.ndarray  # columns: eigenvectors of g in weight space
    directions: np.ndarray  # new direction matrices E_k = sum_i V_ik D_i
    constant: np.ndarray  # offset matrix of the expansion
    v_at_mixed: np.ndarray
    transformed: np.ndarray  # V^T g V

    def nonzero_coordinates(self, atol: float = 1e-12) -> np.ndarray:
        return np.flatnonzero(np.abs(self.v_at_mixed) > atol)

    def rescaled_v(self, norm: float = 2.0) -> np.ndarray:
        """Coordinates after rescaling each direction to Tr[E_k^2] = norm."""
        self_ip = np.real(np.einsum("kij,kji->k", self.directions, self.directions))
        return self.v_at_mixed * np.sqrt(self_ip / norm)


def diagonalize_chart(n: int = 4) -> DiagonalChart:
    """Rotate the convex-weight chart onto the eigenbasis of g at I_N."""
    T = tensor_at_mixed(Chart.WEIGHTS, n)
    w, V = np.linalg.eigh(T.g)
    offset, dirs = states.chart_affine(Chart.WEIGHTS, n)
    E = np.tensordot(V.T, dirs, axes=1)
    v0 = V.T @ T.params
    return DiagonalChart(w, V, E, np.array(offset), v0, V.T @ T.g @ V)
