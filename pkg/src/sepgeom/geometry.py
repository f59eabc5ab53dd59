"""Pairwise distance classes, distance graphs, ball volumes, mixtures and
the w1 path scan through the maximally mixed state."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import linalg, metrics, states
from .errors import ClassCollision, UnknownClass
from .states import Chart, ProductBasis

CLASS_TOL = 1e-9


@dataclass(frozen=True)
class DistanceClassification:
    metric: str
    classes: list[tuple[float, int]]  # ascending distance value
    tol: float

    def values(self) -> list[float]:
        return [v for v, _ in self.classes]

    def to_json(self) -> dict:
        return {"metric": self.metric, "tol": self.tol,
                "classes": [{"value": v, "pairs": c} for v, c in self.classes]}


def pair_values(basis: ProductBasis, metric: str = "bures") -> dict[tuple[int, int], float]:
    f = metrics.DISTANCES[metric]
    return {(i, j): f(basis.members[i], basis.members[j])
            for i, j in itertools.combinations(range(len(basis)), 2)}


def _bin(values, tol):
    classes: list[list[float]] = []
    for v in sorted(values):
        if classes and v - classes[-1][0] <= tol:
            classes[-1].append(v)
        else:
            classes.append([v])
    return [(float(np.mean(c)), len(c)) for c in classes]


def classify_pairs(basis: ProductBasis, metric: str = "bures", tol: float = CLASS_TOL) -> DistanceClassification:
    """Bin all unordered member pairs by their distance (absolute ``tol``)."""
    classes = _bin(pair_values(basis, metric).values(), tol)
    vals = [v for v, _ in classes]
    for a, b in zip(vals, vals[1:]):
        if b - a <= 10 * tol:
            raise ClassCollision(f"classes {a!r} and {b!r} closer than 10 x tol")
    return DistanceClassification(metric, classes, tol)


@dataclass(frozen=True)
class DistanceGraph:
    nodes: int
    value: float
    edges: list[tuple[int, int]]
    adjacency: np.ndarray
    spectrum: metrics.SpectrumReport
    groups: list[list[int]]  # layout hint: members sharing a first factor

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "class_value": self.value,
                "edges": [list(e) for e in self.edges],
                "spectrum": self.spectrum.to_json(), "layout_groups": self.groups}


def distance_graph(basis: ProductBasis, metric: str = "bures", value: float | None = None, *,
                   class_index: int | None = None, tol: float = CLASS_TOL,
                   rtol: float = 1e-8) -> DistanceGraph:
    """Graph joining members whose distance equals one class value.

    Select the class either by ``value`` or by 1-based ``class_index``
    (classes sorted by ascending value).
    """
    cls = classify_pairs(basis, metric, tol)
    vals = cls.values()
    if class_index is not None:
        if not 1 <= class_index <= len(vals):
            raise UnknownClass(f"class {class_index} not in 1..{len(vals)}")
        value = vals[class_index - 1]
    elif value is None or not any(abs(v - value) <= 10 * tol for v in vals):
        raise UnknownClass(f"no distance class at {value!r}; classes are {vals}")
    n = len(basis)
    A = np.zeros((n, n), dtype=int)
    edges = []
    for (i, j), d in pair_values(basis, metric).items():
        if abs(d - value) <= 10 * tol:
            A[i, j] = A[j, i] = 1
            edges.append((i, j))
    spec = metrics.spectrum_report(linalg.hermitian_eigensystem(A).eigenvalues, rtol)
    groups: dict[int, list[int]] = {}
    for idx, f in enumerate(basis.factors):
        groups.setdefault(f[0], []).append(idx)
    return DistanceGraph(n, float(value), edges, A, spec, [groups[k] for k in sorted(groups)])


def euclidean_ball_volume(d: int, r: float) -> float:
    return math.pi ** (d / 2) * r**d / math.gamma(d / 2 + 1)


def andai_ball_volume(n: int, r: float, curvature: float) -> tuple[float, bool]:
    """Small-radius geodesic ball volume around an n x n state, truncated
    after the scalar-curvature correction.

    Returns ``(volume, valid)``; ``valid`` is False when the truncated
    expansion has gone negative.
    """
    d = n * n - 1
    lead = euclidean_ball_volume(d, r)
    v = lead * (1 - curvature * r * r / (6 * (n * n + 1)))
    return v, v >= 0


def wy_scalar_curvature(n: int) -> float:
    return (n * n - 1) * (n * n - 2) / 4


@dataclass(frozen=True)
class Mixture:
    left_out: tuple[int, ...]
    rho: np.ndarray
    bures: float
    hs: float


def leave_out_mixtures(basis: ProductBasis | None = None, leave: int = 1) -> list[Mixture]:
    """Equal-weight mixtures of all but ``leave`` members, with their
    Bures and HS distances to the maximally mixed state."""
    basis = basis or states.tetra_basis(2)
    n, dim = len(basis), basis.dim
    mixed = np.eye(dim) / dim
    out = []
    for omit in itertools.combinations(range(n), leave):
        keep = [i for i in range(n) if i not in omit]
        rho = basis.members[keep].mean(axis=0)
        out.append(Mixture(omit, rho, metrics.bures_distance(rho, mixed), metrics.hs_distance(rho, mixed)))
    return out


@dataclass(frozen=True)
class PathScan:
    w1: np.ndarray
    volume_element: np.ndarray  # naive-chart volume element
    trace: np.ndarray  # naive-chart tensor trace
    endpoint_distance: float
    endpoint_distance_sq: float
    integral: float

    @property
    def argmax(self) -> float:
        return float(self.w1[int(np.argmax(self.volume_element))])

    def rows(self):
        return zip(self.w1, self.volume_element, self.trace)


def path_point(w1: float) -> np.ndarray:
    w = np.full(15, 1 / 16)
    w[0] = w1
    return w


def w1_path_scan(resolution: int = 129, convention: str = "bures") -> PathScan:
    """Scan w1 over [0, 1/8] with w2..w15 = 1/16 and w16 = 1/8 - w1.

    The element and trace are reported in the naive chart, where the
    element is the coordinate-independent density used for volumes; the
    integral uses composite Simpson over the grid.
    """
    if resolution < 3:
        raise ValueError("resolution must be >= 3")
    if resolution % 2 == 0:
        resolution += 1
    J, const, _ = states.jacobian(Chart.WEIGHTS, Chart.NAIVE)
    grid = np.linspace(0.0, 1 / 8, resolution)
    vol, tr = [], []
    for t in grid:
        naive = J @ path_point(t) + const
        T = metrics.bures_tensor(Chart.NAIVE, naive, convention)
        vol.append(metrics.volume_element(T))
        tr.append(float(np.trace(T.g)))
    vol = np.array(vol)
    a = states.to_matrix(Chart.WEIGHTS, path_point(0.0))
    b = states.to_matrix(Chart.WEIGHTS, path_point(1 / 8))
    return PathScan(grid, vol, np.array(tr), metrics.bures_distance(a, b), metrics.bures_distance_sq(a, b),
                    float(integrate.simpson(vol, x=grid)))
