"""Two-dimensional sections ``rho = I/4 + (x l_a + y l_b)/2`` of two-qubit
state space: domains, separable subsets, Euclidean areas and Bures volumes.

Both the domain and its separable subset are convex (minimum eigenvalues of
affine matrix families are concave), so every vertical line meets them in one
interval. Interval ends are exact roots of ``det(A + yB) = 0`` from a
generalized eigenproblem; the Bures element is integrated across each slice
with tanh-sinh quadrature, which absorbs the inverse-square-root blow-up at the
boundary, and the slice integrals are integrated over x adaptively.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate as sp_integrate
from scipy import linalg as sp_linalg

from . import linalg, metrics, quadrature, states
from .errors import BoundaryState, IoFailure, NoConvergence, OutsideDomain, ValidationFailure
from .separability import PT_THRESHOLD, min_pt_eigenvalues

BOX = 1.25
INSIDE_TOL = -1e-12
OUTSIDE, SEPARABLE, ENTANGLED = 0, 1, 2

NAMED = {"C": (6, 15), "G": (6, 8), "E": (3, 9)}
# closed-form Euclidean areas of the named domains, used for calibration
DOMAIN_AREAS = {
    "C": 2**2.5 / 3**1.5,
    "G": 9 * math.pi * math.sqrt(1.5) / 32,
    "E": 2 * math.sqrt(2) / 3,
}


@dataclass(frozen=True)
class SectionScenario:
    name: str
    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b or not (1 <= self.a <= 15 and 1 <= self.b <= 15):
            raise ValueError(f"generator indices must be distinct and in 1..15, got {self.a}, {self.b}")

    @classmethod
    def parse(cls, spec: str) -> "SectionScenario":
        """``C``, ``G``, ``E`` or ``custom:a,b``."""
        if spec in NAMED:
            return cls(spec, *NAMED[spec])
        if spec.startswith("custom:"):
            a, b = (int(s) for s in spec[len("custom:"):].split(","))
            return cls(f"custom:{a},{b}", a, b)
        raise ValueError(f"unknown scenario {spec!r}")

    @property
    def directions(self) -> np.ndarray:
        G = states.generator_basis(4)
        return np.array([G[self.a - 1] / 2, G[self.b - 1] / 2])

    def matrices(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)[..., None, None]
        y = np.asarray(y, dtype=float)[..., None, None]
        Da, Db = self.directions
        return np.eye(4) / 4 + x * Da + y * Db


def section_state(scenario: SectionScenario, x: float, y: float) -> np.ndarray | None:
    """The state at (x, y), or None when the point is outside the domain."""
    rho = scenario.matrices(x, y)
    return rho if linalg.eigvalsh(rho)[0] >= INSIDE_TOL else None


def classify_points(scenario: SectionScenario, x, y) -> np.ndarray:
    rho = scenario.matrices(x, y)
    lo = np.linalg.eigvalsh(rho)[..., 0]
    pt = min_pt_eigenvalues(rho)
    return np.where(lo < INSIDE_TOL, OUTSIDE, np.where(pt >= PT_THRESHOLD, SEPARABLE, ENTANGLED)).astype(np.int8)


def grid_centers(resolution: int) -> np.ndarray:
    h = 2 * BOX / resolution
    return -BOX + h * (np.arange(resolution) + 0.5)


def classify_grid(scenario: SectionScenario, resolution: int = 256) -> np.ndarray:
    """Cell-center classification over [-BOX, BOX]^2; index [iy, ix]."""
    if resolution < 64:
        raise ValueError("resolution must be >= 64")
    c = grid_centers(resolution)
    X, Y = np.meshgrid(c, c)
    return classify_points(scenario, X, Y)


def _level_functions(scenario: SectionScenario, X, Y) -> tuple[np.ndarray, np.ndarray]:
    """Minimum eigenvalue of rho (domain) and of min(rho, rho^PT) (separable)."""
    rho = scenario.matrices(X, Y)
    lo = np.linalg.eigvalsh(rho)[..., 0]
    return lo, np.minimum(lo, min_pt_eigenvalues(rho))


def _square_coverage(phi, gx, gy) -> np.ndarray:
    """Fraction of the unit square around each center where the linear
    function ``phi + gx*u + gy*v`` (|u|, |v| <= 1/2) is nonnegative."""
    a = np.maximum(np.abs(gx), 1e-9)
    b = np.maximum(np.abs(gy), 1e-9)
    hi = np.maximum(a, b)
    a, b = np.maximum(a, 1e-6 * hi), np.maximum(b, 1e-6 * hi)

    def ramp(s):
        return np.maximum(s, 0.0) ** 2

    # area where a u + b v <= -phi, then take the complement
    t = -phi
    below = (ramp(t + (a + b) / 2) - ramp(t + (b - a) / 2) - ramp(t + (a - b) / 2) + ramp(t - (a + b) / 2)) / (2 * a * b)
    return 1.0 - np.clip(below, 0.0, 1.0)


def grid_areas(scenario: SectionScenario, resolution: int) -> tuple[float, float]:
    """Grid estimate of the (domain, separable) areas.

    Each cell contributes the part of it on the nonnegative side of the
    linearized level function (minimum eigenvalue, gradient by central
    differences), so smooth boundaries cost O(h^2) instead of the O(h) of
    plain cell counting.
    """
    if resolution < 64:
        raise ValueError("resolution must be >= 64")
    c = grid_centers(resolution)
    X, Y = np.meshgrid(c, c)
    areas = []
    for phi in _level_functions(scenario, X, Y):
        gy, gx = np.gradient(phi)  # per cell
        areas.append(float(np.sum(_square_coverage(phi, gx, gy))) * (2 * BOX / resolution) ** 2)
    return areas[0], areas[1]


# -- slices -------------------------------------------------------------------

def _affine_roots(A: np.ndarray, B: np.ndarray) -> list[float]:
    w = sp_linalg.eigvals(A, -B)
    w = w[np.isfinite(w)]
    return sorted(float(z.real) for z in w if abs(z.imag) <= 1e-9 * max(1.0, abs(z)))


def _min_eigs(pairs, y) -> float:
    return min(linalg.eigvalsh(A + y * B)[0] for A, B in pairs)


def psd_interval(pairs, lo: float = -BOX, hi: float = BOX) -> tuple[float, float] | None:
    """Interval of y in [lo, hi] where every ``A + y B`` in ``pairs`` is PSD."""
    cuts = [lo, hi]
    for A, B in pairs:
        cuts += [r for r in _affine_roots(A, B) if lo < r < hi]
    cuts = sorted(set(cuts))
    good = []
    for p, q in zip(cuts, cuts[1:]):
        if q - p > 0 and _min_eigs(pairs, 0.5 * (p + q)) >= -1e-13:
            good.append((p, q))
    if not good:
        return None
    # convexity: feasible segments are contiguous
    return good[0][0], good[-1][1]


class Region:
    """The domain (``separable=False``) or its separable subset."""

    def __init__(self, scenario: SectionScenario, separable: bool):
        self.scenario = scenario
        self.separable = separable
        self._x_range = None

    def _pairs(self, x: float):
        Da, Db = self.scenario.directions
        A = np.eye(4) / 4 + x * Da
        pairs = [(A, Db)]
        if self.separable:
            pairs.append((linalg.partial_transpose(A), linalg.partial_transpose(Db)))
        return pairs

    def slice(self, x: float) -> tuple[float, float] | None:
        return psd_interval(self._pairs(x))

    def x_range(self) -> tuple[float, float]:
        """Projection of the region on the x axis, by bisection from the
        interior point x = 0 (the maximally mixed state)."""
        if self._x_range is None:
            ends = []
            for edge in (-BOX, BOX):
                inner, outer = 0.0, edge
                if self.slice(outer) is not None:
                    ends.append(outer)
                    continue
                for _ in range(200):
                    mid = 0.5 * (inner + outer)
                    if mid in (inner, outer):
                        break
                    if self.slice(mid) is None:
                        outer = mid
                    else:
                        inner = mid
                ends.append(inner)
            self._x_range = (ends[0], ends[1])
        return self._x_range


def _quad(f, a, b, rtol):
    val, err, *rest = sp_integrate.quad(f, a, b, epsabs=0.0, epsrel=rtol, limit=400, full_output=1)
    if len(rest) >= 2 and rest[1] and "roundoff" not in rest[1] and err > 10 * rtol * abs(val):
        raise NoConvergence(rest[1].strip().splitlines()[0])
    return val, err


def region_area(region: Region, rtol: float = 1e-10) -> tuple[float, float]:
    def width(x):
        iv = region.slice(x)
        return 0.0 if iv is None else iv[1] - iv[0]

    return _quad(width, *region.x_range(), rtol)


def element_values(scenario: SectionScenario, x, y, convention: str = "bures") -> np.ndarray:
    """Bures area element sqrt(det g) at arrays of interior points; no
    boundary guard (eigenvalues floored), for quadrature and grids."""
    rho = scenario.matrices(x, y)
    g = metrics.tensor_from_directions(rho, scenario.directions, boundary=None)
    g = g * metrics.CONVENTION_FACTOR[convention]
    det = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] ** 2
    return np.sqrt(np.clip(det, 0.0, None))


def bures_section_element(scenario: SectionScenario, x: float, y: float, convention: str = "bures") -> float:
    rho = scenario.matrices(x, y)
    lo = linalg.eigvalsh(rho)[0]
    if lo < INSIDE_TOL:
        raise OutsideDomain(f"({x}, {y}) lies outside the {scenario.name} domain")
    if lo <= metrics.BOUNDARY_EIG:
        raise BoundaryState(f"minimum eigenvalue {lo:.3e} at ({x}, {y})")
    g = metrics.tensor_from_directions(rho, scenario.directions) * metrics.CONVENTION_FACTOR[convention]
    return float(np.sqrt(max(np.linalg.det(g), 0.0)))


def region_volume(region: Region, rtol: float = 1e-6, convention: str = "bures") -> tuple[float, float]:
    """Bures area of a region: (value, error estimate)."""
    sc = region.scenario
    inner_errs = []

    def slice_integral(x):
        iv = region.slice(x)
        if iv is None:
            return 0.0
        val, err = quadrature.integrate(lambda y: element_values(sc, x, y, convention), iv[0], iv[1],
                                        rtol=rtol * 0.05, max_level=11)
        inner_errs.append((x, err))
        return val

    val, err = _quad(slice_integral, *region.x_range(), rtol)
    # inner errors perturb the outer integrand; integrate their profile
    pts = np.array(sorted(inner_errs)) if inner_errs else np.zeros((1, 2))
    inner = float(np.trapezoid(pts[:, 1], pts[:, 0])) if len(pts) > 1 else 0.0
    return val, err + inner


# -- reports ------------------------------------------------------------------

@dataclass
class SectionReport:
    scenario: str
    generators: tuple[int, int]
    euclidean_area_total: float
    euclidean_area_sep: float
    bures_volume_total: float
    bures_volume_sep: float
    probability_euclidean: float
    probability_bures: float
    convention: str = "bures"
    errors: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = asdict(self)
        d["generators"] = list(self.generators)
        return d


def euclidean_areas(scenario: SectionScenario, rtol: float = 1e-5) -> tuple[tuple[float, float], tuple[float, float]]:
    """((total, separable), (total_err, separable_err))."""
    t, te = region_area(Region(scenario, False), min(rtol, 1e-8))
    s, se = region_area(Region(scenario, True), min(rtol, 1e-8))
    return (t, s), (te, se)


def bures_volumes(scenario: SectionScenario, rtol: float = 1e-6, convention: str = "bures",
                  refine_check: bool = False, threads: int = 1) -> SectionReport:
    """Euclidean areas, Bures volumes and both probabilities of separability.

    With ``refine_check`` the volumes are recomputed at ``rtol / 10`` and the
    relative change is stored under ``errors['refinement_*']``; the finer
    values are reported.
    """
    (ta, sa), (tae, sae) = euclidean_areas(scenario)
    regions = [Region(scenario, False), Region(scenario, True)]
    levels = [rtol, rtol / 10] if refine_check else [rtol]
    results = []
    for tol in levels:
        with ThreadPoolExecutor(max_workers=max(1, min(threads, 2))) as pool:
            results.append(list(pool.map(lambda r: region_volume(r, tol, convention), regions)))
    (tv, tve), (sv, sve) = results[-1]
    errors = {"euclidean_total": tae, "euclidean_sep": sae, "bures_total": tve, "bures_sep": sve}
    if refine_check:
        (t0, _), (s0, _) = results[0]
        errors["refinement_total"] = abs(tv - t0) / abs(tv)
        errors["refinement_sep"] = abs(sv - s0) / abs(sv)
    return SectionReport(scenario.name, (scenario.a, scenario.b), ta, sa, tv, sv, sa / ta, sv / tv,
                         convention, errors)


def calibrate(scenario: SectionScenario, rtol: float = 1e-6) -> float:
    """Check a named scenario's domain area against its closed form.

    Guards the generator ordering: a wrong table gives the wrong shapes.
    Returns the relative deviation; raises ValidationFailure above rtol.
    """
    if scenario.name not in DOMAIN_AREAS:
        return 0.0
    area, _ = region_area(Region(scenario, False))
    dev = abs(area - DOMAIN_AREAS[scenario.name]) / DOMAIN_AREAS[scenario.name]
    if dev > rtol:
        raise ValidationFailure(f"scenario {scenario.name}: domain area {area!r} deviates by {dev:.2e}")
    return dev


def boundary_samples(scenario: SectionScenario, count: int = 64, separable: bool = False) -> np.ndarray:
    """Points on the region boundary from ``count`` interior slices."""
    region = Region(scenario, separable)
    a, b = region.x_range()
    pts = []
    for x in np.linspace(a, b, count + 2)[1:-1]:
        iv = region.slice(x)
        if iv is not None:
            pts += [(x, iv[0]), (x, iv[1])]
    return np.array(pts)


def element_grid(scenario: SectionScenario, resolution: int, convention: str = "bures") -> tuple[np.ndarray, np.ndarray]:
    """(centers, values[iy, ix]) with NaN outside the domain."""
    c = grid_centers(resolution)
    X, Y = np.meshgrid(c, c)
    kinds = classify_points(scenario, X, Y)
    vals = np.full(X.shape, np.nan)
    inside = kinds != OUTSIDE
    vals[inside] = element_values(scenario, X[inside], Y[inside], convention)
    return c, vals


def emit_element_grid(scenario: SectionScenario, resolution: int, path, convention: str = "bures",
                      header_comment: str | None = None) -> None:
    """Write the element grid as CSV rows ``x,y,value`` (y-major order)."""
    c, vals = element_grid(scenario, resolution, convention)
    try:
        with open(path, "w", newline="") as fh:
            if header_comment:
                fh.write(f"# {header_comment}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "y", "value"])
            for iy, y in enumerate(c):
                for ix, x in enumerate(c):
                    w.writerow([format(x, ".17g"), format(y, ".17g"), format(vals[iy, ix], ".17g")])
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
