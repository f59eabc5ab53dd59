"""Command-line front end: ``sepgeom <command> [options]``.

Every command writes JSON/CSV artifacts (and PNG figures unless
``--no-figures``) into ``--out``. Exit codes: 0 success, 1 internal error,
2 validation failure (bad input or failed self-check); errors are reported as JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import geometry, linalg, metrics, reference, sections, states
from . import report as rpt
from .errors import IoFailure, SepGeomError, UnknownClass, ValidationFailure
from .states import Chart

BASES = ("tetra16", "tetra64", "pauli36")
METRICS = ("bures", "hs", "wy", "trace-product")


@dataclass(frozen=True)
class RunConfig:
    command: str
    out: str = "."
    basis: str = "tetra16"
    metric: str = "bures"
    chart: str = "weights"
    scenario: str = "C"
    resolution: int | None = None
    tol: float | None = None
    threads: int = 1
    seed: int = 0
    convention: str = "bures"
    class_index: int | None = None
    at: str = "mixed"
    qubits: int = 2
    refine: bool = False
    figures: bool = True

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise ValidationFailure("--tol must be > 0")
        if self.resolution is not None and self.resolution < 3:
            raise ValidationFailure("--resolution must be >= 3")
        if self.threads < 1:
            raise ValidationFailure("--threads must be >= 1")

    def hashed(self) -> dict:
        """Fields that determine the artifact contents."""
        d = asdict(self)
        d.pop("out")
        d.pop("threads")
        return d


def _meta(cfg: RunConfig) -> dict:
    return rpt.meta_block(cfg.hashed(), cfg.convention)


def _out(cfg: RunConfig) -> Path:
    p = Path(cfg.out)
    try:
        p.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create {p}: {exc}") from exc
    return p


# -- constants -----------------------------------------------------------------

CONSTANTS = [
    ("separable_sd_volume", "(sqrt(2)-1)/3", (math.sqrt(2) - 1) / 3),
    ("separable_bures_volume", "2^-15 (sqrt(2)-1)/3", 2.0**-15 * (math.sqrt(2) - 1) / 3),
    ("total_bures_volume", "pi^8/165150720", math.pi**8 / 165150720),
    ("total_hs_volume", "pi^6/851350500", math.pi**6 / 851350500),
    ("bures_separability_probability", "1680 (sqrt(2)-1)/pi^8", 1680 * (math.sqrt(2) - 1) / math.pi**8),
]


def constants_report() -> list[dict]:
    return [{"name": n, "expression": e, "value": v, "rendered": format(v, ".15g")} for n, e, v in CONSTANTS]


def cmd_constants(cfg: RunConfig) -> list[Path]:
    rows = constants_report()
    path = rpt.write_json(_out(cfg) / "constants.json", {"constants": rows}, _meta(cfg))
    for r in rows:
        print(f"{r['name']:32s} {r['rendered']:>22s}  = {r['expression']}")
    return [path]


# -- basis / graph ---------------------------------------------------------------

def basis_payload(basis: states.ProductBasis, tol: float) -> dict:
    mixed = np.eye(basis.dim) / basis.dim
    to_mixed = {}
    for m in ("bures", "hs", "wy"):
        d = [metrics.DISTANCES[m](r, mixed) for r in basis.members]
        to_mixed[m] = {"min": min(d), "max": max(d)}
    payload = {
        "basis": basis.to_json(),
        "classes": {m: geometry.classify_pairs(basis, m, tol).to_json() for m in METRICS},
        "distance_to_mixed": to_mixed,
    }
    if basis.kind == "tetra16":
        payload["mixtures"] = {}
        for leave in (1, 2):
            mix = geometry.leave_out_mixtures(basis, leave)
            payload["mixtures"][f"leave{leave}"] = {
                "bures": geometry._bin([m.bures for m in mix], tol),
                "hs": geometry._bin([m.hs for m in mix], tol),
            }
    return payload


def cmd_basis(cfg: RunConfig) -> list[Path]:
    basis = states.basis_by_name(cfg.basis)
    tol = cfg.tol or geometry.CLASS_TOL
    path = rpt.write_json(_out(cfg) / f"basis_{cfg.basis}.json", basis_payload(basis, tol), _meta(cfg))
    return [path]


def cmd_graph(cfg: RunConfig) -> list[Path]:
    basis = states.basis_by_name(cfg.basis)
    k = cfg.class_index or 1
    g = geometry.distance_graph(basis, cfg.metric, class_index=k, tol=cfg.tol or geometry.CLASS_TOL)
    out, meta = _out(cfg), _meta(cfg)
    stem = f"graph_{cfg.basis}_{cfg.metric}_class{k}"
    files = [
        rpt.write_json(out / f"{stem}.json", {"graph": g.to_json(), "degrees": g.degrees()}, meta),
        rpt.write_csv(out / f"{stem}_edges.csv", ["i", "j"], g.edges, meta),
    ]
    if cfg.figures:
        from . import plotting
        files.append(plotting.plot_graph(g, out / f"{stem}.png"))
    print(f"{len(g.edges)} edges at {cfg.metric} distance {g.value:.12g}")
    return files


# -- tensor ----------------------------------------------------------------------

def _tensor_point(cfg: RunConfig, chart: Chart, n: int) -> np.ndarray:
    if cfg.at == "mixed":
        return states.maximally_mixed_point(chart, n).params
    if cfg.at == "random":
        rng = np.random.default_rng(cfg.seed)
        G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        W = G @ G.conj().T
        rho = 0.5 * W / np.trace(W).real + 0.5 * np.eye(n) / n
        return states.from_matrix(rho, chart).params
    try:
        return np.array([float(s) for s in cfg.at.split(",")])
    except ValueError as exc:
        raise ValidationFailure(f"--at expects 'mixed', 'random' or a comma list, got {cfg.at!r}") from exc


def tensor_payload(cfg: RunConfig) -> tuple[dict, metrics.MetricTensor]:
    chart = Chart(cfg.chart)
    n = 2**cfg.qubits
    p = _tensor_point(cfg, chart, n)
    if len(p) != n * n - 1:
        raise ValidationFailure(f"{chart.value} chart at N={n} needs {n * n - 1} parameters, got {len(p)}")
    T = metrics.bures_tensor(chart, p, cfg.convention)
    rtol = cfg.tol or linalg.CLUSTER_RTOL
    off = T.g - np.diag(np.diag(T.g))
    payload = {
        "tensor": T.to_json(rtol),
        "dimension": T.dim,
        "trace": float(np.trace(T.g)),
        "volume_element": metrics.volume_element(T),
        "log10_volume_element": float(np.sum(0.5 * np.log10(T.eigenvalues))) if T.eigenvalues[0] > 0 else None,
        "max_offdiagonal": float(np.max(np.abs(off))),
        "is_diagonal": bool(np.max(np.abs(off)) <= 1e-12 * np.max(np.abs(T.g))),
    }
    if cfg.at == "mixed" and cfg.convention == "bures":
        if n == 4:
            payload["reference_comparison"] = reference.tensor_comparison_i4()
            if chart is Chart.WEIGHTS:
                D = metrics.diagonalize_chart(4)
                idx = D.nonzero_coordinates()
                payload["diagonal_chart"] = {
                    "eigenvalues": D.eigenvalues,
                    "nonzero_v_indices": idx,
                    "v_at_mixed": D.v_at_mixed[idx],
                    "v_rescaled_trace2": D.rescaled_v()[idx],
                }
        elif n == 8 and chart is Chart.WEIGHTS:
            payload["reference_comparison"] = reference.tensor_comparison_i8()
            payload["cubic_root_ratios"] = reference.cubic_root_ratios()
    return payload, T


def cmd_tensor(cfg: RunConfig) -> list[Path]:
    payload, T = tensor_payload(cfg)
    out, meta = _out(cfg), _meta(cfg)
    stem = f"tensor_{cfg.chart}_n{2**cfg.qubits}_{cfg.at if cfg.at in ('mixed', 'random') else 'point'}"
    files = [rpt.write_json(out / f"{stem}.json", payload, meta)]
    if cfg.figures:
        from . import plotting
        files.append(plotting.plot_spectrum(T.eigenvalues, out / f"{stem}_spectrum.png",
                                            f"{cfg.chart} chart, N={2**cfg.qubits}"))
    print(" ".join(f"{c['value']:.10g}x{c['multiplicity']}" for c in payload["tensor"]["eigenvalue_clusters"]))
    return files


# -- scan ------------------------------------------------------------------------

def cmd_scan(cfg: RunConfig) -> list[Path]:
    scan = geometry.w1_path_scan(cfg.resolution or 129, cfg.convention)
    out, meta = _out(cfg), _meta(cfg)
    files = [
        rpt.write_csv(out / "w1_scan.csv", ["w1", "volume_element", "trace"], scan.rows(), meta),
        rpt.write_json(out / "w1_scan.json", {"summary": reference.path_comparison(scan)}, meta),
    ]
    if cfg.figures:
        from . import plotting
        files.append(plotting.plot_path_scan(scan, out / "w1_scan.png"))
    return files


# -- section ---------------------------------------------------------------------

def section_payload(cfg: RunConfig, scenario: sections.SectionScenario) -> dict:
    dev = sections.calibrate(scenario)
    rep = sections.bures_volumes(scenario, cfg.tol or 1e-6, cfg.convention, refine_check=cfg.refine,
                                 threads=cfg.threads)
    payload = {"report": rep.to_json(), "calibration_deviation": dev}
    if scenario.name == "C" and cfg.convention == "bures":
        s, res = reference.shared_scale_fit(reference.SECTION_C_VOLUMES,
                                            (rep.bures_volume_total, rep.bures_volume_sep))
        payload["published_comparison"] = {
            "volumes": reference.SECTION_C_VOLUMES,
            "probability": reference.SECTION_C_PROBABILITY,
            "shared_scale": s,
            "relative_residuals": res,
        }
    return payload


def cmd_section(cfg: RunConfig) -> list[Path]:
    try:
        scenario = sections.SectionScenario.parse(cfg.scenario)
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc
    payload = section_payload(cfg, scenario)
    out, meta = _out(cfg), _meta(cfg)
    stem = "section_" + scenario.name.replace(":", "_").replace(",", "_")
    res = cfg.resolution or 128
    files = [rpt.write_json(out / f"{stem}.json", payload, meta)]
    grid = out / f"{stem}_element.csv"
    sections.emit_element_grid(scenario, res, grid, cfg.convention, rpt.meta_comment(meta))
    files.append(grid)
    if cfg.figures:
        from . import plotting
        c, vals = sections.element_grid(scenario, res, cfg.convention)
        kinds = sections.classify_grid(scenario, max(res, 64)) if res >= 64 else None
        if kinds is None:
            X, Y = np.meshgrid(c, c)
            kinds = sections.classify_points(scenario, X, Y)
        bnd = sections.boundary_samples(scenario, 200, separable=True)
        files.append(plotting.plot_section(c, kinds, vals, out / f"{stem}.png", f"scenario {scenario.name}", bnd))
    r = payload["report"]
    print(f"{scenario.name}: euclidean {r['probability_euclidean']:.8g}  bures {r['probability_bures']:.8g}")
    return files


COMMANDS = {
    "constants": cmd_constants,
    "basis": cmd_basis,
    "graph": cmd_graph,
    "tensor": cmd_tensor,
    "scan": cmd_scan,
    "section": cmd_section,
}


def default_threads() -> int:
    env = os.environ.get("SEPGEOM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--threads", type=int, default=None, help="worker threads (env SEPGEOM_THREADS)")
    common.add_argument("--convention", choices=("bures", "sd"), default="bures")
    common.add_argument("--tol", type=float, default=None,
                        help="class tolerance (basis/graph), cluster rtol (tensor) or quadrature rtol (section)")
    common.add_argument("--resolution", type=int, default=None, help="scan points or section grid size")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--no-figures", dest="figures", action="store_false")

    p = argparse.ArgumentParser(prog="sepgeom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("constants", parents=[common], help="closed-form volume constants")
    b = sub.add_parser("basis", parents=[common], help="basis members and distance classes")
    b.add_argument("--basis", choices=BASES, default="tetra16")
    g = sub.add_parser("graph", parents=[common], help="distance-class graph")
    g.add_argument("--basis", choices=BASES, default="tetra16")
    g.add_argument("--metric", choices=METRICS, default="bures")
    g.add_argument("--class", dest="class_index", type=int, default=1, help="1-based class (ascending)")
    t = sub.add_parser("tensor", parents=[common], help="metric tensor at a point")
    t.add_argument("--chart", choices=[c.value for c in Chart], default="weights")
    t.add_argument("--at", default="mixed", help="'mixed', 'random' or comma-separated parameters")
    t.add_argument("--qubits", type=int, choices=(2, 3), default=2)
    sub.add_parser("scan", parents=[common], help="volume element along the w1 path")
    s = sub.add_parser("section", parents=[common], help="two-generator section report")
    s.add_argument("--scenario", default="C", help="C, G, E or custom:a,b")
    s.add_argument("--refine", action="store_true", help="repeat at tol/10 and report the change")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    d["threads"] = ns.threads if ns.threads is not None else default_threads()
    return RunConfig(**d)


def error_json(exc: BaseException) -> str:
    code = exc.code if isinstance(exc, SepGeomError) else "internal_error"
    return json.dumps({"error": code, "type": type(exc).__name__,
                       "message": str(exc)})


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        COMMANDS[cfg.command](cfg)
    except (ValidationFailure, UnknownClass) as exc:
        print(error_json(exc), file=sys.stderr)
        return 2
    except (SepGeomError, ValueError, KeyError, OSError) as exc:
        print(error_json(exc), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
