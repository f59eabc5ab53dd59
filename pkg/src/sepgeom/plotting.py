"""Static matplotlib figures for the CLI artifacts (Agg backend, PNG).

Figures are saved without a ``Software`` tag so that repeated runs give
identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .errors import IoFailure  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 9,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "savefig.dpi": 120,
    "figure.dpi": 120,
}


def save(fig, path) -> Path:
    path = Path(path)
    try:
        fig.savefig(path, metadata={"Software": None})
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)
    return path


def graph_layout(groups: list[list[int]], nodes: int) -> np.ndarray:
    """Node positions: groups on a large circle, members on small ones."""
    pos = np.zeros((nodes, 2))
    ng = len(groups)
    r_small = np.sin(np.pi / max(ng, 2)) * 0.45 if ng > 1 else 1.0
    for gi, members in enumerate(groups):
        c = np.array([np.cos(2 * np.pi * gi / ng), np.sin(2 * np.pi * gi / ng)]) if ng > 1 else np.zeros(2)
        m = len(members)
        for k, idx in enumerate(members):
            t = 2 * np.pi * k / m + np.pi / 2
            pos[idx] = c + r_small * np.array([np.cos(t), np.sin(t)])
    return pos


def plot_graph(graph, path, title: str = "") -> Path:
    pos = graph_layout(graph.groups, graph.nodes)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 5))
        segs = [(pos[i], pos[j]) for i, j in graph.edges]
        ax.add_collection(LineCollection(segs, colors="0.35", linewidths=0.4))
        colors = np.zeros(graph.nodes)
        for gi, members in enumerate(graph.groups):
            colors[members] = gi
        ax.scatter(pos[:, 0], pos[:, 1], c=colors, cmap="tab10", s=22, zorder=3, edgecolors="k", linewidths=0.3)
        ax.set_aspect("equal")
        ax.set_axis_off()
        ax.set_title(title or f"{graph.nodes} nodes, {len(graph.edges)} edges, d = {graph.value:.6g}")
        fig.tight_layout()
        return save(fig, path)


def plot_path_scan(scan, path) -> Path:
    with plt.rc_context(STYLE):
        fig, (a1, a2) = plt.subplots(1, 2, figsize=(8, 3.2))
        a1.plot(scan.w1, scan.volume_element, "k-", lw=1)
        a1.axvline(1 / 16, color="0.6", ls=":", lw=0.8)
        a1.set_xlabel("$w_1$")
        a1.set_ylabel("volume element (naive chart)")
        a2.plot(scan.w1, scan.trace, "k-", lw=1)
        a2.axvline(1 / 16, color="0.6", ls=":", lw=0.8)
        a2.set_xlabel("$w_1$")
        a2.set_ylabel("tensor trace (naive chart)")
        fig.tight_layout()
        return save(fig, path)


def plot_section(centers, kinds, values, path, title: str = "", boundary=None) -> Path:
    """Region map (outside / separable / entangled) and log10 Bures element."""
    box = (centers[0] - 0.5 * (centers[1] - centers[0]), centers[-1] + 0.5 * (centers[1] - centers[0]))
    ext = (box[0], box[1], box[0], box[1])
    with plt.rc_context(STYLE):
        fig, (a1, a2) = plt.subplots(1, 2, figsize=(8.4, 3.8))
        cmap = ListedColormap(["white", "#9ecae1", "#fc9272"])
        a1.imshow(kinds, origin="lower", extent=ext, cmap=cmap, vmin=0, vmax=2, interpolation="nearest")
        a1.set_title("separable (blue) / entangled (red)")
        with np.errstate(divide="ignore", invalid="ignore"):
            lv = np.log10(values)
        im = a2.imshow(lv, origin="lower", extent=ext, cmap="viridis", interpolation="nearest")
        fig.colorbar(im, ax=a2, label="log10 element")
        if boundary is not None and len(boundary):
            for ax in (a1, a2):
                ax.plot(boundary[:, 0], boundary[:, 1], "k.", ms=0.8)
        for ax in (a1, a2):
            ax.set_xlabel("x")
            ax.set_ylabel("y")
            ax.set_aspect("equal")
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        return save(fig, path)


def plot_spectrum(eigenvalues, path, title: str = "") -> Path:
    w = np.sort(np.asarray(eigenvalues))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.semilogy(np.arange(1, len(w) + 1), w, "ko", ms=3)
        ax.set_xlabel("index")
        ax.set_ylabel("eigenvalue")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        return save(fig, path)
