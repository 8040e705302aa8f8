"""Matplotlib renderings of AR quivers and exchange-style graphs.

Layouts are computed here (no graph-layout dependency) and are fully
deterministic, so figures are reproducible byte-for-byte on one machine.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .arquiver import ARQuiver  # noqa: E402
from .cluster_category import (  # noqa: E402
    CCObject,
    ClusterTiltingObject,
    CTGraph,
    Module,
    ShiftedProjective,
    cluster_category_arrows,
    fundamental_domain,
    label,
    tau_cluster,
)
from .exchange import ExchangeGraph, MutationClass  # noqa: E402

PathLike = Union[str, Path]

_METADATA = {
    ".png": {"Software": None},
    ".svg": {"Date": None},
    ".pdf": {"CreationDate": None, "ModDate": None},
}


def _style(ax) -> None:
    ax.set_axis_off()
    ax.set_aspect("equal")


def _levels(ar: ARQuiver) -> dict[int, tuple[float, float]]:
    """Knitting coordinates: ``P_i`` one column right of ``P_j`` per arrow ``i -> j``.

    Each ``tau^-1`` moves two columns on.  The underlying graph is a tree, so
    the projective columns are well defined.
    """
    q = ar.quiver
    col = {min(ar.projective): 0}
    todo = [min(ar.projective)]
    while todo:
        v = todo.pop()
        for i, j, _ in q.arrows():
            if i == v and j not in col:
                col[j] = col[v] - 1
                todo.append(j)
            elif j == v and i not in col:
                col[i] = col[v] + 1
                todo.append(i)
    low = min(col.values())
    pos: dict[int, tuple[float, float]] = {}
    for i, k in ar.projective.items():
        x, obj = float(col[i] - low), k
        while obj is not None:
            pos[obj] = (x, float(i))
            x += 2.0
            obj = ar.tau_inverse.get(obj)
    return pos


def plot_ar_quiver(ar: ARQuiver, path: PathLike, title: Optional[str] = None) -> Path:
    pos = _levels(ar)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(ar) ** 0.9), 0.9 * ar.quiver.n + 1.6))
    for (a, b), m in ar.arrows.items():
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="->", lw=0.8 + 0.4 * (m - 1), shrinkA=11, shrinkB=11))
    for z, t in ar.tau.items():
        (x0, y0), (x1, y1) = pos[z], pos[t]
        ax.plot([x0, x1], [y0, y1], ls=":", lw=0.8, color="0.5")
    for k, (x, y) in pos.items():
        face = "#dde8f4" if ar.is_projective(k) else ("#f4e4d4" if ar.is_injective(k) else "white")
        ax.text(x, y, ar.label(k), ha="center", va="center", fontsize=8,
                bbox=dict(boxstyle="round,pad=0.25", fc=face, ec="0.3", lw=0.6))
    if title:
        ax.set_title(title, fontsize=10)
    _style(ax)
    return _save(fig, path)


def plot_cluster_ar_quiver(ar: ARQuiver, path: PathLike, t: Optional[ClusterTiltingObject] = None) -> Path:
    """Fundamental domain of the cluster category; ``tau T_i`` drawn hollow."""
    pos: dict[CCObject, tuple[float, float]] = {Module(k): xy for k, xy in _levels(ar).items()}
    for i in range(1, ar.quiver.n + 1):
        # tau P_i[1] = I_i, so P_i[1] continues the row of I_i
        x, y = pos[Module(ar.injective[i])]
        pos[ShiftedProjective(i)] = (x + 2.0, y)
    dropped = {tau_cluster(s, ar) for s in t} if t is not None else set()
    fig, ax = plt.subplots(figsize=(max(4.0, 0.8 * len(pos) ** 0.9), 0.9 * ar.quiver.n + 1.6))
    for (a, b), m in cluster_category_arrows(ar).items():
        (x0, y0), (x1, y1) = pos[a], pos[b]
        grey = a in dropped or b in dropped
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="->", lw=0.8, shrinkA=12, shrinkB=12,
                                    color="0.75" if grey else "black"))
    for o in fundamental_domain(ar):
        x, y = pos[o]
        hollow = o in dropped
        ax.text(x, y, label(o, ar), ha="center", va="center", fontsize=8,
                color="0.6" if hollow else "black",
                bbox=dict(boxstyle="round,pad=0.25", fc="white" if hollow else "#e8f0e0",
                          ec="0.6", lw=0.6, ls="--" if hollow else "-"))
    _style(ax)
    return _save(fig, path)


def _circle(count: int) -> list[tuple[float, float]]:
    return [
        (math.cos(2 * math.pi * k / count + math.pi / 2), math.sin(2 * math.pi * k / count + math.pi / 2))
        for k in range(count)
    ]


def plot_graph(count: int, edges: Sequence[tuple[int, int]], path: PathLike,
               labels: Optional[Sequence[str]] = None, title: Optional[str] = None) -> Path:
    pts = _circle(max(count, 1))
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    for a, b in edges:
        ax.plot([pts[a][0], pts[b][0]], [pts[a][1], pts[b][1]], lw=0.6, color="0.35")
    xs, ys = zip(*pts[:count]) if count else ((), ())
    ax.scatter(xs, ys, s=18 if count > 60 else 40, color="#3a6ea5", zorder=3)
    if labels and count <= 30:
        for (x, y), text in zip(pts, labels):
            ax.text(1.12 * x, 1.12 * y, text, ha="center", va="center", fontsize=6)
    if title:
        ax.set_title(title, fontsize=10)
    _style(ax)
    ax.set_xlim(-1.5, 1.5)
    ax.set_ylim(-1.5, 1.5)
    return _save(fig, path)


def plot_exchange_graph(g: Union[ExchangeGraph, MutationClass], path: PathLike, title: Optional[str] = None) -> Path:
    idx = {k: i for i, k in enumerate(g.nodes)}
    edges = sorted({tuple(sorted((idx[a], idx[b]))) for a, b, _ in g.edges if a != b})
    return plot_graph(len(idx), edges, path, labels=[str(i) for i in range(len(idx))], title=title)


def plot_ctgraph(g: CTGraph, ar: ARQuiver, path: PathLike, title: Optional[str] = None) -> Path:
    labels = [" ".join(label(o, ar) for o in t) for t in g.nodes]
    return plot_graph(len(g.nodes), g.edges, path, labels=labels, title=title)


def _save(fig, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # Dropping timestamps and pinning SVG ids keeps repeated renders identical.
    meta = _METADATA.get(path.suffix.lower(), {})
    with matplotlib.rc_context({"svg.hashsalt": "clusterforge"}):
        fig.savefig(path, dpi=150, bbox_inches="tight", metadata=meta)
    plt.close(fig)
    return path
