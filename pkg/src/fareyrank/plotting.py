"""Report figures written to image files (Agg backend, no display needed)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_iterations(rows, path, title=None):
    """Mean iterations against order, one line per search algorithm."""
    fig, ax = plt.subplots(figsize=(6, 4))
    algos = sorted({r.algo for r in rows})
    for algo in algos:
        mine = sorted((r for r in rows if r.algo == algo), key=lambda r: r.order)
        ax.plot([r.order for r in mine], [float(r.mean_iters) for r in mine],
                marker="o", label=algo.replace("_", " "))
    ax.set_xlabel("order n")
    ax.set_ylabel("mean iterations")
    ax.legend(frameon=False)
    if title:
        ax.set_title(title, fontsize=9)
    return _finish(fig, path)


def plot_rank_value(seq, path):
    """Fraction value against rank for one Farey sequence."""
    fig, ax = plt.subplots(figsize=(5, 4))
    ranks = range(1, seq.f_max + 1)
    ax.plot(list(ranks), [a / b for a, b in zip(seq.nums, seq.dens)], lw=0.8)
    ax.plot([1, seq.f_max], [0, 1], lw=0.6, ls="--", color="grey")
    ax.set_xlabel("rank")
    ax.set_ylabel("value")
    ax.set_title(f"F_{seq.order}, f_max = {seq.f_max}", fontsize=9)
    return _finish(fig, path)


def plot_approximation(contour, polygon, path, title=None):
    """Contour pixels with the approximating polygon on top, image orientation."""
    fig, ax = plt.subplots(figsize=(5, 5))
    pts = list(contour.points) + (list(contour.points[:1]) if contour.closed else [])
    ax.plot([p.x for p in pts], [p.y for p in pts], color="0.7", lw=0.8)
    verts = list(polygon.vertices) + (list(polygon.vertices[:1]) if polygon.closed else [])
    ax.plot([v.x for v in verts], [v.y for v in verts], color="tab:red", lw=1.5, marker="o", ms=3)
    ax.set_aspect("equal")
    ax.invert_yaxis()
    if title:
        ax.set_title(title, fontsize=9)
    return _finish(fig, path)
