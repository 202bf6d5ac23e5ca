"""Matplotlib rendering of AR quivers."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .artrans import ARQuiver  # noqa: E402


def layout(g: ARQuiver) -> dict[str, tuple[float, float]]:
    """Knitting layout: ``TrD^k P_x`` sits at column ``depth(x) + 2k``, row = orbit.

    depth(x) is the longest path from x to a sink, so every irreducible map
    between neighbouring nodes points one column to the right.
    """
    depth = g.quiver.longest_path_to_sink()
    rows = {x: i for i, x in enumerate(g.quiver.vertices)}
    return {n.name: (float(depth[n.orbit] + 2 * n.power), float(rows[n.orbit])) for n in g.nodes}


def plot_ar_quiver(g: ARQuiver, path: str, title: str | None = None) -> str:
    pos = layout(g)
    width = max(x for x, _ in pos.values()) + 2
    height = max(y for _, y in pos.values()) + 2
    fig, ax = plt.subplots(figsize=(1.2 * width + 1, 1.0 * height + 1))
    for a, b, mult in g.arrows:
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="->", color="black", shrinkA=14, shrinkB=14, lw=1.0 + 0.5 * (mult - 1)))
    for z, x in g.tau:
        (x0, y0), (x1, y1) = pos[z], pos[x]
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="->", color="tab:gray", linestyle="dashed", shrinkA=14, shrinkB=14))
    for n in g.nodes:
        x, y = pos[n.name]
        ax.text(x, y, "".join(str(d) for d in n.rep.dimvec) if max(n.rep.dimvec) < 10
                else ",".join(str(d) for d in n.rep.dimvec),
                ha="center", va="center", fontsize=9,
                bbox=dict(boxstyle="round,pad=0.3", fc="white", ec="tab:blue"))
    ax.set_xlim(-1, width)
    ax.set_ylim(-1, height)
    ax.invert_yaxis()
    ax.set_axis_off()
    ax.set_title(title or f"AR quiver of {g.quiver.name}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
