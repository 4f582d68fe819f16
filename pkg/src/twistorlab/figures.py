"""Matplotlib figure output for the CLI report paths.

Renders the same loci the SVG emitter draws, plus atlas overviews, to any
format matplotlib infers from the file extension (png, pdf, svg). Import is
deferred to call time and the Agg backend forced, so headless runs work and
library users who never ask for figures never pay for matplotlib.
"""

from __future__ import annotations

from .sections import SectionAtlas, SurfaceData, zero_chart_region
from .svg import DEFAULT_WINDOW, PALETTE, Window, collect_loci


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    return plt


def _draw_loci(ax, data: SurfaceData, window: Window, puncture=None):
    lines, points = collect_loci(data, window)
    labeled = set()
    for name, k, base, direction in lines:
        if puncture is not None and name != puncture:
            continue
        span = 4 * max(window.xmax - window.xmin, window.ymax - window.ymin)
        a = base - span * direction
        b = base + span * direction
        label = f"k={k}" if k not in labeled else None
        labeled.add(k)
        ax.plot([a.real, b.real], [a.imag, b.imag],
                color=PALETTE[k % len(PALETTE)], linewidth=1.2, label=label)
    for name, k, z in points:
        if puncture is not None and name != puncture:
            continue
        ax.plot([z.real], [z.imag], marker="o", markersize=5,
                color=PALETTE[k % len(PALETTE)], markeredgecolor="#333333")
    ax.set_xlim(window.xmin, window.xmax)
    ax.set_ylim(window.ymin, window.ymax)
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.25)
    ax.axhline(0, color="#999999", linewidth=0.8)
    ax.axvline(0, color="#999999", linewidth=0.8)


def _draw_regions(ax, disks, tags=None, puncture=None):
    from matplotlib.patches import Circle

    for index, disk in enumerate(disks):
        region = zero_chart_region(disk)
        style = {"fill": False, "edgecolor": "#555555", "linewidth": 1.0}
        if not region.inside:
            style["linestyle"] = "--"
        if tags is not None and puncture is not None:
            tag = tags[index][puncture]
            style["edgecolor"] = "#2a9d3a" if tag.kind == "case-a" else "#d1495b"
        ax.add_patch(Circle((region.center.real, region.center.imag),
                            region.radius, **style))


def save_loci_figure(data: SurfaceData, path: str,
                     window: Window = DEFAULT_WINDOW, disks=None) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 6.4))
    _draw_loci(ax, data, window)
    if disks:
        _draw_regions(ax, disks)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_atlas_figure(atlas: SectionAtlas, path: str,
                      window: Window = DEFAULT_WINDOW) -> None:
    """One panel per puncture: loci plus disk regions colored by case tag."""
    plt = _pyplot()
    names = atlas.data.punctures
    fig, axes = plt.subplots(1, len(names),
                             figsize=(6.4 * len(names), 6.4), squeeze=False)
    for ax, name in zip(axes[0], names):
        _draw_loci(ax, atlas.data, window, puncture=name)
        _draw_regions(ax, atlas.disks, atlas.tags, puncture=name)
        cases = sum(1 for t in atlas.tags if t[name].kind == "case-b")
        ax.set_title(f"{name}: {cases} collision disk(s) of {len(atlas.disks)}")
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
