"""Figure construction from graphalign CSV rows.

Each builder returns a matplotlib Figure. All statistics are taken from
the CSVs; when a raw per-trial sweep file is given instead of the
summary file, rows are averaged per cell, nothing more.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import EmptyData, SchemaMismatch

FIGSIZE = (4.8, 3.6)
DPI = 150

FIG1_METRICS = {
    "frac": "frac_matched_hungarian",
    "dist": "frob_dist_scaled",
}
THRESHOLD_COLUMNS = ["n", "sigma_threshold", "cross_level", "slope", "intercept"]


def _new_axes():
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    return fig, ax


def sweep_means(rows, metric):
    """Per-(n, sigma, solver) mean of a metric from summary or raw rows.

    Summary files carry ``mean_<metric>`` directly; raw sweep files carry
    one row per repetition and are averaged here.
    """
    if not rows:
        raise EmptyData("no data rows")
    cols = rows[0].keys()
    if f"mean_{metric}" in cols:
        key = f"mean_{metric}"
        per_cell = {
            (int(r["n"]), float(r["sigma"]), r["solver"]): float(r[key])
            for r in rows
        }
        return per_cell
    if metric not in cols:
        raise SchemaMismatch(f"no column {metric} or mean_{metric}")
    cells = {}
    for r in rows:
        cell = (int(r["n"]), float(r["sigma"]), r["solver"])
        cells.setdefault(cell, []).append(float(r[metric]))
    return {cell: float(np.mean(v)) for cell, v in cells.items()}


def _curves(per_cell, group_key):
    """Split cells into sigma-sorted curves keyed by n, solver, or both."""
    curves = {}
    for (n, sigma, solver), value in per_cell.items():
        key = {"n": n, "solver": solver, "both": (solver, n)}[group_key]
        curves.setdefault(key, []).append((sigma, value))
    return {k: sorted(v) for k, v in sorted(curves.items(), key=str)}


def fig1_left(rows):
    """Fraction of matched vertices vs sigma, one curve per solver."""
    per_cell = sweep_means(rows, FIG1_METRICS["frac"])
    ns = {n for (n, _, _) in per_cell}
    group = "solver" if len(ns) == 1 else "both"
    fig, ax = _new_axes()
    for key, pts in _curves(per_cell, group).items():
        label = key if group == "solver" else f"{key[0]} (n={key[1]})"
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                markersize=3, label=label)
    ax.set_xlabel(r"$\sigma$")
    ax.set_ylabel("fraction of matched vertices")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    fig.tight_layout()
    return fig


def fig1_center(rows):
    """Fraction matched and scaled Frobenius distance vs sigma (one n)."""
    frac = sweep_means(rows, FIG1_METRICS["frac"])
    dist = sweep_means(rows, FIG1_METRICS["dist"])
    n_max = max(n for (n, _, _) in frac)
    fig, ax = _new_axes()
    for per_cell, label in (
        (frac, "fraction of matched vertices"),
        (dist, r"$\|X^\star - \Pi^\star\|_F / \sqrt{n}$"),
    ):
        pts = sorted(
            (sigma, v) for (n, sigma, _), v in per_cell.items() if n == n_max
        )
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                markersize=3, label=label)
    ax.set_xlabel(r"$\sigma$")
    ax.set_ylim(-0.02, 1.1)
    ax.legend()
    fig.tight_layout()
    return fig


def fig1_right(rows):
    """Fraction of matched vertices vs sigma, one curve per n."""
    per_cell = sweep_means(rows, FIG1_METRICS["frac"])
    fig, ax = _new_axes()
    for n, pts in _curves(per_cell, "n").items():
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                markersize=3, label=f"n={n}")
    ax.set_xlabel(r"$\sigma$")
    ax.set_ylabel("fraction of matched vertices")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    fig.tight_layout()
    return fig


def fig2(rows):
    """Log-log threshold scatter with the fitted line from the CSV.

    The slope and intercept are read from the threshold CSV columns, not
    refit here; the legend shows the slope to 3 decimals.
    """
    if not rows:
        raise EmptyData("no data rows")
    ns = np.array([float(r["n"]) for r in rows])
    ths = np.array([float(r["sigma_threshold"]) for r in rows])
    slope = float(rows[0]["slope"])
    intercept = float(rows[0]["intercept"])
    fig, ax = _new_axes()
    ax.scatter(np.log(ns), np.log(ths), zorder=3, label="observed thresholds")
    xs = np.linspace(np.log(ns.min()), np.log(ns.max()), 50)
    ax.plot(xs, slope * xs + intercept, color="tab:orange",
            label=f"fit: slope = {slope:.3f}")
    ax.set_xlabel(r"$\log n$")
    ax.set_ylabel(r"$\log \sigma_{0.5}$")
    ax.legend()
    fig.tight_layout()
    return fig


BUILDERS = {
    "fig1-left": fig1_left,
    "fig1-center": fig1_center,
    "fig1-right": fig1_right,
    "fig2": fig2,
}

REQUIRED_COLUMNS = {
    "fig1-left": ["n", "sigma", "solver"],
    "fig1-center": ["n", "sigma", "solver"],
    "fig1-right": ["n", "sigma", "solver"],
    "fig2": THRESHOLD_COLUMNS,
}


def save_figure(fig, out_path, image_format=None):
    """Write the figure deterministically (no timestamps or build tags)."""
    fmt = image_format or out_path.rsplit(".", 1)[-1].lower()
    if fmt not in ("png", "svg"):
        raise SchemaMismatch(f"unsupported image format {fmt!r}")
    metadata = {"Software": None} if fmt == "png" else {"Date": None}
    with plt.rc_context({"svg.hashsalt": "gaplots"}):
        fig.savefig(out_path, format=fmt, metadata=metadata)
    plt.close(fig)
