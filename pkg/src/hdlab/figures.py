"""Figure rendering for experiment outputs (PNG next to the CSV data)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_RC = {
    "figure.figsize": (6.4, 4.0),
    "savefig.dpi": 150,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
    "axes.titlesize": 11,
}


def render_histogram(report, path, bins: int = 20, xlabel: str = "value") -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.hist(report.per_replicate, bins=bins, edgecolor="black", linewidth=0.5)
        ax.set_xlabel(xlabel)
        ax.set_ylabel("count")
        ax.set_title(f"{report.name} (seed {report.seed}, "
                     f"{len(report.per_replicate)} replicates)")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def render_curve(xs, ys, path, xlabel: str, ylabel: str, title: str) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(xs, ys, marker="o")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def render_volume_bounds(rows, path) -> None:
    """rows: (n, s, delta, log_lower, log_upper) tuples; one curve pair per (n, s)."""
    groups: dict[tuple[int, int], list] = {}
    for n, s, delta, lo, hi in rows:
        groups.setdefault((n, s), []).append((delta, lo, hi))
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for (n, s), pts in sorted(groups.items()):
            pts.sort()
            deltas = [p[0] for p in pts]
            ax.plot(deltas, [p[1] for p in pts], marker="o", label=f"n={n}, s={s} (lower)")
            ax.plot(deltas, [p[2] for p in pts], marker="x", linestyle="--",
                    label=f"n={n}, s={s} (upper)")
        ax.set_xlabel("delta")
        ax.set_ylabel("log volume")
        ax.set_title("max-chordal ball volume bounds")
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
