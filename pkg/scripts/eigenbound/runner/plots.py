import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from eigenbound.bounds.reports import BoundReport
from eigenbound.utils.path_utils import ensure_dir

# fixed ids keep the svg byte-stable across runs
matplotlib.rcParams["svg.hashsalt"] = "eigenbound"

MARGIN_FLOOR = 1e-17


def relative_margins(reports: list[BoundReport]) -> np.ndarray:
    """log10 of margin / |rhs|, floored so violated reports still get a bar."""
    rel = np.array([r.margin / abs(r.rhs) if r.rhs != 0 else r.margin for r in reports], dtype=float)
    return np.log10(np.maximum(rel, MARGIN_FLOOR))


def plot_margins(reports: list[BoundReport], path: str, title: str = "") -> str:
    ensure_dir(path)
    height = max(3.0, 0.18 * len(reports) + 1.0)
    fig, ax = plt.subplots(figsize=(8.0, height))
    if reports:
        values = relative_margins(reports)
        colors = ["tab:blue" if r.satisfied else "tab:red" for r in reports]
        ypos = np.arange(len(reports))
        ax.barh(ypos, values - np.log10(MARGIN_FLOOR), left=np.log10(MARGIN_FLOOR), color=colors)
        ax.set_yticks(ypos)
        ax.set_yticklabels([f"{r.id} k={r.k}" for r in reports], fontsize=6)
        ax.invert_yaxis()
    ax.set_xlabel("log10(margin / |rhs|)")
    ax.set_title(title)
    ax.grid(True, axis="x", linestyle="--", alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
