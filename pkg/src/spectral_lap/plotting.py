"""SVG scatter plots of embeddings. Output only; nothing is displayed."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def scatter_svg(path, coords, labels=None, title: str = "") -> None:
    """Write a scatter of the first two columns of ``coords`` (n x p) to ``path``.

    One-dimensional inputs are drawn against the sample index. The SVG is
    byte-stable across runs: the id salt is fixed and no date is embedded.
    """
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]
    if coords.shape[1] >= 2:
        x, y = coords[:, 0], coords[:, 1]
        xlabel, ylabel = "y1", "y2"
    else:
        x, y = np.arange(coords.shape[0], dtype=float), coords[:, 0]
        xlabel, ylabel = "index", "y1"
    with matplotlib.rc_context({"svg.hashsalt": "spectral_lap", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(5, 4))
        if labels is None:
            ax.scatter(x, y, s=10, color="tab:blue")
        else:
            labels = np.asarray(labels)
            for lab in np.unique(labels):
                m = labels == lab
                ax.scatter(x[m], y[m], s=10, label=str(lab))
            ax.legend(title="label", fontsize="small")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
