"""SVG figures: dataset scatter, training curves, size sweep, test overlay, confusion.

Figures are built on a bare :class:`matplotlib.figure.Figure` (no pyplot
state) and rendered with a fixed hash salt and no date stamp, so the same
inputs give byte-identical SVG. Artists carry stable ``gid`` values that
become element ids in the SVG.
"""

import io

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from .geometry import ClassLabel

CLASS_COLORS = {
    ClassLabel.YIN: "navy",
    ClassLabel.YANG: "goldenrod",
    ClassLabel.DOT: "crimson",
}
MISCLASSIFIED_COLOR = "black"

STYLE = {
    "svg.hashsalt": "yinyang",
    "svg.fonttype": "none",
    "path.simplify": False,
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}

FIGURE_KINDS = ("scatter", "curves", "sweep", "test_overlay", "confusion")


def render_svg(fig):
    buf = io.BytesIO()
    with matplotlib.rc_context(STYLE):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def _new_figure(width=4.2, height=3.0):
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(width, height))
        ax = fig.add_subplot()
    return fig, ax


def _symbol_axes(ax, g):
    side = 2 * g.r_big
    ax.set_xlim(0, side)
    ax.set_ylim(0, side)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")


def scatter_figure(ds):
    """Every sample as a dot coloured by its class."""
    with matplotlib.rc_context(STYLE):
        fig, ax = _new_figure()
        xy = ds.coords()
        labels = ds.labels()
        for label in ClassLabel:
            sel = labels == int(label)
            ax.scatter(xy[sel, 0], xy[sel, 1], s=4, c=CLASS_COLORS[label], linewidths=0,
                       label=label.name.capitalize(), gid=f"class-{label.name.lower()}")
        _symbol_axes(ax, ds.geometry)
        ax.legend(loc="upper left", bbox_to_anchor=(1.0, 1.0), frameon=False, markerscale=2)
        fig.tight_layout()
    return fig


def curves_figure(curves):
    """Training and validation error per epoch."""
    train_err = np.asarray(curves["train_error"], dtype=np.float64)
    val_err = np.asarray(curves["validation_error"], dtype=np.float64)
    with matplotlib.rc_context(STYLE):
        fig, ax = _new_figure(4.0, 2.6)
        epochs = np.arange(1, len(train_err) + 1)
        ax.plot(epochs, train_err, color="tab:blue", label="training", gid="train_error")
        ax.plot(np.arange(1, len(val_err) + 1), val_err, color="tab:orange", label="validation",
                gid="validation_error")
        ax.set_xlabel("epoch")
        ax.set_ylabel("error")
        ax.set_ylim(bottom=0)
        ax.legend(frameon=False)
        fig.tight_layout()
    return fig


def sweep_figure(sweep_doc):
    """Mean and std of the final test error against hidden-layer size.

    ``sweep_doc`` is the ``to_dict()`` form of a sweep result.
    """
    entries = sorted(sweep_doc["sizes"], key=lambda e: e["hidden"])
    h = np.array([e["hidden"] for e in entries], dtype=np.float64)
    mean = np.array([e["mean"] for e in entries])
    std = np.array([e["std"] if e["std"] is not None else 0.0 for e in entries])
    with matplotlib.rc_context(STYLE):
        fig, ax = _new_figure(4.0, 2.8)
        ax.errorbar(h, mean, yerr=std, fmt="o-", color="tab:green", capsize=3, markersize=4,
                    gid="sweep")
        ax.set_xscale("log")
        ax.set_xticks(h)
        ax.set_xticklabels([str(int(v)) for v in h])
        ax.minorticks_off()
        ax.set_xlabel("hidden layer size")
        ax.set_ylabel("final test error")
        ax.set_ylim(bottom=0)
        fig.tight_layout()
    return fig


def test_overlay_figure(ds, predictions):
    """Samples coloured by predicted class, misclassified ones marked with an X."""
    xy = ds.coords()
    labels = ds.labels()
    pred = np.asarray(predictions, dtype=np.int64)
    if pred.shape != labels.shape:
        raise ValueError(f"{len(pred)} predictions for {len(labels)} samples")
    wrong = pred != labels
    with matplotlib.rc_context(STYLE):
        fig, ax = _new_figure()
        for label in ClassLabel:
            sel = pred == int(label)
            ax.scatter(xy[sel, 0], xy[sel, 1], s=4, c=CLASS_COLORS[label], linewidths=0,
                       label=label.name.capitalize(), gid=f"pred-{label.name.lower()}")
        if wrong.any():
            ax.scatter(xy[wrong, 0], xy[wrong, 1], s=16, marker="x", c=MISCLASSIFIED_COLOR,
                       linewidths=0.8, label="wrong", gid="misclassified")
        _symbol_axes(ax, ds.geometry)
        ax.set_title(f"accuracy {1 - wrong.mean():.1%}")
        ax.legend(loc="upper left", bbox_to_anchor=(1.0, 1.0), frameon=False, markerscale=2)
        fig.tight_layout()
    return fig


def confusion_figure(confusion):
    """Annotated 3x3 grid, rows true class, columns predicted class."""
    cm = np.asarray(confusion, dtype=np.int64)
    if cm.shape != (3, 3):
        raise ValueError(f"confusion matrix must be 3x3, got {cm.shape}")
    names = [label.name.capitalize() for label in ClassLabel]
    with matplotlib.rc_context(STYLE):
        fig, ax = _new_figure(3.2, 3.0)
        edges = np.arange(4) - 0.5
        ax.pcolormesh(edges, edges, cm, cmap="Blues", edgecolors="white", linewidth=1.0, gid="confusion")
        ax.set_aspect("equal")
        ax.invert_yaxis()
        top = cm.max() if cm.max() > 0 else 1
        for i in range(3):
            for j in range(3):
                ax.text(j, i, str(cm[i, j]), ha="center", va="center",
                        color="white" if cm[i, j] > top / 2 else "black", gid=f"cell-{i}-{j}")
        ax.set_xticks(range(3))
        ax.set_xticklabels(names)
        ax.set_yticks(range(3))
        ax.set_yticklabels(names)
        ax.set_xlabel("predicted")
        ax.set_ylabel("true")
        fig.tight_layout()
    return fig
