"""Matplotlib renderers for the CLI report path.

Figures are written to files next to the delimited output; the Agg backend
is forced and PNG metadata stripped so repeated runs produce identical
bytes.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_SAVE_KW = dict(dpi=120, metadata={"Software": None})


def _new_axes(title, xlabel, ylabel):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def render_lines(path, xs, series, title, xlabel, ylabel,
                 logx=False, logy=False, hline=None):
    """One chart, several labelled lines; series is {label: y-array}."""
    fig, ax = _new_axes(title, xlabel, ylabel)
    for label, ys in series.items():
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.2, label=label)
    if hline is not None:
        ax.axhline(hline, color="gray", linestyle="--", linewidth=1.0,
                   label=f"reference {hline:g}")
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    if len(series) > 1 or hline is not None:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_stems(path, xs, ys, title, xlabel, ylabel, hline=None):
    """Discrete magnitude plot for spectra and weight tables."""
    fig, ax = _new_axes(title, xlabel, ylabel)
    ax.vlines(xs, 0.0, ys, linewidth=1.0)
    ax.plot(xs, ys, "o", markersize=2.5)
    if hline is not None:
        ax.axhline(hline, color="gray", linestyle="--", linewidth=1.0)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
