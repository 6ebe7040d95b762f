"""Render curve sets to PNG.  Needs matplotlib (``pip install .[plot]``)."""

from __future__ import annotations

import math


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _label(curve) -> str:
    p = curve.params
    if curve.quantity == "single_decay":
        return rf"$e^{{-2\alpha^2\gamma t}}$, $\alpha$={p.alpha:g}"
    if p.is_pure:
        return rf"pure, $\alpha$={p.alpha:g}"
    return rf"$\alpha$={p.alpha:g}, V={p.V:g}"


_STYLES = {"W0_pure": "--", "single_decay": "--", "W0_mixed": "-", "C_of_t": "-"}

_YLABEL = {"W0_pure": "W(0)", "W0_mixed": "W(0)", "C_of_t": "C(t)", "single_decay": "C(t)"}


def render(panels, path, title: str = "", logx: bool = True) -> None:
    """One subplot per panel; ``panels`` is a list of lists of curves."""
    plt = _pyplot()
    ncols = len(panels)
    fig, axes = plt.subplots(1, ncols, figsize=(4.2 * ncols, 3.4), squeeze=False)
    for i, (ax, curves) in enumerate(zip(axes[0], panels)):
        for c in curves:
            ax.plot(c.gamma_t, c.values, _STYLES.get(c.quantity, "-"), lw=1.4, label=_label(c))
        if logx:
            ax.set_xscale("log")
        ax.set_xlabel(r"$\gamma t$")
        ax.set_ylabel(_YLABEL.get(curves[0].quantity, "value"))
        if curves[0].quantity.startswith("W0"):
            ax.axhline(0.0, color="0.6", lw=0.6)
            ax.set_ylim(-2 / math.pi * 1.05, None)
        if ncols > 1:
            ax.set_title(f"({chr(ord('a') + i)})", loc="left")
        ax.legend(frameon=False, fontsize=8)
    if title:
        fig.suptitle(title, fontsize=10)
    fig.tight_layout()
    # fixed metadata keeps repeated renders byte-identical
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
