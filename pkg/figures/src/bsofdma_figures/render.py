"""Figure rendering for the four sweep CSVs.

One image per kind: beam-split gain profiles (curve per element count),
flattened average gain (curve per scenario), SE vs user count with the
analytic prediction overlaid, and SE vs element count on a log2 x axis with
a fitted-slope annotation per scenario.  Rendering is read-only over the
CSV; nothing is resimulated.
"""

from dataclasses import dataclass
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import Table, load_table

PREDICTION_LABEL = "theorem2-prediction"


@dataclass(frozen=True)
class FigureSpec:
    """What to render: input CSV, its sweep kind, and the output image."""
    csv_path: str
    kind: str
    out_path: str
    title: Optional[str] = None


def render(spec: FigureSpec) -> str:
    """Render ``spec`` and return the written image path."""
    table = load_table(spec.csv_path, spec.kind)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    _RENDERERS[spec.kind](table, ax)
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return spec.out_path


def _render_beam_split(table: Table, ax) -> None:
    for m, rows in table.series("M").items():
        rows.sort(key=lambda r: r["f_hz"])
        f = np.array([r["f_hz"] for r in rows]) / 1e6
        ax.plot(f, [r["gain_exact"] for r in rows], label=f"M = {m}")
        ax.plot(f, [r["gain_sinc"] for r in rows], linestyle="--", alpha=0.6,
                label=f"M = {m} (sinc approx.)")
    ax.set_xlabel("baseband frequency (MHz)")
    ax.set_ylabel("array gain")
    if table.rows:
        ax.set_yscale("log")
        ax.legend(fontsize=8)


def _render_avg_gain(table: Table, ax) -> None:
    for label, rows in table.series("scenario").items():
        rows.sort(key=lambda r: r["f_hz"])
        f = np.array([r["f_hz"] for r in rows]) / 1e6
        ax.plot(f, [r["avg_gain"] for r in rows], label=label)
    ax.set_xlabel("baseband frequency (MHz)")
    ax.set_ylabel("average scheduled channel gain")
    if table.rows:
        ax.legend(fontsize=8)


def _render_se_vs_users(table: Table, ax) -> None:
    for label, rows in table.series("scenario").items():
        rows.sort(key=lambda r: r["K"])
        k = [r["K"] for r in rows]
        se = [r["se_bps_hz"] for r in rows]
        err = [r["stderr"] for r in rows]
        if label == PREDICTION_LABEL:
            ax.plot(k, se, linestyle=":", color="black", label=label)
        else:
            ax.errorbar(k, se, yerr=err, marker="o", capsize=2, label=label)
    ax.set_xlabel("number of users K")
    ax.set_ylabel("spectral efficiency (bit/s/Hz)")
    if table.rows:
        ax.set_xscale("log")
        ax.legend(fontsize=8)


def _render_se_vs_elements(table: Table, ax) -> None:
    for label, rows in table.series("scenario").items():
        rows.sort(key=lambda r: r["M"])
        m = np.array([r["M"] for r in rows], dtype=float)
        se = np.array([r["se_bps_hz"] for r in rows])
        err = [r["stderr"] for r in rows]
        text = label
        if len(rows) >= 2:
            slope = float(np.polyfit(np.log2(m), se, 1)[0])
            text = f"{label} (slope {slope:.2f})"
        ax.errorbar(m, se, yerr=err, marker="o", capsize=2, label=text)
    ax.set_xlabel("number of IRS elements M")
    ax.set_ylabel("spectral efficiency (bit/s/Hz)")
    if table.rows:
        ax.set_xscale("log", base=2)
        ax.legend(fontsize=8)


_RENDERERS = {
    "beam-split": _render_beam_split,
    "avg-gain": _render_avg_gain,
    "se-vs-users": _render_se_vs_users,
    "se-vs-elements": _render_se_vs_elements,
}
