"""Grouped NMI bar charts written as SVG, each with a CSV of the plotted values."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib as mpl
from matplotlib.figure import Figure

from .extraction import Animacy
from .infostats import NORMALIZERS

# indirect objects are too sparse to chart; they remain in results.json
PLOTTED_VARIABLES = ("amod", "dobj", "nsubj")
VARIABLE_LABELS = {"amod": "adjective", "dobj": "verb (dobj)", "nsubj": "verb (subj)"}
CLASS_COLORS = {"inanimate": "#4c72b0", "animate": "#dd8452"}
VARIABLE_COLORS = {"amod": "#4c72b0", "dobj": "#55a868", "nsubj": "#c44e52"}

STYLE = {
    "font.size": 8,
    "axes.labelsize": 8,
    "axes.titlesize": 9,
    "axes.linewidth": 0.6,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "xtick.labelsize": 7,
    "ytick.labelsize": 7,
    "legend.fontsize": 7,
    "legend.frameon": False,
    # fixed salt + no date keeps the SVG bytes reproducible
    "svg.hashsalt": "gendermi",
    "svg.fonttype": "none",
}


def _nmi_value(cell, normalizer):
    """Plotted value, or a status string when there is nothing to plot."""
    if cell is None:
        return "missing"
    if not cell.ok:
        return "N/A"
    v = cell.nmi.values[normalizer]
    return "undefined" if v is None else v


def _write_csv(path: Path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in row])


def _save(fig: Figure, path: Path):
    fig.savefig(path, format="svg", metadata={"Date": None})


def _find(result, animacy, variable):
    for c in result.cells:
        if c.animacy.value == animacy and c.variable == variable:
            return c
    return None


def plot_class_chart(rows, title, path: Path):
    """Six normalizer groups, one bar per variable."""
    variables = [v for v in PLOTTED_VARIABLES if any(r[1] == v for r in rows)]
    width = 0.8 / max(1, len(variables))
    drawn = False
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(6.0, 2.6))
        ax = fig.add_subplot()
        for k, var in enumerate(variables):
            labelled = False
            for i, norm in enumerate(NORMALIZERS):
                value = next(r[2] for r in rows if r[0] == norm.value and r[1] == var)
                if not isinstance(value, float):
                    continue
                bar = ax.bar(i + (k - (len(variables) - 1) / 2) * width, value, width,
                             color=VARIABLE_COLORS[var],
                             label=None if labelled else VARIABLE_LABELS[var])
                bar.patches[0].set_gid(f"bar-{norm.value}-{var}")
                drawn = labelled = True
        ax.set_xticks(range(len(NORMALIZERS)), [n.value for n in NORMALIZERS])
        ax.set_ylabel("NMI")
        ax.set_ylim(bottom=0)
        ax.set_title(title)
        if drawn:
            ax.legend(loc="upper right")
        fig.tight_layout()
        _save(fig, path)


def plot_paired_chart(rows, title, path: Path):
    """One panel per normalizer, inanimate vs animate bars side by side."""
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(6.0, 3.6))
        axes = fig.subplots(2, 3, sharey=True)
        for ax, norm in zip(axes.flat, NORMALIZERS):
            for i, cls in enumerate(("inanimate", "animate")):
                value = next(r[2] for r in rows if r[0] == norm.value and r[1] == cls)
                if not isinstance(value, float):
                    continue
                bar = ax.bar(i, value, 0.6, color=CLASS_COLORS[cls])
                bar.patches[0].set_gid(f"bar-{norm.value}-{cls}")
            ax.set_xticks([0, 1], ["inanimate", "animate"])
            ax.set_title(norm.value)
            ax.set_ylim(bottom=0)
        fig.suptitle(title)
        fig.tight_layout()
        _save(fig, path)


def emit_figures(result, outdir) -> list[Path]:
    """Write one SVG (+ CSV sidecar) per animacy class and per plotted variable.

    The CSV holds exactly the floats the bars were drawn from. Returns the
    paths written.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    language = result.config.get("language", "")
    written = []
    classes = [a for a in result.config.get("animacy", [])
               if a in (Animacy.INANIMATE.value, Animacy.ANIMATE.value)]
    present = [v for v in PLOTTED_VARIABLES if any(c.variable == v for c in result.cells)]
    if not present:
        return written

    for cls in classes:
        rows = [(norm.value, var, _nmi_value(_find(result, cls, var), norm))
                for norm in NORMALIZERS for var in present]
        stem = outdir / f"nmi_{cls}"
        _write_csv(stem.with_suffix(".csv"), ["normalizer", "variable", "nmi"], rows)
        plot_class_chart(rows, f"{language}: NMI, {cls} nouns", stem.with_suffix(".svg"))
        written += [stem.with_suffix(".csv"), stem.with_suffix(".svg")]

    for var in present:
        rows = [(norm.value, cls, _nmi_value(_find(result, cls, var), norm))
                for norm in NORMALIZERS for cls in ("inanimate", "animate")]
        stem = outdir / f"nmi_pair_{var}"
        _write_csv(stem.with_suffix(".csv"), ["normalizer", "animacy", "nmi"], rows)
        plot_paired_chart(rows, f"{language}: NMI by animacy, {VARIABLE_LABELS[var]}",
                          stem.with_suffix(".svg"))
        written += [stem.with_suffix(".csv"), stem.with_suffix(".svg")]
    return written
