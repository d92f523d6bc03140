"""Serialization of analysis results: JSON documents and the delimited tables."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .infostats import NORMALIZERS

NORMALIZER_IDS = [n.value for n in NORMALIZERS]

COUNTS_HEADER = ["animacy", "variable", "status", "tokens", "types", "noun_types", "partner_types"]
MI_TABLE_HEADER = ["animacy", "variable", "mi_bits", "display", "p_paper", "p_conservative",
                   "significant", "n_permutations"]


def _dump(obj, path: Path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def write_results_json(result, path):
    _dump(result.to_dict(), path)


def write_audit_json(result, path):
    _dump(result.audit, path)


def write_retained_json(result, path):
    _dump(result.retained, path)


def emit_counts(result, path):
    """Table-3/4 style counts, one row per (animacy class, variable)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COUNTS_HEADER)
        for c in result.cells:
            k = c.counts
            w.writerow([c.animacy.value, c.variable, c.status, k["pair_tokens"], k["pair_types"],
                        k["noun_types"], k["partner_types"]])


def display_mi(cell) -> str:
    """Render an MI cell the way the summary tables do (4 d.p., bold when p < 0.05)."""
    if not cell.ok:
        return "N/A"
    mi = cell.nmi.mi
    text = "< 0.001" if mi < 0.001 else f"{mi:.4f}"
    return f"**{text}**" if cell.test.significant else text


def write_mi_table(result, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MI_TABLE_HEADER)
        for c in result.cells:
            if c.ok:
                t = c.test
                w.writerow([c.animacy.value, c.variable, repr(c.nmi.mi), display_mi(c),
                            repr(t.p_paper), repr(t.p_conservative), str(t.significant).lower(),
                            t.n_permutations])
            else:
                w.writerow([c.animacy.value, c.variable, "N/A", "N/A", "N/A", "N/A", "N/A", "N/A"])
