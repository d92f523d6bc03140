"""Plug-in entropy, mutual information and normalized MI over count tables.

All quantities are in bits. Probabilities are empirical relative
frequencies with no bias correction; empty cells contribute nothing.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateNormalizer, EmptyTable, NotNormalized

UNIT = "bits"


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Gender x value count matrix with no all-zero row or column.

    Use :meth:`from_counts` to build one from raw counts; it strips empty
    rows/columns and records what was removed in ``stripped``.
    """

    row_labels: tuple
    col_labels: tuple
    counts: np.ndarray
    stripped: dict = field(default_factory=dict)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2:
            raise ValueError("counts must be a 2-D matrix")
        if counts.shape != (len(self.row_labels), len(self.col_labels)):
            raise ValueError(f"counts shape {counts.shape} does not match labels "
                             f"({len(self.row_labels)}, {len(self.col_labels)})")
        if (counts < 0).any():
            raise ValueError("counts must be non-negative")
        if counts.size and ((counts.sum(axis=1) == 0).any() or (counts.sum(axis=0) == 0).any()):
            raise ValueError("table has an all-zero row or column; use from_counts()")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_counts(cls, counts, row_labels: Optional[Sequence] = None,
                    col_labels: Optional[Sequence] = None) -> "ContingencyTable":
        counts = np.asarray(counts, dtype=np.int64)
        if counts.ndim != 2:
            raise ValueError("counts must be a 2-D matrix")
        if (counts < 0).any():
            raise ValueError("counts must be non-negative")
        rows = tuple(row_labels) if row_labels is not None else tuple(range(counts.shape[0]))
        cols = tuple(col_labels) if col_labels is not None else tuple(range(counts.shape[1]))
        keep_r = counts.sum(axis=1) > 0
        keep_c = counts.sum(axis=0) > 0
        stripped = {
            "rows": [r for r, k in zip(rows, keep_r) if not k],
            "cols": [c for c, k in zip(cols, keep_c) if not k],
        }
        counts = counts[keep_r][:, keep_c]
        return cls(tuple(r for r, k in zip(rows, keep_r) if k),
                   tuple(c for c, k in zip(cols, keep_c) if k), counts, stripped)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def shape(self):
        return self.counts.shape

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(self.col_labels, self.row_labels, self.counts.T.copy())


def _as_table(table) -> ContingencyTable:
    if isinstance(table, ContingencyTable):
        return table
    return ContingencyTable.from_counts(table)


def entropy(p) -> float:
    """Shannon entropy in bits of a probability vector, with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float).ravel()
    if (p < 0).any() or abs(math.fsum(p) - 1.0) > 1e-9:
        raise NotNormalized(f"probabilities must be >= 0 and sum to 1 (sum={p.sum()!r})")
    nz = p[p > 0]
    return max(0.0, -math.fsum(nz * np.log2(nz)))


def _entropy_of_counts(counts: np.ndarray, total: int) -> float:
    nz = counts[counts > 0].astype(float)
    return max(0.0, -math.fsum((nz / total) * np.log2(nz / total)))


def marginal_entropies(table) -> tuple[float, float]:
    t = _as_table(table)
    total = t.total
    if total < 1:
        raise EmptyTable("table has no counts")
    return (_entropy_of_counts(t.counts.sum(axis=1), total),
            _entropy_of_counts(t.counts.sum(axis=0), total))


def mutual_information(table) -> float:
    """Plug-in MI in bits between the row and column variables of ``table``.

    Each cell contributes ``n/M * log2(n*M / (n_row*n_col))``. The terms
    are combined with ``math.fsum``, which is correctly rounded and hence
    independent of summation order; ``MI(T) == MI(T.T)`` holds exactly.
    """
    t = _as_table(table)
    total = t.total
    if total < 1:
        raise EmptyTable("table has no counts")
    counts = t.counts
    rows = counts.sum(axis=1).astype(float)
    cols = counts.sum(axis=0).astype(float)
    r, c = np.nonzero(counts)
    n = counts[r, c].astype(float)
    terms = (n / total) * np.log2((n * total) / (rows[r] * cols[c]))
    return max(0.0, math.fsum(terms))


class Normalizer(str, enum.Enum):
    MIN_H = "MinH"
    GEOM_MEAN_H = "GeomMeanH"
    ARITH_MEAN_H = "ArithMeanH"
    MAX_H = "MaxH"
    MAX_LOG_CARD = "MaxLogCard"
    LOG_M = "LogM"


NORMALIZERS = tuple(Normalizer)


def normalizer_value(which: Normalizer, h_row: float, h_col: float, n_rows: int,
                     n_cols: int, total: int) -> float:
    which = Normalizer(which)
    lo, hi = min(h_row, h_col), max(h_row, h_col)
    if which is Normalizer.MIN_H:
        return lo
    if which is Normalizer.GEOM_MEAN_H:
        # rounding in sqrt can leave the geometric mean outside [min, arithmetic mean]
        return min(max(math.sqrt(h_row * h_col), lo), (h_row + h_col) / 2)
    if which is Normalizer.ARITH_MEAN_H:
        return (h_row + h_col) / 2
    if which is Normalizer.MAX_H:
        return hi
    if which is Normalizer.MAX_LOG_CARD:
        return max(math.log2(n_rows), math.log2(n_cols))
    return math.log2(total)


def _normalize(mi: float, denom: float) -> float:
    # MI <= every denominator mathematically; clip only the last-bit excess
    return min(1.0, max(0.0, mi / denom))


def nmi(table, normalizer: Normalizer | str) -> float:
    """MI divided by one of the six normalizers; raises if that normalizer is 0."""
    t = _as_table(table)
    mi = mutual_information(t)
    h_row, h_col = marginal_entropies(t)
    denom = normalizer_value(normalizer, h_row, h_col, t.shape[0], t.shape[1], t.total)
    if denom <= 0:
        raise DegenerateNormalizer(f"normalizer {Normalizer(normalizer).value} is zero for this table")
    return _normalize(mi, denom)


@dataclass(frozen=True)
class NmiReport:
    mi: float
    h_row: float
    h_col: float
    values: dict  # Normalizer -> float, or None where the normalizer is zero

    @property
    def undefined(self) -> list[Normalizer]:
        return [k for k, v in self.values.items() if v is None]

    def to_dict(self) -> dict:
        return {
            "mi_bits": self.mi,
            "h_gender_bits": self.h_row,
            "h_value_bits": self.h_col,
            "nmi": {k.value: ("undefined" if v is None else v) for k, v in self.values.items()},
        }


def nmi_report(table) -> NmiReport:
    t = _as_table(table)
    mi = mutual_information(t)
    h_row, h_col = marginal_entropies(t)
    values = {}
    for which in NORMALIZERS:
        denom = normalizer_value(which, h_row, h_col, t.shape[0], t.shape[1], t.total)
        values[which] = None if denom <= 0 else _normalize(mi, denom)
    return NmiReport(mi, h_row, h_col, values)
