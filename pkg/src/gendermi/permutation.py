"""Type-level gender permutation tests for mutual information.

Each noun type is summarized by a sparse partner-count profile. Shuffling
the gender column over profiles and re-aggregating rows gives the permuted
table in O(nonzero profile entries), without touching individual tokens.

Permutation ``i`` draws its shuffle from a SplitMix64 stream keyed on
``(seed, i)``, so results do not depend on how permutations are spread over
threads.
"""

from __future__ import annotations

import contextlib
import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numba
import numpy as np
from numba import njit, prange

from .conllu import GENDER_ORDER, Gender
from .errors import LabelMultisetMismatch, SingleGender, TooFewNouns, UnassignedNoun
from .extraction import Records, iter_weighted
from .filtering import GenderAssignment
from .infostats import ContingencyTable

DEFAULT_PERMUTATIONS = 10_000
SIGNIFICANCE_LEVEL = 0.05
# Permuted MIs within this many bits of the observed MI are treated as ties.
# Row-relabelled copies of a table have equal MI but may differ in the last bits.
TIE_TOLERANCE = 1e-12
WORKERS_ENV = "GENDERMI_WORKERS"

if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]


@dataclass(frozen=True)
class NounProfile:
    lemma: str
    gender: Gender
    partner_counts: Mapping[int, int]

    @property
    def token_total(self) -> int:
        return sum(self.partner_counts.values())


@dataclass(frozen=True)
class MiTestResult:
    observed_mi: float
    n_permutations: int
    count_strictly_higher: int
    count_higher_or_equal: int
    seed: int
    level: str = "type"
    null_distribution: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def p_paper(self) -> float:
        return self.count_strictly_higher / self.n_permutations

    @property
    def p_conservative(self) -> float:
        return (self.count_higher_or_equal + 1) / (self.n_permutations + 1)

    @property
    def significant(self) -> bool:
        return self.p_paper < SIGNIFICANCE_LEVEL

    def to_dict(self) -> dict:
        return {
            "observed_mi_bits": self.observed_mi,
            "n_permutations": self.n_permutations,
            "count_strictly_higher": self.count_strictly_higher,
            "count_higher_or_equal": self.count_higher_or_equal,
            "p_paper": self.p_paper,
            "p_conservative": self.p_conservative,
            "significant": self.significant,
            "seed": self.seed,
            "level": self.level,
        }


def _partner_of(rec):
    return rec.partner_lemma


def build_profiles(records: Records, assignment: GenderAssignment,
                   value: Callable = _partner_of) -> tuple[list[NounProfile], ContingencyTable]:
    """Aggregate records into per-noun profiles and the gender x value table.

    ``value`` picks the column variable (partner lemma by default; case or
    number for the baselines). Profiles are ordered by lemma and columns
    by sorted value, so the output does not depend on input order.
    """
    per_noun: dict[str, dict] = defaultdict(lambda: defaultdict(int))
    for rec, n in iter_weighted(records):
        if rec.noun_lemma not in assignment.entries:
            raise UnassignedNoun(f"noun {rec.noun_lemma!r} has no assigned gender")
        per_noun[rec.noun_lemma][value(rec)] += n
    vocab = sorted({v for counts in per_noun.values() for v in counts})
    col_index = {v: i for i, v in enumerate(vocab)}
    genders = sorted({assignment.entries[lemma] for lemma in per_noun}, key=GENDER_ORDER.__getitem__)
    row_index = {g: i for i, g in enumerate(genders)}
    matrix = np.zeros((len(genders), len(vocab)), dtype=np.int64)
    profiles = []
    for lemma in sorted(per_noun):
        gender = assignment.entries[lemma]
        pc = {col_index[v]: n for v, n in sorted(per_noun[lemma].items(), key=lambda kv: col_index[kv[0]])}
        for j, n in pc.items():
            matrix[row_index[gender], j] += n
        profiles.append(NounProfile(lemma, gender, pc))
    return profiles, ContingencyTable.from_counts(matrix, genders, vocab)


def table_from_profiles(profiles: Sequence[NounProfile], labels: Optional[Sequence[Gender]] = None,
                        n_cols: Optional[int] = None) -> ContingencyTable:
    """Materialize the table under ``labels`` (default: each profile's own gender)."""
    if labels is None:
        labels = [p.gender for p in profiles]
    genders = sorted(set(labels), key=GENDER_ORDER.__getitem__)
    row = {g: i for i, g in enumerate(genders)}
    if n_cols is None:
        n_cols = 1 + max((j for p in profiles for j in p.partner_counts), default=-1)
    matrix = np.zeros((len(genders), n_cols), dtype=np.int64)
    for p, g in zip(profiles, labels):
        for j, n in p.partner_counts.items():
            matrix[row[g], j] += n
    return ContingencyTable.from_counts(matrix, genders, range(n_cols))


def expand_to_tokens(profiles: Sequence[NounProfile]) -> list[NounProfile]:
    """One single-token profile per pair token, for token-level shuffling."""
    out = []
    for p in profiles:
        for j, n in p.partner_counts.items():
            out.extend(NounProfile(p.lemma, p.gender, {j: 1}) for _ in range(n))
    return out


# ---------------------------------------------------------------------------
# compiled kernels

@dataclass(frozen=True)
class _Compiled:
    indptr: np.ndarray
    indices: np.ndarray
    counts: np.ndarray
    codes: np.ndarray
    genders: tuple
    col_totals: np.ndarray
    total: int


def _compile(profiles: Sequence[NounProfile]) -> _Compiled:
    genders = tuple(sorted({p.gender for p in profiles}, key=GENDER_ORDER.__getitem__))
    code = {g: i for i, g in enumerate(genders)}
    sizes = np.fromiter((len(p.partner_counts) for p in profiles), dtype=np.int64, count=len(profiles))
    indptr = np.zeros(len(profiles) + 1, dtype=np.int64)
    np.cumsum(sizes, out=indptr[1:])
    nnz = int(indptr[-1])
    indices = np.empty(nnz, dtype=np.int64)
    counts = np.empty(nnz, dtype=np.int64)
    k = 0
    for p in profiles:
        m = len(p.partner_counts)
        indices[k:k + m] = np.fromiter(p.partner_counts.keys(), dtype=np.int64, count=m)
        counts[k:k + m] = np.fromiter(p.partner_counts.values(), dtype=np.int64, count=m)
        k += m
    n_cols = int(indices.max()) + 1 if nnz else 0
    col_totals = np.bincount(indices, weights=counts, minlength=n_cols).astype(np.int64)
    codes = np.array([code[p.gender] for p in profiles], dtype=np.int64)
    return _Compiled(indptr, indices, counts, codes, genders, col_totals, int(counts.sum()))


_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True)
def _stream_start(seed, index):
    return _mix64(seed + _GAMMA) ^ _mix64(np.uint64(index) * _GAMMA + _MIX2)


@njit(cache=True)
def _shuffle(labels, state):
    """In-place Fisher-Yates driven by a SplitMix64 stream starting at ``state``."""
    for i in range(labels.shape[0] - 1, 0, -1):
        state = state + _GAMMA
        u = (_mix64(state) >> _S11) * _INV53
        j = int(u * (i + 1))
        tmp = labels[i]
        labels[i] = labels[j]
        labels[j] = tmp
    return state


@njit(cache=True)
def _mi_for_labels(labels, indptr, indices, counts, col_totals, n_rows, skip, total):
    n_cols = col_totals.shape[0]
    table = np.zeros((n_rows, n_cols), dtype=np.int64)
    row_totals = np.zeros(n_rows, dtype=np.int64)
    for noun in range(labels.shape[0]):
        g = labels[noun]
        if g == skip:
            continue
        for k in range(indptr[noun], indptr[noun + 1]):
            table[g, indices[k]] += counts[k]
            row_totals[g] += counts[k]
    # the skipped row is whatever the other rows leave of each column total
    rest = 0
    for g in range(n_rows):
        if g != skip:
            rest += row_totals[g]
    row_totals[skip] = total - rest
    for a in range(n_cols):
        s = 0
        for g in range(n_rows):
            if g != skip:
                s += table[g, a]
        table[skip, a] = col_totals[a] - s
    m = float(total)
    mi = 0.0
    for g in range(n_rows):
        rg = float(row_totals[g])
        if rg == 0.0:
            continue
        for a in range(n_cols):
            n = table[g, a]
            if n > 0:
                nf = float(n)
                mi += (nf / m) * np.log2((nf * m) / (rg * float(col_totals[a])))
    return max(mi, 0.0)


@njit(parallel=True, cache=True)
def _permutation_mis(base, n_perm, seed, indptr, indices, counts, col_totals, n_rows, skip, total):
    out = np.empty(n_perm, dtype=np.float64)
    for b in prange(n_perm):
        labels = base.copy()
        _shuffle(labels, _stream_start(seed, b))
        out[b] = _mi_for_labels(labels, indptr, indices, counts, col_totals, n_rows, skip, total)
    return out


@njit(cache=True)
def _permuted_labels(base, seed, index):
    labels = base.copy()
    _shuffle(labels, _stream_start(seed, index))
    return labels


def _skip_row(codes, n_rows):
    # re-deriving the most populous gender row from column totals saves the most work
    return int(np.argmax(np.bincount(codes, minlength=n_rows)))


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@contextlib.contextmanager
def _threads(workers):
    workers = default_workers() if workers is None else int(workers)
    workers = max(1, min(workers, numba.config.NUMBA_NUM_THREADS))
    previous = numba.get_num_threads()
    numba.set_num_threads(workers)
    try:
        yield workers
    finally:
        numba.set_num_threads(previous)


def _seed64(seed: int) -> np.uint64:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.uint64(seed)


def permuted_labels(profiles: Sequence[NounProfile], seed: int, index: int) -> list[Gender]:
    """The gender column used by permutation ``index`` of a test run with ``seed``."""
    c = _compile(profiles)
    codes = _permuted_labels(c.codes, _seed64(seed), index)
    return [c.genders[i] for i in codes]


def mi_under_assignment(profiles: Sequence[NounProfile], labels: Sequence[Gender]) -> float:
    """MI of the table obtained by giving profile ``k`` the gender ``labels[k]``."""
    if len(labels) != len(profiles) or sorted(labels, key=GENDER_ORDER.__getitem__) != sorted(
            (p.gender for p in profiles), key=GENDER_ORDER.__getitem__):
        raise LabelMultisetMismatch("labels are not a permutation of the profiles' genders")
    c = _compile(profiles)
    if c.total == 0:
        return 0.0
    code = {g: i for i, g in enumerate(c.genders)}
    lab = np.array([code[g] for g in labels], dtype=np.int64)
    n_rows = len(c.genders)
    return float(_mi_for_labels(lab, c.indptr, c.indices, c.counts, c.col_totals,
                                n_rows, _skip_row(c.codes, n_rows), c.total))


def permutation_test(profiles: Sequence[NounProfile], n_permutations: int = DEFAULT_PERMUTATIONS,
                     seed: int = 0, *, workers: Optional[int] = None, level: str = "type",
                     keep_null: bool = False) -> MiTestResult:
    """Permutation test of MI(gender; value) shuffling genders over noun types.

    ``level="token"`` shuffles genders over individual pair tokens instead
    (sensitivity analysis only; it ignores within-noun dependence).
    """
    if level not in ("type", "token"):
        raise ValueError(f"level must be 'type' or 'token', got {level!r}")
    if n_permutations < 1:
        raise ValueError("n_permutations must be >= 1")
    if len(profiles) < 2:
        raise TooFewNouns(f"need at least 2 noun profiles, got {len(profiles)}")
    if len({p.gender for p in profiles}) < 2:
        raise SingleGender("all nouns share one gender; the test is undefined")
    if level == "token":
        profiles = expand_to_tokens(profiles)
    c = _compile(profiles)
    n_rows = len(c.genders)
    skip = _skip_row(c.codes, n_rows)
    observed = float(_mi_for_labels(c.codes, c.indptr, c.indices, c.counts, c.col_totals,
                                    n_rows, skip, c.total))
    with _threads(workers):
        null = _permutation_mis(c.codes, n_permutations, _seed64(seed), c.indptr, c.indices,
                                c.counts, c.col_totals, n_rows, skip, c.total)
    higher = int(np.count_nonzero(null > observed + TIE_TOLERANCE))
    higher_eq = int(np.count_nonzero(null >= observed - TIE_TOLERANCE))
    return MiTestResult(observed, n_permutations, higher, higher_eq, int(seed), level,
                        null if keep_null else None)
