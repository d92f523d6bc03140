"""Rank-order token-coverage filtering and type-level gender assignment."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .conllu import GENDER_ORDER, Gender
from .errors import EmptyCounts
from .extraction import Records, iter_weighted

DEFAULT_COVERAGE = 0.90


def _as_fraction(coverage: float) -> Fraction:
    # 0.9 must mean exactly 9/10, otherwise float rounding can demand one extra lemma
    frac = Fraction(coverage).limit_denominator(10**9)
    if not 0 < frac <= 1:
        raise ValueError(f"coverage must lie in (0, 1], got {coverage}")
    return frac


def rank_lemmata(counts: Mapping[str, int]) -> list[str]:
    """Lemmata by descending count; ties broken lexicographically."""
    return sorted(counts, key=lambda lemma: (-counts[lemma], lemma))


def coverage_filter(counts: Mapping[str, int], coverage: float = DEFAULT_COVERAGE) -> set[str]:
    """Smallest rank-order prefix of lemmata holding at least ``coverage`` of all tokens.

    >>> sorted(coverage_filter({"a": 50, "b": 30, "c": 15, "d": 5}, 0.9))
    ['a', 'b', 'c']
    """
    if not counts:
        raise EmptyCounts("cannot filter an empty count table")
    frac = _as_fraction(coverage)
    total = sum(counts.values())
    if any(c < 1 for c in counts.values()):
        raise ValueError("all counts must be >= 1")
    kept = set()
    running = 0
    for lemma in rank_lemmata(counts):
        kept.add(lemma)
        running += counts[lemma]
        if running * frac.denominator >= frac.numerator * total:
            break
    return kept


def partner_counts(records: Records) -> Counter:
    counts = Counter()
    for rec, n in iter_weighted(records):
        counts[rec.partner_lemma] += n
    return counts


def noun_counts(records: Records) -> Counter:
    counts = Counter()
    for rec, n in iter_weighted(records):
        counts[rec.noun_lemma] += n
    return counts


def apply_retention(pairs: Records, retained_partners: Iterable[str] | None,
                    retained_nouns: Iterable[str]) -> Records:
    """Keep pairs whose partner and noun lemmata are both retained.

    ``retained_partners=None`` skips the partner check (used for noun feature
    observations, which have no partner lemma).
    """
    partners = None if retained_partners is None else set(retained_partners)
    nouns = set(retained_nouns)

    def keep(rec):
        if rec.noun_lemma not in nouns:
            return False
        return partners is None or rec.partner_lemma in partners

    if isinstance(pairs, Mapping):
        return Counter({rec: n for rec, n in pairs.items() if keep(rec)})
    return [rec for rec in pairs if keep(rec)]


@dataclass
class GenderAssignment:
    entries: dict[str, Gender] = field(default_factory=dict)
    dropped: set[str] = field(default_factory=set)

    def __getitem__(self, lemma: str) -> Gender:
        return self.entries[lemma]

    def __contains__(self, lemma):
        return lemma in self.entries

    @property
    def genders(self) -> list[Gender]:
        return sorted(set(self.entries.values()), key=GENDER_ORDER.__getitem__)


def assign_type_gender(records: Records) -> GenderAssignment:
    """Give each noun lemma its modal token gender; lemmata with a tied mode are dropped."""
    tallies: dict[str, Counter] = defaultdict(Counter)
    for rec, n in iter_weighted(records):
        tallies[rec.noun_lemma][rec.gender] += n
    out = GenderAssignment()
    for lemma, tally in tallies.items():
        (top, top_n), *rest = tally.most_common()
        if rest and rest[0][1] == top_n:
            out.dropped.add(lemma)
        else:
            out.entries[lemma] = top
    return out


def drop_unassigned(records: Records, assignment: GenderAssignment) -> tuple[Records, int]:
    """Remove records whose noun was dropped for a tied gender; returns (kept, n_removed)."""
    if isinstance(records, Mapping):
        kept = Counter()
        removed = 0
        for rec, n in records.items():
            if rec.noun_lemma in assignment.entries:
                kept[rec] += n
            else:
                removed += n
        return kept, removed
    records = list(records)
    kept = [r for r in records if r.noun_lemma in assignment.entries]
    return kept, len(records) - len(kept)
