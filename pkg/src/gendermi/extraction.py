"""Noun/partner pair extraction, noun feature observations, and animacy routing."""

from __future__ import annotations

import enum
import io
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .conllu import Gender, Number, Sentence
from .errors import BadClassLabel, ConflictingDuplicate


class Relation(str, enum.Enum):
    AMOD = "amod"
    DOBJ = "dobj"
    IOBJ = "iobj"
    NSUBJ = "nsubj"

    @property
    def is_verbal(self) -> bool:
        return self is not Relation.AMOD

    @classmethod
    def from_deprel(cls, deprel: str, include_passive: bool = True) -> Optional["Relation"]:
        """Map a UD v1 or v2 label to a relation, or ``None`` if it is not one of ours."""
        base, _, subtype = deprel.partition(":")
        if base == "nsubjpass":  # UD v1 spelling of nsubj:pass
            base, subtype = "nsubj", "pass"
        if base == "nsubj" and subtype == "pass" and not include_passive:
            return None
        return _DEPREL_MAP.get(base)


_DEPREL_MAP = {
    "amod": Relation.AMOD,
    "dobj": Relation.DOBJ,
    "obj": Relation.DOBJ,
    "iobj": Relation.IOBJ,
    "nsubj": Relation.NSUBJ,
}


@dataclass(frozen=True)
class DependencyPair:
    noun_lemma: str
    noun_gender: Gender
    noun_number: Optional[Number]
    noun_case: Optional[str]
    partner_lemma: str
    relation: Relation

    @property
    def gender(self) -> Gender:
        return self.noun_gender


@dataclass(frozen=True)
class NounFeatureObservation:
    noun_lemma: str
    gender: Gender
    case: Optional[str]
    number: Optional[Number]


Record = Union[DependencyPair, NounFeatureObservation]
# A collection of records: a plain sequence, or a multiset (record -> count).
Records = Union[Iterable[Record], Mapping[Record, int]]


def iter_weighted(records: Records):
    """Yield ``(record, count)`` for either a sequence or a multiset of records."""
    if isinstance(records, Mapping):
        yield from records.items()
    else:
        for r in records:
            yield r, 1


def _noun_upos(include_propn):
    return ("NOUN", "PROPN") if include_propn else ("NOUN",)


def extract_pairs(sentence: Sentence, relation: Relation, *, include_passive: bool = True,
                  include_propn: bool = False, stats: Optional[Counter] = None) -> list[DependencyPair]:
    """Return one pair per arc of ``relation`` in ``sentence``.

    AMOD arcs need a NOUN head and ADJ dependent; verbal arcs need a VERB
    head and NOUN dependent. Arcs whose noun has no gender are counted in
    ``stats["no_gender"]`` and dropped.
    """
    nouns = _noun_upos(include_propn)
    pairs = []
    for tok in sentence.tokens:
        if tok.head == 0 or Relation.from_deprel(tok.deprel, include_passive) is not relation:
            continue
        head = sentence[tok.head]
        if relation is Relation.AMOD:
            if head.upos not in nouns or tok.upos != "ADJ":
                continue
            noun, partner = head, tok
        else:
            if head.upos != "VERB" or tok.upos not in nouns:
                continue
            noun, partner = tok, head
        if stats is not None:
            stats["arcs"] += 1
        if noun.feats.gender is None:
            if stats is not None:
                stats["no_gender"] += 1
            continue
        pairs.append(DependencyPair(noun.lemma, noun.feats.gender, noun.feats.number,
                                    noun.feats.case, partner.lemma, relation))
    return pairs


def extract_noun_observations(sentence: Sentence, *, include_propn: bool = False,
                              stats: Optional[Counter] = None) -> list[NounFeatureObservation]:
    """One observation per gender-marked noun token, whatever its syntactic role."""
    nouns = _noun_upos(include_propn)
    out = []
    for tok in sentence.tokens:
        if tok.upos not in nouns:
            continue
        if stats is not None:
            stats["nouns"] += 1
        if tok.feats.gender is None:
            if stats is not None:
                stats["no_gender"] += 1
            continue
        out.append(NounFeatureObservation(tok.lemma, tok.feats.gender, tok.feats.case, tok.feats.number))
    return out


class Animacy(str, enum.Enum):
    ANIMATE = "animate"
    INANIMATE = "inanimate"
    UNKNOWN = "unknown"


class AnimacyLexicon:
    """Immutable lemma -> animacy map. Absent lemmata are ``Animacy.UNKNOWN``."""

    def __init__(self, entries: Optional[Mapping[str, Animacy]] = None):
        self._entries = dict(entries or {})

    @property
    def entries(self) -> Mapping[str, Animacy]:
        return dict(self._entries)

    def lookup(self, lemma: str) -> Animacy:
        return self._entries.get(lemma, Animacy.UNKNOWN)

    def __len__(self):
        return len(self._entries)

    def __contains__(self, lemma):
        return lemma in self._entries


def load_lexicon(stream) -> AnimacyLexicon:
    """Read ``lemma<TAB>animate|inanimate`` lines; ``#`` lines are comments."""
    if not isinstance(stream, io.TextIOBase):
        stream = io.TextIOWrapper(stream, encoding="utf-8", newline=None)
    entries: dict[str, Animacy] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        lemma, sep, label = line.partition("\t")
        if not sep or not lemma:
            raise BadClassLabel(f"expected 'lemma<TAB>class', got {line!r}", lineno)
        if label not in ("animate", "inanimate"):
            raise BadClassLabel(f"unknown animacy class {label!r}", lineno)
        cls = Animacy(label)
        prev = entries.get(lemma)
        if prev is not None and prev is not cls:
            raise ConflictingDuplicate(f"{lemma!r} listed as both {prev.value} and {cls.value}", lineno)
        entries[lemma] = cls
    return AnimacyLexicon(entries)


@dataclass
class AnimacyPartition:
    animate: Records
    inanimate: Records
    discarded: int

    def __getitem__(self, animacy: Animacy):
        if animacy is Animacy.ANIMATE:
            return self.animate
        if animacy is Animacy.INANIMATE:
            return self.inanimate
        raise KeyError(animacy)


def partition_by_animacy(records: Records, lexicon: AnimacyLexicon) -> AnimacyPartition:
    """Route records by their noun's lexicon class; unknown nouns are counted and dropped.

    A multiset input yields multiset subsets; a sequence yields lists in input order.
    """
    if isinstance(records, Mapping):
        animate, inanimate = Counter(), Counter()
        discarded = 0
        for rec, n in records.items():
            cls = lexicon.lookup(rec.noun_lemma)
            if cls is Animacy.ANIMATE:
                animate[rec] += n
            elif cls is Animacy.INANIMATE:
                inanimate[rec] += n
            else:
                discarded += n
        return AnimacyPartition(animate, inanimate, discarded)
    animate, inanimate = [], []
    discarded = 0
    for rec in records:
        cls = lexicon.lookup(rec.noun_lemma)
        if cls is Animacy.ANIMATE:
            animate.append(rec)
        elif cls is Animacy.INANIMATE:
            inanimate.append(rec)
        else:
            discarded += 1
    return AnimacyPartition(animate, inanimate, discarded)
