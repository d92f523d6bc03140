"""Streaming CoNLL-U reader restricted to what the gender analysis needs.

Only the Gender, Number and Case features are modeled. Multiword-token
ranges and empty nodes are skipped; everything else in a sentence must be
structurally valid or the sentence is dropped (lenient) / rejected (strict).
"""

from __future__ import annotations

import enum
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterator, Optional

from .errors import MalformedFeatures, MalformedLine, InvalidHead

N_COLUMNS = 10


class Gender(str, enum.Enum):
    MASC = "Masc"
    FEM = "Fem"
    NEUT = "Neut"


class Number(str, enum.Enum):
    SING = "Sing"
    PLUR = "Plur"


# Case values outside this set are kept verbatim ("other" cases).
KNOWN_CASES = ("Nom", "Acc", "Gen", "Dat", "Ins", "Loc", "Voc")

GENDER_ORDER = {g: i for i, g in enumerate(Gender)}


@dataclass(frozen=True)
class MorphFeatures:
    """Gender/number/case bundle; ``None`` means the feature is unspecified."""

    gender: Optional[Gender] = None
    number: Optional[Number] = None
    case: Optional[str] = None

    @property
    def case_is_other(self) -> bool:
        return self.case is not None and self.case not in KNOWN_CASES

    def to_feats(self) -> str:
        parts = []
        if self.case is not None:
            parts.append(f"Case={self.case}")
        if self.gender is not None:
            parts.append(f"Gender={self.gender.value}")
        if self.number is not None:
            parts.append(f"Number={self.number.value}")
        return "|".join(parts) if parts else "_"


UNSPECIFIED = MorphFeatures()


@dataclass(frozen=True)
class Token:
    id: int
    surface: str
    lemma: str
    upos: str
    feats: MorphFeatures
    head: int
    deprel: str


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    source_id: Optional[str] = None

    def __len__(self):
        return len(self.tokens)

    def __getitem__(self, token_id: int) -> Token:
        """Return the token with 1-based id ``token_id``."""
        return self.tokens[token_id - 1]


@dataclass
class ParseStats:
    sentences: int = 0
    skipped: int = 0
    reasons: Counter = field(default_factory=Counter)


def parse_feats(feats: str, strict: bool = False) -> MorphFeatures:
    """Map a FEATS column onto :class:`MorphFeatures`.

    Unknown keys are ignored. Values outside the modeled gender/number sets
    (e.g. ``Gender=Com`` or multi-valued ``Gender=Masc,Neut``) count as
    unspecified; unknown case labels are retained as-is.
    """
    if feats == "_" or feats == "":
        return UNSPECIFIED
    gender = number = case = None
    for segment in feats.split("|"):
        key, sep, value = segment.partition("=")
        if not sep:
            if strict:
                raise MalformedFeatures(f"feature segment without '=': {segment!r}")
            continue
        if key == "Gender":
            try:
                gender = Gender(value)
            except ValueError:
                gender = None
        elif key == "Number":
            try:
                number = Number(value)
            except ValueError:
                number = None
        elif key == "Case":
            case = value or None
    return MorphFeatures(gender, number, case)


def _text_stream(stream) -> IO[str]:
    if isinstance(stream, io.TextIOBase):
        return stream
    # newline=None gives universal newlines, so CRLF input is handled too
    return io.TextIOWrapper(stream, encoding="utf-8", newline=None)


def _build_sentence(lines, source_id, strict):
    """Turn (line_number, line) pairs of one block into a Sentence."""
    tokens = []
    for lineno, line in lines:
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise MalformedLine(f"expected {N_COLUMNS} columns, found {len(cols)}", lineno)
        tid = cols[0]
        if "-" in tid or "." in tid:
            continue
        try:
            token_id = int(tid)
            head = int(cols[6])
        except ValueError:
            raise MalformedLine(f"non-integer ID or HEAD: {tid!r}/{cols[6]!r}", lineno) from None
        if token_id != len(tokens) + 1:
            raise MalformedLine(f"token id {token_id} out of sequence", lineno)
        feats = parse_feats(cols[5], strict=strict)
        tokens.append((lineno, Token(token_id, cols[1], cols[2], cols[3], feats, head, cols[7])))
    n = len(tokens)
    for lineno, tok in tokens:
        if tok.head < 0 or tok.head > n or tok.head == tok.id:
            raise InvalidHead(f"head {tok.head} invalid for token {tok.id} in {n}-token sentence", lineno)
    return Sentence(tuple(t for _, t in tokens), source_id)


def parse_conllu(stream, *, strict: bool = False, stats: Optional[ParseStats] = None) -> Iterator[Sentence]:
    """Lazily yield sentences from a UTF-8 CoNLL-U stream (bytes or text).

    In lenient mode a structurally broken sentence is dropped and counted in
    ``stats``; in strict mode the first problem raises with its line number.
    Memory use is bounded by the largest sentence.
    """
    if stats is None:
        stats = ParseStats()
    block: list[tuple[int, str]] = []
    source_id = None

    def flush():
        try:
            sent = _build_sentence(block, source_id, strict)
        except (MalformedLine, InvalidHead, MalformedFeatures) as exc:
            if strict:
                raise
            stats.skipped += 1
            stats.reasons[type(exc).__name__] += 1
            return None
        if not sent.tokens:
            return None
        stats.sentences += 1
        return sent

    for lineno, raw in enumerate(_text_stream(stream), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            if block:
                sent = flush()
                if sent is not None:
                    yield sent
            block = []
            source_id = None
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep and key.strip() == "sent_id":
                source_id = value.strip()
            continue
        block.append((lineno, line))
    if block:
        sent = flush()
        if sent is not None:
            yield sent


def format_sentence(sentence: Sentence) -> str:
    """Serialize a sentence back to CoNLL-U (XPOS, DEPS, MISC written as ``_``)."""
    out = []
    if sentence.source_id is not None:
        out.append(f"# sent_id = {sentence.source_id}")
    for t in sentence.tokens:
        out.append("\t".join([
            str(t.id), t.surface, t.lemma, t.upos, "_", t.feats.to_feats(),
            str(t.head), t.deprel, "_", "_",
        ]))
    return "\n".join(out) + "\n\n"
