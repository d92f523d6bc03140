"""Synthetic noun/partner corpora with a known amount of gender dependence.

Each noun type draws a gender; noun token frequencies are Zipfian; each
token's partner comes from ``(1 - mixing_weight) * Q + mixing_weight * Q_g``
where ``Q`` is uniform over all partners and ``Q_g`` is uniform over a block
of partners reserved for gender ``g`` (blocks are disjoint).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, asdict
from typing import Optional, TextIO

import numpy as np

from .conllu import Gender, Number
from .errors import InvalidParams
from .extraction import DependencyPair, NounFeatureObservation, Relation
from .filtering import GenderAssignment
from .infostats import entropy, mutual_information
from .permutation import NounProfile

GENDERS = tuple(Gender)
NUMBERS = tuple(Number)


@dataclass(frozen=True)
class SynthParams:
    n_noun_types: int = 200
    n_partner_types: int = 100
    gender_probs: tuple = (0.5, 0.5)
    zipf_exponent: float = 1.0
    mixing_weight: float = 0.0
    tokens: int = 20_000
    # noun case labels drawn independently of gender; empty = no Case feature
    cases: tuple = ("Nom", "Acc", "Gen", "Dat")
    noun_prefix: str = "noun"
    partner_prefix: str = "adj"

    def validate(self):
        probs = np.asarray(self.gender_probs, dtype=float)
        problems = []
        if self.n_noun_types < 1:
            problems.append("n_noun_types must be >= 1")
        if not 1 <= len(probs) <= len(GENDERS):
            problems.append(f"gender_probs must have 1..{len(GENDERS)} entries")
        elif (probs < 0).any() or abs(probs.sum() - 1.0) > 1e-9:
            problems.append("gender_probs must be non-negative and sum to 1")
        if self.n_partner_types < max(1, len(probs)):
            problems.append("need at least one partner type per gender")
        if not self.zipf_exponent > 0:
            problems.append("zipf_exponent must be positive")
        if not 0.0 <= self.mixing_weight <= 1.0:
            problems.append("mixing_weight must lie in [0, 1]")
        if self.tokens < self.n_noun_types:
            problems.append("tokens must be >= n_noun_types")
        if problems:
            raise InvalidParams("; ".join(problems))
        return self


def partner_blocks(n_partner_types: int, n_genders: int) -> list[np.ndarray]:
    """Disjoint, contiguous partner-index blocks, one per gender."""
    return np.array_split(np.arange(n_partner_types), n_genders)


@dataclass
class SynthCorpus:
    params: SynthParams
    seed: int
    relation: Relation
    noun_genders: np.ndarray     # gender code per noun type
    noun_idx: np.ndarray         # per token
    partner_idx: np.ndarray      # per token
    case_idx: np.ndarray         # per token, -1 when the corpus has no case
    number_idx: np.ndarray       # per token
    _pairs: Optional[Counter] = field(default=None, repr=False)

    def noun_lemma(self, k: int) -> str:
        width = len(str(self.params.n_noun_types - 1))
        return f"{self.params.noun_prefix}{k:0{width}d}"

    def partner_lemma(self, j: int) -> str:
        width = len(str(self.params.n_partner_types - 1))
        return f"{self.params.partner_prefix}{j:0{width}d}"

    def _case(self, c):
        return None if c < 0 else self.params.cases[c]

    @property
    def pairs(self) -> Counter:
        """Multiset of generated pairs."""
        if self._pairs is None:
            keys = np.stack([self.noun_idx, self.partner_idx, self.case_idx, self.number_idx], axis=1)
            uniq, counts = np.unique(keys, axis=0, return_counts=True)
            self._pairs = Counter({
                DependencyPair(self.noun_lemma(k), GENDERS[self.noun_genders[k]], NUMBERS[num],
                               self._case(c), self.partner_lemma(j), self.relation): int(n)
                for (k, j, c, num), n in zip(uniq.tolist(), counts.tolist())
            })
        return self._pairs

    def observations(self) -> Counter:
        obs = Counter()
        for p, n in self.pairs.items():
            obs[NounFeatureObservation(p.noun_lemma, p.noun_gender, p.noun_case, p.noun_number)] += n
        return obs

    @property
    def assignment(self) -> GenderAssignment:
        return GenderAssignment({self.noun_lemma(k): GENDERS[g] for k, g in enumerate(self.noun_genders)})

    @property
    def truth(self) -> dict:
        codes = self.noun_genders[self.noun_idx]
        freq = np.bincount(codes, minlength=len(self.params.gender_probs)) / len(codes)
        return {
            "params": asdict(self.params),
            "seed": self.seed,
            "relation": self.relation.value,
            "expected_mi_bits": expected_mi(self.params),
            "empirical_gender_entropy_bits": entropy(freq),
            "partner_blocks": [[int(b[0]), int(b[-1])] for b in
                               partner_blocks(self.params.n_partner_types, len(self.params.gender_probs))],
        }

    def __iter__(self):
        yield self.pairs
        yield self.assignment
        yield self.truth

    def profiles(self) -> list[NounProfile]:
        """Noun profiles built straight from the index arrays (no record objects)."""
        used, partner_dense = np.unique(self.partner_idx, return_inverse=True)
        n_cols = len(used)
        keys = self.noun_idx.astype(np.int64) * n_cols + partner_dense
        uniq, counts = np.unique(keys, return_counts=True)
        rows = uniq // n_cols
        bounds = np.searchsorted(rows, np.arange(self.params.n_noun_types + 1))
        out = []
        for k in range(self.params.n_noun_types):
            lo, hi = bounds[k], bounds[k + 1]
            if lo == hi:
                continue
            pc = dict(zip((uniq[lo:hi] % n_cols).tolist(), counts[lo:hi].tolist()))
            out.append(NounProfile(self.noun_lemma(k), GENDERS[self.noun_genders[k]], pc))
        return out

    def table(self) -> np.ndarray:
        """Gender x partner count matrix (rows in gender-code order)."""
        g = self.noun_genders[self.noun_idx]
        m = np.zeros((len(self.params.gender_probs), self.params.n_partner_types), dtype=np.int64)
        np.add.at(m, (g, self.partner_idx), 1)
        return m

    def write_conllu(self, out: TextIO, sent_prefix: str = "s"):
        """Emit one two-token sentence per pair token, carrying a single arc."""
        for t in range(len(self.noun_idx)):
            k = int(self.noun_idx[t])
            noun = self.noun_lemma(k)
            partner = self.partner_lemma(int(self.partner_idx[t]))
            feats = []
            case = self._case(int(self.case_idx[t]))
            if case is not None:
                feats.append(f"Case={case}")
            feats.append(f"Gender={GENDERS[self.noun_genders[k]].value}")
            feats.append(f"Number={NUMBERS[self.number_idx[t]].value}")
            feats = "|".join(feats)
            out.write(f"# sent_id = {sent_prefix}{t}\n")
            if self.relation is Relation.AMOD:
                out.write(f"1\t{noun}\t{noun}\tNOUN\t_\t{feats}\t0\troot\t_\t_\n")
                out.write(f"2\t{partner}\t{partner}\tADJ\t_\t_\t1\tamod\t_\t_\n\n")
            else:
                deprel = "obj" if self.relation is Relation.DOBJ else self.relation.value
                out.write(f"1\t{partner}\t{partner}\tVERB\t_\t_\t0\troot\t_\t_\n")
                out.write(f"2\t{noun}\t{noun}\tNOUN\t_\t{feats}\t1\t{deprel}\t_\t_\n\n")

    def lexicon_lines(self, animacy: str = "inanimate") -> list[str]:
        return [f"{self.noun_lemma(k)}\t{animacy}\n" for k in range(self.params.n_noun_types)]


def generate(params: SynthParams, seed: int, relation: Relation = Relation.AMOD,
             noun_genders: Optional[np.ndarray] = None) -> SynthCorpus:
    """Draw a synthetic corpus; identical ``(params, seed)`` give identical corpora.

    ``noun_genders`` (gender codes, one per noun type) overrides the random
    gender draw so several corpora can share one noun inventory.
    """
    params.validate()
    rng = np.random.default_rng(seed)
    n_nouns, n_partners = params.n_noun_types, params.n_partner_types
    probs = np.asarray(params.gender_probs, dtype=float)
    probs = probs / probs.sum()
    drawn = rng.choice(len(probs), size=n_nouns, p=probs)
    if noun_genders is None:
        noun_genders = drawn
    else:
        noun_genders = np.asarray(noun_genders, dtype=np.int64)
        if noun_genders.shape != (n_nouns,) or noun_genders.min() < 0 or noun_genders.max() >= len(probs):
            raise InvalidParams("noun_genders must hold one valid gender code per noun type")

    # every noun type occurs at least once; the remaining tokens follow Zipf
    weights = np.arange(1, n_nouns + 1, dtype=float) ** -params.zipf_exponent
    extra = rng.choice(n_nouns, size=params.tokens - n_nouns, p=weights / weights.sum())
    noun_idx = rng.permutation(np.concatenate([np.arange(n_nouns), extra]))

    blocks = partner_blocks(n_partners, len(probs))
    starts = np.array([b[0] for b in blocks])
    sizes = np.array([len(b) for b in blocks])
    g = noun_genders[noun_idx]
    shared = rng.integers(0, n_partners, size=params.tokens)
    own = starts[g] + np.floor(rng.random(params.tokens) * sizes[g]).astype(np.int64)
    use_own = rng.random(params.tokens) < params.mixing_weight
    partner_idx = np.where(use_own, own, shared)

    if params.cases:
        case_idx = rng.integers(0, len(params.cases), size=params.tokens)
    else:
        case_idx = np.full(params.tokens, -1)
    number_idx = rng.integers(0, len(NUMBERS), size=params.tokens)
    return SynthCorpus(params, seed, relation, noun_genders, noun_idx.astype(np.int64),
                       partner_idx.astype(np.int64), case_idx.astype(np.int64),
                       number_idx.astype(np.int64))


def expected_mi(params: SynthParams) -> Optional[float]:
    """Population MI in bits where it is known in closed form, else ``None``.

    With no mixing the partner is independent of gender. With full mixing
    the partner block identifies the gender, so MI equals the gender
    entropy. Intermediate weights have no closed form here.
    """
    if params.mixing_weight == 0.0:
        return 0.0
    if params.mixing_weight == 1.0:
        return entropy(np.asarray(params.gender_probs, dtype=float))
    return None


def empirical_mi_bits(corpus: SynthCorpus) -> float:
    return mutual_information(corpus.table())

