import io
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from gendermi.conllu import Gender, Number, parse_conllu
from gendermi.errors import BadClassLabel, ConflictingDuplicate
from gendermi.extraction import (Animacy, AnimacyLexicon, DependencyPair, NounFeatureObservation,
                                 Relation, extract_noun_observations, extract_pairs, load_lexicon,
                                 partition_by_animacy)

from conftest import FIG1


def one(text):
    (sent,) = parse_conllu(io.StringIO(text))
    return sent


def lexicon(text):
    return load_lexicon(io.BytesIO(text.encode("utf-8")))


def test_fig1_amod():
    assert extract_pairs(one(FIG1), Relation.AMOD) == [
        DependencyPair("puente", Gender.MASC, Number.SING, None, "robusto", Relation.AMOD)]


def test_fig1_dobj():
    assert extract_pairs(one(FIG1), Relation.DOBJ) == [
        DependencyPair("puente", Gender.MASC, Number.SING, None, "cruzar", Relation.DOBJ)]


def test_fig1_no_iobj_or_nsubj():
    sent = one(FIG1)
    assert extract_pairs(sent, Relation.IOBJ) == []
    # "yo" is a PRON, so the nsubj arc does not qualify
    assert extract_pairs(sent, Relation.NSUBJ) == []


def test_fig1_observation():
    assert extract_noun_observations(one(FIG1)) == [
        NounFeatureObservation("puente", Gender.MASC, None, Number.SING)]


def test_gabel_observation():
    sent = one("1\tGabel\tGabel\tNOUN\t_\tCase=Gen|Gender=Fem|Number=Sing\t0\troot\t_\t_\n\n")
    assert extract_noun_observations(sent) == [NounFeatureObservation("Gabel", Gender.FEM, "Gen", Number.SING)]


def test_no_nouns():
    sent = one("1\tgeht\tgehen\tVERB\t_\t_\t0\troot\t_\t_\n\n")
    assert extract_noun_observations(sent) == []
    assert extract_pairs(sent, Relation.AMOD) == []


@pytest.mark.parametrize("deprel, expected", [
    ("amod", Relation.AMOD), ("dobj", Relation.DOBJ), ("obj", Relation.DOBJ), ("iobj", Relation.IOBJ),
    ("nsubj", Relation.NSUBJ), ("nsubj:pass", Relation.NSUBJ), ("nsubjpass", Relation.NSUBJ),
    ("amod:att", Relation.AMOD), ("det", None), ("obl", None),
])
def test_relation_labels(deprel, expected):
    assert Relation.from_deprel(deprel) is expected


def test_passive_subjects_can_be_excluded():
    assert Relation.from_deprel("nsubj:pass", include_passive=False) is None
    assert Relation.from_deprel("nsubjpass", include_passive=False) is None
    assert Relation.from_deprel("nsubj", include_passive=False) is Relation.NSUBJ


def test_gender_less_noun_is_counted_and_dropped():
    text = ("1\tLeute\tLeute\tNOUN\t_\tNumber=Plur\t0\troot\t_\t_\n"
            "2\tgroße\tgroß\tADJ\t_\t_\t1\tamod\t_\t_\n\n")
    stats = Counter()
    assert extract_pairs(one(text), Relation.AMOD, stats=stats) == []
    assert stats == Counter(arcs=1, no_gender=1)


def test_propn_gate():
    text = ("1\tBerlin\tBerlin\tPROPN\t_\tGender=Neut\t0\troot\t_\t_\n"
            "2\tschönes\tschön\tADJ\t_\t_\t1\tamod\t_\t_\n\n")
    assert extract_pairs(one(text), Relation.AMOD) == []
    assert len(extract_pairs(one(text), Relation.AMOD, include_propn=True)) == 1


def test_one_pair_per_arc():
    text = ("1\tgroße\tgroß\tADJ\t_\t_\t3\tamod\t_\t_\n"
            "2\tgroße\tgroß\tADJ\t_\t_\t3\tamod\t_\t_\n"
            "3\tTisch\tTisch\tNOUN\t_\tGender=Masc\t0\troot\t_\t_\n\n")
    assert len(extract_pairs(one(text), Relation.AMOD)) == 2


def test_lexicon_basic():
    lex = lexicon("puente\tinanimate\nChef\tanimate\n")
    assert len(lex.entries) == 2
    assert lex.lookup("Chef") is Animacy.ANIMATE
    assert lex.lookup("Xyzzy") is Animacy.UNKNOWN


def test_lexicon_bruecke():
    assert lexicon("# comment\nBrücke\tinanimate\n").lookup("Brücke") is Animacy.INANIMATE


def test_lexicon_errors():
    with pytest.raises(BadClassLabel) as err:
        lexicon("a\tinanimate\nb\tmaybe\n")
    assert err.value.line_number == 2
    with pytest.raises(BadClassLabel):
        lexicon("no-tab-here\n")
    with pytest.raises(ConflictingDuplicate) as err:
        lexicon("a\tanimate\nb\tinanimate\na\tinanimate\n")
    assert err.value.line_number == 3
    assert len(lexicon("a\tanimate\na\tanimate\n").entries) == 1


def _pair(noun):
    return DependencyPair(noun, Gender.MASC, None, None, "x", Relation.AMOD)


def test_partition_routing():
    lex = lexicon("puente\tinanimate\nChef\tanimate\n")
    recs = [_pair("puente"), _pair("Chef"), _pair("Xyzzy"), _pair("puente")]
    part = partition_by_animacy(recs, lex)
    assert part.inanimate == [_pair("puente")] * 2
    assert part.animate == [_pair("Chef")]
    assert part.discarded == 1


def test_partition_empty_lexicon_and_single_class():
    recs = [_pair("puente"), _pair("Chef")]
    part = partition_by_animacy(recs, AnimacyLexicon({}))
    assert part.animate == part.inanimate == [] and part.discarded == 2
    part = partition_by_animacy([_pair("puente")], lexicon("puente\tinanimate\n"))
    assert part.animate == []


@given(st.lists(st.sampled_from(["puente", "Chef", "Xyzzy", "Brücke"]), max_size=50))
def test_partition_is_exhaustive(nouns):
    lex = lexicon("puente\tinanimate\nChef\tanimate\nBrücke\tinanimate\n")
    recs = [_pair(n) for n in nouns]
    part = partition_by_animacy(recs, lex)
    assert len(part.animate) + len(part.inanimate) + part.discarded == len(recs)
    weighted = partition_by_animacy(Counter(recs), lex)
    assert sum(weighted.animate.values()) == len(part.animate)
    assert sum(weighted.inanimate.values()) == len(part.inanimate)
    assert weighted.discarded == part.discarded


def _sentences(path):
    with open(path, "rb") as fh:
        return list(parse_conllu(fh))


def test_amod_pairs_match_brute_force_scan(mini_corpus):
    for sent in _sentences(mini_corpus):
        expected = Counter()
        for t in sent.tokens:
            if t.deprel.split(":")[0] == "amod" and t.head and t.upos == "ADJ":
                head = sent.tokens[t.head - 1]
                if head.upos == "NOUN" and head.feats.gender is not None:
                    expected[(head.lemma, t.lemma)] += 1
        got = Counter((p.noun_lemma, p.partner_lemma) for p in extract_pairs(sent, Relation.AMOD))
        assert got == expected


def test_no_unspecified_gender_and_concatenation(mini_corpus):
    sents = _sentences(mini_corpus)
    half = len(sents) // 2
    for rel in Relation:
        whole = Counter(p for s in sents for p in extract_pairs(s, rel))
        parts = Counter(p for s in sents[:half] for p in extract_pairs(s, rel))
        parts.update(p for s in sents[half:] for p in extract_pairs(s, rel))
        assert whole == parts
        assert all(p.noun_gender is not None for p in whole)
    assert all(o.gender is not None for s in sents for o in extract_noun_observations(s))
