#!/usr/bin/env python3
"""Regenerate the bundled German-like mini-corpus and its animacy lexicon.

The corpus has 200 well-formed sentences plus a few deliberately broken or
unusual ones (multiword tokens, an empty node, a bad column count, a head
out of range, PROPN, gender-less and lexicon-absent nouns, a noun with a
tied gender, nsubj:pass). Animate nouns pick adjectives/verbs that depend
strongly on gender; inanimate nouns only weakly.

    python scripts/make_minicorpus.py [outdir]
"""

import random
import sys
from pathlib import Path

INANIMATE = [("Brücke", "Fem"), ("Tisch", "Masc"), ("Haus", "Neut"), ("Gabel", "Fem"),
             ("Boden", "Masc"), ("Fenster", "Neut"), ("Stadt", "Fem"), ("Berg", "Masc"),
             ("Buch", "Neut"), ("Straße", "Fem"), ("Wald", "Masc"), ("Auto", "Neut")]
ANIMATE = [("Lehrer", "Masc"), ("Lehrerin", "Fem"), ("Kind", "Neut"), ("Mann", "Masc"),
           ("Frau", "Fem"), ("Hund", "Masc"), ("Katze", "Fem"), ("Pferd", "Neut")]
ADJ = ["groß", "klein", "schön", "alt", "neu", "stark", "zierlich", "kalt", "hoch", "rot"]
VERB = ["sehen", "bauen", "geben", "kaufen", "lieben", "finden", "zeigen", "schreiben"]
ADJ_BY_GENDER = {"Masc": ["stark", "alt", "groß"], "Fem": ["schön", "zierlich", "klein"],
                 "Neut": ["neu", "rot", "hoch"]}
VERB_BY_GENDER = {"Masc": ["bauen", "finden"], "Fem": ["lieben", "zeigen"], "Neut": ["kaufen", "sehen"]}
DET = {("Masc", "Nom"): "der", ("Fem", "Nom"): "die", ("Neut", "Nom"): "das",
       ("Masc", "Acc"): "den", ("Fem", "Acc"): "die", ("Neut", "Acc"): "das",
       ("Masc", "Dat"): "dem", ("Fem", "Dat"): "der", ("Neut", "Dat"): "dem"}


def pick_noun(rng):
    if rng.random() < 0.4:
        return ANIMATE[rng.randrange(len(ANIMATE))], 0.85
    return INANIMATE[rng.randrange(len(INANIMATE))], 0.25


def pick(rng, strength, biased, pool):
    return rng.choice(biased) if rng.random() < strength else rng.choice(pool)


def feats(gender, case, number):
    parts = []
    if case:
        parts.append(f"Case={case}")
    if gender:
        parts.append(f"Gender={gender}")
    if number:
        parts.append(f"Number={number}")
    return "|".join(parts) or "_"


def row(i, form, lemma, upos, f, head, deprel):
    return f"{i}\t{form}\t{lemma}\t{upos}\t_\t{f}\t{head}\t{deprel}\t_\t_"


def sentence(rng, n):
    """DET ADJ NOUN VERB [DET NOUN(iobj)] DET ADJ NOUN(obj) PUNCT."""
    (subj, sg), s_strength = pick_noun(rng)
    (obj, og), o_strength = pick_noun(rng)
    verb = pick(rng, o_strength, VERB_BY_GENDER[og], VERB)
    s_num = "Plur" if rng.random() < 0.3 else "Sing"
    o_num = "Plur" if rng.random() < 0.3 else "Sing"
    subj_rel = "nsubj:pass" if n % 37 == 5 else "nsubj"
    lines = [f"# sent_id = mini-{n:03d}"]
    toks = [
        (DET[(sg, "Nom")], DET[(sg, "Nom")], "DET", feats(sg, "Nom", s_num), 3, "det"),
        (None, pick(rng, s_strength, ADJ_BY_GENDER[sg], ADJ), "ADJ", "_", 3, "amod"),
        (subj, subj, "NOUN", feats(sg, "Nom", s_num), 4, subj_rel),
        (verb, verb, "VERB", "_", 0, "root"),
    ]
    with_iobj = rng.random() < 0.3
    if with_iobj:
        (io, ig), i_strength = pick_noun(rng)
        i_num = "Plur" if rng.random() < 0.3 else "Sing"
        toks.append((DET[(ig, "Dat")], DET[(ig, "Dat")], "DET", feats(ig, "Dat", i_num), 6, "det"))
        toks.append((io, io, "NOUN", feats(ig, "Dat", i_num), 4, "iobj"))
    base = len(toks)
    toks += [
        (DET[(og, "Acc")], DET[(og, "Acc")], "DET", feats(og, "Acc", o_num), base + 3, "det"),
        (None, pick(rng, o_strength, ADJ_BY_GENDER[og], ADJ), "ADJ", "_", base + 3, "amod"),
        (obj, obj, "NOUN", feats(og, "Acc", o_num), 4, "obj"),
        (".", ".", "PUNCT", "_", 4, "punct"),
    ]
    for i, (form, lemma, upos, f, head, rel) in enumerate(toks, start=1):
        lines.append(row(i, form or lemma, lemma, upos, f, head, rel))
    return lines


def special_sentences():
    """Edge cases appended after the regular sentences."""
    return [
        # multiword token range + empty node, otherwise valid
        ["# sent_id = mini-mwt",
         "1-2\tzum\t_\t_\t_\t_\t_\t_\t_\t_",
         row(1, "zu", "zu", "ADP", "_", 3, "case"),
         row(2, "dem", "der", "DET", "Case=Dat|Gender=Masc|Number=Sing", 3, "det"),
         row(3, "Tisch", "Tisch", "NOUN", "Case=Dat|Gender=Masc|Number=Sing", 0, "root"),
         "3.1\tist\tsein\tAUX\t_\t_\t_\t_\t0:root\t_",
         row(4, "alten", "alt", "ADJ", "_", 3, "amod")],
        # PROPN subject, gender-less noun object, lexicon-absent noun with amod
        ["# sent_id = mini-odd",
         row(1, "Berlin", "Berlin", "PROPN", "Case=Nom|Gender=Neut|Number=Sing", 2, "nsubj"),
         row(2, "sieht", "sehen", "VERB", "_", 0, "root"),
         row(3, "Leute", "Leute", "NOUN", "Case=Acc|Number=Plur", 2, "obj"),
         row(4, "und", "und", "CCONJ", "_", 6, "cc"),
         row(5, "großen", "groß", "ADJ", "_", 6, "amod"),
         row(6, "Xyzzy", "Xyzzy", "NOUN", "Case=Acc|Gender=Masc|Number=Sing", 3, "conj")],
        # wrong column count -> dropped in lenient mode
        ["# sent_id = mini-badcols",
         row(1, "Haus", "Haus", "NOUN", "Case=Nom|Gender=Neut|Number=Sing", 0, "root"),
         "2\tneu\tneu\tADJ\t_\t_\t1\tamod\t_"],
        # head out of range -> dropped in lenient mode
        ["# sent_id = mini-badhead",
         row(1, "Buch", "Buch", "NOUN", "Case=Nom|Gender=Neut|Number=Sing", 0, "root"),
         row(2, "rot", "rot", "ADJ", "_", 9, "amod")],
    ] + [
        # Joghurt is attested as both Masc and Neut: a tied modal gender
        [f"# sent_id = mini-joghurt-{k}",
         row(1, "Joghurt", "Joghurt", "NOUN", f"Case=Nom|Gender={g}|Number=Sing", 0, "root"),
         row(2, "kalt", "kalt", "ADJ", "_", 1, "amod")]
        for k, g in enumerate(["Masc", "Neut", "Masc", "Neut"])
    ]


def main(outdir):
    outdir = Path(outdir)
    rng = random.Random(20200501)
    blocks = [sentence(rng, n) for n in range(200)]
    specials = special_sentences()
    # interleave the specials so they are not all at the end
    for k, block in enumerate(specials):
        blocks.insert(25 * (k + 1), block)
    text = "\n\n".join("\n".join(b) for b in blocks) + "\n\n"
    (outdir / "mini_de.conllu").write_text(text, encoding="utf-8")
    lex = [f"{n}\tinanimate" for n, _ in INANIMATE + [("Joghurt", "")]]
    lex += [f"{n}\tanimate" for n, _ in ANIMATE]
    header = "# animacy lexicon for the bundled mini-corpus\n"
    (outdir / "mini_de_lexicon.tsv").write_text(header + "\n".join(sorted(lex)) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "src/gendermi/data")
