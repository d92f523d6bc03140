"""Command-line entry points.

``gendermi`` runs the analysis; ``gendermi-synth`` writes a synthetic
CoNLL-U corpus and matching animacy lexicon for calibration runs.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from .errors import ConfigError, ConlluError, EmptyCorpus, GenderMIError, LexiconError, StageError
from .extraction import Animacy, Relation
from .filtering import DEFAULT_COVERAGE
from .permutation import DEFAULT_PERMUTATIONS, default_workers
from .pipeline import Baseline, PipelineConfig, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_DEGENERATE = 4

log = logging.getLogger("gendermi")


def _csv_enum(enum_cls):
    def parse(text):
        if text.strip().lower() in ("", "none"):
            return []
        try:
            return [enum_cls(t.strip().lower()) for t in text.split(",") if t.strip()]
        except ValueError as exc:
            choices = ",".join(e.value for e in enum_cls if e.value != "unknown")
            raise argparse.ArgumentTypeError(f"{exc}; choose from {choices}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gendermi",
        description="Mutual information between noun gender and dependency partners in CoNLL-U corpora.")
    p.add_argument("--lang", required=True, help="language tag recorded in the outputs, e.g. de")
    p.add_argument("--input", action="append", default=[], type=Path, metavar="CONLLU",
                   help="CoNLL-U file (repeatable)")
    p.add_argument("--lexicon", required=True, type=Path, help="lemma<TAB>animate|inanimate file")
    p.add_argument("--relations", type=_csv_enum(Relation), default=list(Relation),
                   help="comma list of amod,dobj,iobj,nsubj (default: all)")
    p.add_argument("--baselines", type=_csv_enum(Baseline), default=list(Baseline),
                   help="comma list of case,number, or 'none' (default: both)")
    p.add_argument("--animacy", type=_csv_enum(Animacy), default=[Animacy.INANIMATE, Animacy.ANIMATE],
                   help="comma list of inanimate,animate (default: both)")
    p.add_argument("--coverage", type=float, default=DEFAULT_COVERAGE,
                   help="token coverage kept by the frequency filters (default: %(default)s)")
    p.add_argument("--permutations", type=int, default=DEFAULT_PERMUTATIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true", help="abort on malformed CoNLL-U instead of skipping")
    p.add_argument("--workers", type=int, default=None,
                   help="worker threads/processes (default: $GENDERMI_WORKERS or CPU count)")
    p.add_argument("--out", type=Path, default=Path("out"))
    p.add_argument("--exclude-passive", action="store_true", help="drop nsubj:pass arcs")
    p.add_argument("--include-propn", action="store_true", help="treat PROPN as nouns")
    p.add_argument("--permutation-level", choices=("type", "token"), default="type")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = PipelineConfig(
            language=args.lang, inputs=args.input, lexicon=args.lexicon, out=args.out,
            relations=args.relations, baselines=args.baselines, animacy=args.animacy,
            coverage=args.coverage, n_permutations=args.permutations, seed=args.seed,
            strict=args.strict, workers=default_workers() if args.workers is None else args.workers,
            include_passive=not args.exclude_passive, include_propn=args.include_propn,
            permutation_level=args.permutation_level, figures=not args.no_figures,
        ).validate()
    except (ConfigError, ValueError) as exc:
        print(f"gendermi: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    start = time.perf_counter()
    try:
        result = run(config)
    except ConfigError as exc:
        print(f"gendermi: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StageError as exc:
        print(f"gendermi: {exc}", file=sys.stderr)
        if isinstance(exc.cause, (EmptyCorpus, ConlluError, LexiconError)):
            return EXIT_INPUT
        return EXIT_INPUT if isinstance(exc.cause, GenderMIError) else 1
    except OSError as exc:
        print(f"gendermi: cannot read input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    log.info("finished in %.1fs with %d workers", time.perf_counter() - start, config.workers)

    for cell in result.cells:
        if cell.ok:
            t = cell.test
            print(f"{cell.animacy.value:10s} {cell.variable:7s} MI={cell.nmi.mi:.4f} bits "
                  f"p={t.p_paper:.4f} p_cons={t.p_conservative:.4f}{' *' if t.significant else ''}")
        else:
            print(f"{cell.animacy.value:10s} {cell.variable:7s} N/A ({cell.reason})")
    print(f"outputs written to {config.out}")
    if result.all_na:
        print("gendermi: every selected analysis is N/A", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def synth_main(argv=None) -> int:
    from .synth import SynthParams, generate

    p = argparse.ArgumentParser(prog="gendermi-synth",
                                description="Write a synthetic CoNLL-U corpus and animacy lexicon.")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nouns", type=int, default=200)
    p.add_argument("--partners", type=int, default=100)
    p.add_argument("--tokens", type=int, default=20_000)
    p.add_argument("--genders", type=int, choices=(2, 3), default=2)
    p.add_argument("--zipf", type=float, default=1.0)
    p.add_argument("--mixing", type=float, default=0.0, help="gender dependence weight in [0, 1]")
    p.add_argument("--relations", type=_csv_enum(Relation), default=[Relation.AMOD])
    p.add_argument("--animacy", choices=("inanimate", "animate"), default="inanimate")
    p.add_argument("--no-case", action="store_true", help="omit the Case feature")
    args = p.parse_args(argv)

    args.out.mkdir(parents=True, exist_ok=True)
    lexicon = set()
    genders = None
    try:
        with open(args.out / "synthetic.conllu", "w", encoding="utf-8", newline="\n") as fh:
            for i, rel in enumerate(args.relations):
                params = SynthParams(
                    n_noun_types=args.nouns, n_partner_types=args.partners,
                    gender_probs=(1 / args.genders,) * args.genders, zipf_exponent=args.zipf,
                    mixing_weight=args.mixing, tokens=args.tokens,
                    cases=() if args.no_case else SynthParams.cases,
                    partner_prefix="adj" if rel is Relation.AMOD else f"verb_{rel.value}_")
                corpus = generate(params, args.seed + i, relation=rel, noun_genders=genders)
                genders = corpus.noun_genders
                corpus.write_conllu(fh, sent_prefix=f"{rel.value}-")
                lexicon.update(corpus.lexicon_lines(args.animacy))
    except GenderMIError as exc:
        print(f"gendermi-synth: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    with open(args.out / "lexicon.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(sorted(lexicon))
    print(f"wrote {args.out / 'synthetic.conllu'} and {args.out / 'lexicon.tsv'}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
