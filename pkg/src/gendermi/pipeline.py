"""End-to-end analysis: CoNLL-U in, MI/NMI/permutation results out."""

from __future__ import annotations

import enum
import hashlib
import logging
import os
import shutil
import tempfile
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import report
from .conllu import ParseStats, parse_conllu
from .errors import (ConfigError, EmptyCorpus, GenderMIError, SingleGender,
                     StageError, TooFewNouns)
from .extraction import (Animacy, Relation, extract_noun_observations, extract_pairs,
                         load_lexicon, partition_by_animacy)
from .filtering import (DEFAULT_COVERAGE, apply_retention, assign_type_gender, coverage_filter,
                        drop_unassigned, noun_counts, partner_counts)
from .infostats import NmiReport, nmi_report
from .permutation import DEFAULT_PERMUTATIONS, MiTestResult, build_profiles, permutation_test

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
NA = "N/A"


class Baseline(str, enum.Enum):
    CASE = "case"
    NUMBER = "number"


ALL_RELATIONS = tuple(Relation)
ALL_BASELINES = tuple(Baseline)
ANALYZABLE = (Animacy.INANIMATE, Animacy.ANIMATE)


@dataclass
class PipelineConfig:
    language: str
    inputs: Sequence[Path]
    lexicon: Path
    out: Path = Path("out")
    relations: Sequence[Relation] = ALL_RELATIONS
    baselines: Sequence[Baseline] = ALL_BASELINES
    animacy: Sequence[Animacy] = ANALYZABLE
    coverage: float = DEFAULT_COVERAGE
    n_permutations: int = DEFAULT_PERMUTATIONS
    seed: int = 0
    strict: bool = False
    workers: Optional[int] = None
    include_passive: bool = True
    include_propn: bool = False
    permutation_level: str = "type"
    figures: bool = True

    def __post_init__(self):
        self.inputs = [Path(p) for p in self.inputs]
        self.lexicon = Path(self.lexicon)
        self.out = Path(self.out)
        self.relations = [Relation(r) for r in _dedupe(self.relations)]
        self.baselines = [Baseline(b) for b in _dedupe(self.baselines)]
        self.animacy = [Animacy(a) for a in _dedupe(self.animacy)]

    def validate(self):
        if not self.relations and not self.baselines:
            raise ConfigError("select at least one relation or baseline")
        if not self.animacy:
            raise ConfigError("select at least one animacy class")
        if Animacy.UNKNOWN in self.animacy:
            raise ConfigError("the unknown animacy class cannot be analyzed")
        if not 0 < self.coverage <= 1:
            raise ConfigError(f"coverage must lie in (0, 1], got {self.coverage}")
        if self.n_permutations < 1:
            raise ConfigError("n_permutations must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.permutation_level not in ("type", "token"):
            raise ConfigError("permutation level must be 'type' or 'token'")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self

    def canonical(self) -> dict:
        """Settings that determine the results (no paths, no worker count)."""
        return {
            "language": self.language,
            "relations": [r.value for r in self.relations],
            "baselines": [b.value for b in self.baselines],
            "animacy": [a.value for a in self.animacy],
            "coverage": self.coverage,
            "n_permutations": self.n_permutations,
            "seed": self.seed,
            "strict": self.strict,
            "include_passive": self.include_passive,
            "include_propn": self.include_propn,
            "permutation_level": self.permutation_level,
        }


def _dedupe(items):
    seen = []
    for x in items:
        if x not in seen:
            seen.append(x)
    return seen


@dataclass
class CellResult:
    animacy: Animacy
    variable: str
    status: str = "ok"
    reason: Optional[str] = None
    test: Optional[MiTestResult] = None
    nmi: Optional[NmiReport] = None
    shape: tuple = (0, 0)
    counts: dict = field(default_factory=lambda: {
        "pair_tokens": 0, "pair_types": 0, "noun_types": 0, "partner_types": 0})

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict:
        d = {
            "animacy": self.animacy.value,
            "variable": self.variable,
            "status": self.status,
        }
        if self.reason:
            d["reason"] = self.reason
        if self.ok:
            d.update(self.nmi.to_dict())
            d["test"] = self.test.to_dict()
        else:
            d["mi_bits"] = NA
            d["nmi"] = {k: NA for k in report.NORMALIZER_IDS}
        d["table"] = {"rows": self.shape[0], "cols": self.shape[1]}
        d["counts"] = dict(self.counts)
        return d


@dataclass
class AnalysisResult:
    config: dict
    inputs: list
    cells: list
    audit: dict
    retained: dict = field(default_factory=dict)

    def cell(self, animacy, variable) -> CellResult:
        animacy = Animacy(animacy)
        for c in self.cells:
            if c.animacy is animacy and c.variable == str(getattr(variable, "value", variable)):
                return c
        raise KeyError((animacy, variable))

    @property
    def all_na(self) -> bool:
        return all(not c.ok for c in self.cells)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "units": {"mi": "bits", "entropy": "bits", "nmi": "dimensionless"},
            "config": self.config,
            "inputs": self.inputs,
            "cells": [c.to_dict() for c in self.cells],
        }


# ---------------------------------------------------------------------------
# stage 1: ingest + extract

def _scan_file(path: Path, relations, want_observations, strict, include_passive, include_propn):
    stats = ParseStats()
    pairs = {r: Counter() for r in relations}
    arc_stats = {r: Counter() for r in relations}
    observations = Counter()
    obs_stats = Counter()
    with open(path, "rb") as fh:
        for sent in parse_conllu(fh, strict=strict, stats=stats):
            for r in relations:
                pairs[r].update(extract_pairs(sent, r, include_passive=include_passive,
                                              include_propn=include_propn, stats=arc_stats[r]))
            if want_observations:
                observations.update(extract_noun_observations(sent, include_propn=include_propn,
                                                              stats=obs_stats))
    return stats, pairs, arc_stats, observations, obs_stats


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _ingest(config: PipelineConfig, workers: int):
    args = (config.relations, bool(config.baselines), config.strict,
            config.include_passive, config.include_propn)
    if workers > 1 and len(config.inputs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(config.inputs))) as pool:
            scans = list(pool.map(_scan_file, config.inputs, *[[a] * len(config.inputs) for a in args]))
    else:
        scans = [_scan_file(p, *args) for p in config.inputs]
    # Counter merging is order independent; everything downstream sorts
    total = ParseStats()
    pairs = {r: Counter() for r in config.relations}
    arc_stats = {r: Counter() for r in config.relations}
    observations, obs_stats = Counter(), Counter()
    for stats, p, a, o, os_ in scans:
        total.sentences += stats.sentences
        total.skipped += stats.skipped
        total.reasons.update(stats.reasons)
        for r in config.relations:
            pairs[r].update(p[r])
            arc_stats[r].update(a[r])
        observations.update(o)
        obs_stats.update(os_)
    return total, pairs, arc_stats, observations, obs_stats


# ---------------------------------------------------------------------------
# stage 3+: per-cell analysis

def _total(records) -> int:
    return sum(records.values())


def _analyze_cell(animacy, variable, records, value_fn, config, audit_entry) -> CellResult:
    cell = CellResult(animacy, variable)
    assignment = assign_type_gender(records)
    records, tied = drop_unassigned(records, assignment)
    audit_entry["tied_gender"] = tied
    audit_entry["tied_gender_nouns"] = len(assignment.dropped)
    audit_entry["retained"] = _total(records)
    if not records:
        cell.status, cell.reason = NA, "no data"
        return cell
    profiles, table = build_profiles(records, assignment, value=value_fn)
    cell.shape = table.shape
    cell.counts = {
        "pair_tokens": table.total,
        "pair_types": sum(len(p.partner_counts) for p in profiles),
        "noun_types": len(profiles),
        "partner_types": table.shape[1],
    }
    if table.shape[1] < 2:
        cell.status, cell.reason = NA, "single value"
        return cell
    try:
        cell.test = permutation_test(profiles, config.n_permutations, config.seed,
                                     workers=config.workers, level=config.permutation_level)
    except SingleGender:
        cell.status, cell.reason = NA, "single gender"
        return cell
    except TooFewNouns:
        cell.status, cell.reason = NA, "too few nouns"
        return cell
    cell.nmi = nmi_report(table)
    return cell


def _partner_value(rec):
    return rec.partner_lemma


def _case_value(rec):
    return rec.case


def _number_value(rec):
    return rec.number.value


def analyze(config: PipelineConfig) -> AnalysisResult:
    """Run every stage in memory and return the result without writing files."""
    config.validate()
    stage = "ingest"
    audit: dict = {"stages": []}
    retained: dict = {"partners": {}, "nouns": {}}
    try:
        if not config.inputs:
            raise EmptyCorpus("no input files given")
        with open(config.lexicon, "rb") as fh:
            lexicon = load_lexicon(fh)
        workers = config.workers or 1
        parse_stats, pairs, arc_stats, observations, obs_stats = _ingest(config, workers)
        audit["stages"].append("ingest")
        audit["ingest"] = {"sentences": parse_stats.sentences, "skipped_sentences": parse_stats.skipped,
                           "skipped_by_reason": dict(sorted(parse_stats.reasons.items()))}
        if parse_stats.sentences == 0:
            raise EmptyCorpus("input files contain no valid sentences")

        cells: list[CellResult] = []
        rel_audit: dict = {}
        for r in config.relations:
            stage = f"relation:{r.value}"
            audit["stages"].append(f"extract:{r.value}")
            entry = {"arcs": arc_stats[r]["arcs"], "no_gender": arc_stats[r]["no_gender"]}
            part = partition_by_animacy(pairs[r], lexicon)
            entry["unknown_animacy"] = part.discarded
            entry["class_not_selected"] = sum(
                _total(part[a]) for a in ANALYZABLE if a not in config.animacy)
            # partner coverage is ranked over both analyzed classes together
            pooled = Counter()
            for a in config.animacy:
                pooled.update(part[a])
            partners = coverage_filter(partner_counts(pooled), config.coverage) if pooled else set()
            retained["partners"][r.value] = sorted(partners)
            entry["classes"] = {}
            rel_audit[r.value] = entry
            for a in config.animacy:
                sub = part[a]
                after_partner = apply_retention(sub, partners, {rec.noun_lemma for rec in sub})
                nouns = coverage_filter(noun_counts(after_partner), config.coverage) if after_partner else set()
                retained["nouns"][f"{a.value}:{r.value}"] = sorted(nouns)
                kept = apply_retention(after_partner, partners, nouns)
                centry = {
                    "input": _total(sub),
                    "partner_filtered": _total(sub) - _total(after_partner),
                    "noun_filtered": _total(after_partner) - _total(kept),
                }
                entry["classes"][a.value] = centry
                cells.append(_analyze_cell(a, r.value, kept, _partner_value, config, centry))

        base_audit: dict = {}
        if config.baselines:
            stage = "baselines"
            audit["stages"].append("extract:nouns")
            base_audit = {"noun_tokens": obs_stats["nouns"], "no_gender": obs_stats["no_gender"]}
            part = partition_by_animacy(observations, lexicon)
            base_audit["unknown_animacy"] = part.discarded
            base_audit["class_not_selected"] = sum(
                _total(part[a]) for a in ANALYZABLE if a not in config.animacy)
            base_audit["classes"] = {}
            for a in config.animacy:
                sub = part[a]
                nouns = coverage_filter(noun_counts(sub), config.coverage) if sub else set()
                retained["nouns"][f"{a.value}:baseline"] = sorted(nouns)
                kept = apply_retention(sub, None, nouns)
                centry = {"input": _total(sub), "noun_filtered": _total(sub) - _total(kept), "variables": {}}
                base_audit["classes"][a.value] = centry
                for b in config.baselines:
                    attr, fn = ("case", _case_value) if b is Baseline.CASE else ("number", _number_value)
                    with_value = Counter({o: n for o, n in kept.items() if getattr(o, attr) is not None})
                    ventry = {"missing_feature": _total(kept) - _total(with_value)}
                    centry["variables"][b.value] = ventry
                    cells.append(_analyze_cell(a, b.value, with_value, fn, config, ventry))
        audit["stages"].append("analyze")
        audit["relations"] = rel_audit
        audit["baselines"] = base_audit
    except GenderMIError as exc:
        if isinstance(exc, (ConfigError, StageError)):
            raise
        raise StageError(stage, exc, audit.get("ingest")) from exc

    order = {(a, v): i for i, (a, v) in enumerate(
        (a, v) for a in config.animacy
        for v in [r.value for r in config.relations] + [b.value for b in config.baselines])}
    cells.sort(key=lambda c: order[(c.animacy, c.variable)])
    inputs = [{"name": p.name, "sha256": _sha256(p)} for p in config.inputs]
    return AnalysisResult(config.canonical(), inputs, cells, audit, retained)


def run(config: PipelineConfig) -> AnalysisResult:
    """Analyze and write every output file into ``config.out``.

    Files are first rendered into a scratch directory next to the outputs
    and then renamed into place, so a failure never leaves partial files.
    """
    result = analyze(config)
    out = config.out
    out.mkdir(parents=True, exist_ok=True)
    scratch = Path(tempfile.mkdtemp(prefix=".gendermi-", dir=out))
    try:
        report.write_results_json(result, scratch / "results.json")
        report.write_audit_json(result, scratch / "audit.json")
        report.write_retained_json(result, scratch / "retained.json")
        report.emit_counts(result, scratch / "counts.csv")
        report.write_mi_table(result, scratch / "mi_table.csv")
        if config.figures:
            from .plotting import emit_figures
            emit_figures(result, scratch / "figures")
        for src in sorted(scratch.rglob("*")):
            if src.is_file():
                dest = out / src.relative_to(scratch)
                dest.parent.mkdir(parents=True, exist_ok=True)
                os.replace(src, dest)
    finally:
        shutil.rmtree(scratch, ignore_errors=True)
    return result
