"""Gender/partner mutual information analysis for dependency-parsed corpora."""

from .conllu import Gender, MorphFeatures, Number, Sentence, Token, parse_conllu, parse_feats
from .extraction import (Animacy, AnimacyLexicon, DependencyPair, NounFeatureObservation, Relation,
                         extract_noun_observations, extract_pairs, load_lexicon, partition_by_animacy)
from .filtering import GenderAssignment, apply_retention, assign_type_gender, coverage_filter
from .infostats import (ContingencyTable, NmiReport, Normalizer, entropy, mutual_information, nmi,
                        nmi_report)
from .permutation import MiTestResult, NounProfile, build_profiles, mi_under_assignment, permutation_test
from .pipeline import AnalysisResult, Baseline, PipelineConfig, analyze, run

__version__ = "0.1.0"

__all__ = [
    "Gender",
    "MorphFeatures",
    "Number",
    "Sentence",
    "Token",
    "parse_conllu",
    "parse_feats",
    "Animacy",
    "AnimacyLexicon",
    "DependencyPair",
    "NounFeatureObservation",
    "Relation",
    "extract_noun_observations",
    "extract_pairs",
    "load_lexicon",
    "partition_by_animacy",
    "GenderAssignment",
    "apply_retention",
    "assign_type_gender",
    "coverage_filter",
    "ContingencyTable",
    "NmiReport",
    "Normalizer",
    "entropy",
    "mutual_information",
    "nmi",
    "nmi_report",
    "MiTestResult",
    "NounProfile",
    "build_profiles",
    "mi_under_assignment",
    "permutation_test",
    "AnalysisResult",
    "Baseline",
    "PipelineConfig",
    "analyze",
    "run",
]
