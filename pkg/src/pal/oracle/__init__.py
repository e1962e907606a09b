"""Semantic ground truth: model checks, bounded searches and counter-model builders."""

from pal.oracle.builders import (
    NonContingentBody,
    build_conj_chain_countermodel,
    build_figure3_model,
    build_glued_countermodel,
    build_klsimple_countermodel,
    build_padded_countermodel,
    refutes_success,
)
from pal.oracle.checks import TooLarge, is_self_refuting_on, is_successful_on, is_super_successful_on
from pal.oracle.enumeration import bell, count_models, enumerate_models, restricted_growth_strings
from pal.oracle.search import (
    PreconditionViolated,
    SearchBounds,
    SearchError,
    SearchReport,
    WitnessDefect,
    check_supermodel_preservation,
    find_satisfying_model,
    find_selfref_counterexample,
    find_success_counterexample,
)


__all__ = [
    "NonContingentBody",
    "PreconditionViolated",
    "SearchBounds",
    "SearchError",
    "SearchReport",
    "TooLarge",
    "WitnessDefect",
    "bell",
    "build_conj_chain_countermodel",
    "build_figure3_model",
    "build_glued_countermodel",
    "build_klsimple_countermodel",
    "build_padded_countermodel",
    "check_supermodel_preservation",
    "count_models",
    "enumerate_models",
    "find_satisfying_model",
    "find_selfref_counterexample",
    "find_success_counterexample",
    "is_self_refuting_on",
    "is_successful_on",
    "is_super_successful_on",
    "refutes_success",
    "restricted_growth_strings",
]
