"""Weighted path search over the concept graph and bin selection."""

from .config import DEFAULT_CONFIG, EXPLAINABILITY_CONFIG, SearchConfig
from .core import (
    BinScore,
    Decision,
    Reason,
    Reasoner,
    classify,
    classify_focused,
    decide,
    best_path,
    enumerate_paths,
    rank_bins,
)
from .paths import (
    Hop,
    ReasoningPath,
    ScoringStrategy,
    parse_path,
    parse_path_shape,
    render_path,
    score_path,
)

__all__ = [
    "DEFAULT_CONFIG",
    "EXPLAINABILITY_CONFIG",
    "BinScore",
    "Decision",
    "Hop",
    "Reason",
    "Reasoner",
    "ReasoningPath",
    "ScoringStrategy",
    "SearchConfig",
    "classify",
    "classify_focused",
    "decide",
    "best_path",
    "enumerate_paths",
    "parse_path",
    "parse_path_shape",
    "rank_bins",
    "render_path",
    "score_path",
]
