"""Sort detected objects into context bins by searching ConceptNet paths.

The main entry points are re-exported here; see the submodules for the rest:

* :mod:`csk_organizer.kg` - graph storage, dump loading, binary index
* :mod:`csk_organizer.reasoner` - path search, scoring, explanations
* :mod:`csk_organizer.conceptnet_client` - cached HTTP crawler
* :mod:`csk_organizer.pipeline` - detection stream to sorted bins
* :mod:`csk_organizer.evalharness` - evaluation protocols
"""

from .bins import Bin, BinRegistry, load_bins
from .kg import Edge, KnowledgeGraph, Relation, load_dump, load_index, normalize_label, save_index
from .reasoner import (
    Decision,
    Reason,
    Reasoner,
    ReasoningPath,
    ScoringStrategy,
    SearchConfig,
    classify,
    classify_focused,
    enumerate_paths,
    parse_path,
    render_path,
    score_path,
)

__version__ = "0.1.0"

__all__ = [
    "Bin",
    "BinRegistry",
    "Decision",
    "Edge",
    "KnowledgeGraph",
    "Reason",
    "Reasoner",
    "ReasoningPath",
    "Relation",
    "ScoringStrategy",
    "SearchConfig",
    "classify",
    "classify_focused",
    "enumerate_paths",
    "load_bins",
    "load_dump",
    "load_index",
    "normalize_label",
    "parse_path",
    "render_path",
    "save_index",
    "score_path",
]
