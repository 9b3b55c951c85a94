"""Small hand-built graphs for the pear, apple and beer sorting scenarios.

Each scenario is a list of ``(start, end, relation, weight)`` assertions plus
the bins used with it. The 7.21 AtLocation weight on ``food -> kitchen`` is
ConceptNet's; every other weight is chosen here so that the intended outcome
is the unique winner.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .bins import BinRegistry
from .kg import KnowledgeGraph

# pear in the kitchen: three kitchen->pear paths, the food one carries 7.21
PEAR_EDGES = [
    ("food", "kitchen", "AtLocation", 7.21),
    ("apple", "food", "RelatedTo", 2.0),
    ("apple", "pear", "RelatedTo", 1.5),
    # decoy kitchen paths
    ("fruit", "kitchen", "AtLocation", 3.0),
    ("pear", "fruit", "IsA", 2.0),
    ("bowl", "kitchen", "AtLocation", 1.2),
    ("pear", "bowl", "AtLocation", 1.0),
    # competing bins
    ("food", "pantry", "AtLocation", 3.5),
    ("pear_tree", "garden", "AtLocation", 2.5),
    ("pear", "pear_tree", "PartOf", 1.0),
    ("table", "dining_room", "AtLocation", 4.0),
    # reachable concept with no route to any bin
    ("scissors", "drawer", "AtLocation", 2.0),
]
PEAR_BINS = ("kitchen", "garden", "pantry", "dining_room")

# apple: kitchen when unconstrained, bedroom once kitchen is excluded
APPLE_EDGES = [
    ("food", "kitchen", "AtLocation", 7.21),
    ("apple", "food", "RelatedTo", 2.0),
    ("apple", "house", "AtLocation", 1.0),
    ("house", "bedroom", "AtLocation", 2.0),
    ("living_room", "house", "AtLocation", 1.0),
    ("couch", "living_room", "AtLocation", 3.0),
    ("toothbrush", "bathroom", "AtLocation", 4.0),
]
APPLE_BINS = ("kitchen", "living_room", "bedroom", "bathroom")

# beer in the playroom, explained through fun and party
BEER_EDGES = [
    ("playroom", "fun", "UsedFor", 2.0),
    ("party", "fun", "RelatedTo", 1.5),
    ("beer", "party", "RelatedTo", 1.0),
    ("toy", "playroom", "AtLocation", 3.0),
    ("beer", "refrigerator", "AtLocation", 3.5),
    ("scissors", "drawer", "AtLocation", 2.5),
    ("drawer", "office", "AtLocation", 2.0),
]
BEER_BINS = ("playroom", "office", "garage")


def pear_graph() -> KnowledgeGraph:
    return KnowledgeGraph.from_edges(PEAR_EDGES)


def apple_graph() -> KnowledgeGraph:
    return KnowledgeGraph.from_edges(APPLE_EDGES)


def beer_graph() -> KnowledgeGraph:
    return KnowledgeGraph.from_edges(BEER_EDGES)


def pear_bins() -> BinRegistry:
    return BinRegistry.of(PEAR_BINS)


def apple_bins() -> BinRegistry:
    return BinRegistry.of(APPLE_BINS)


def beer_bins() -> BinRegistry:
    return BinRegistry.of(BEER_BINS)


def assertion_line(start: str, end: str, relation: str, weight: float, lang: str = "en") -> str:
    """One assertions-dump row for a triple, in ConceptNet 5.x layout."""
    s, e = f"/c/{lang}/{start}", f"/c/{lang}/{end}"
    rel = f"/r/{relation}"
    meta = json.dumps({"dataset": "/d/fixture", "weight": weight}, sort_keys=True)
    return f"/a/[{rel}/,{s}/,{e}/]\t{rel}\t{s}\t{e}\t{meta}"


def write_assertions(edges, path: str | os.PathLike) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for edge in edges:
            fh.write(assertion_line(*edge) + "\n")
    return path
