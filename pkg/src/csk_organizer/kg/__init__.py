"""Knowledge-graph storage: label normalization, dump ingestion, neighbor queries, binary index."""

from .dump import file_digest, load_dump
from .graph import Direction, GraphBuilder, GraphMetadata, KnowledgeGraph, Traversal, neighbors
from .index import FORMAT_VERSION, MAGIC, dumps_index, load_index, loads_index, save_index
from .labels import (
    AT_LOCATION,
    CAPABLE_OF,
    HAS_A,
    IS_A,
    KNOWN_RELATIONS,
    PART_OF,
    RELATED_TO,
    USED_FOR,
    ConceptId,
    Edge,
    Relation,
    assertion_to_edge,
    normalize_label,
    screen_assertion,
)

__all__ = [
    "AT_LOCATION",
    "CAPABLE_OF",
    "FORMAT_VERSION",
    "HAS_A",
    "IS_A",
    "KNOWN_RELATIONS",
    "MAGIC",
    "PART_OF",
    "RELATED_TO",
    "USED_FOR",
    "ConceptId",
    "Direction",
    "Edge",
    "GraphBuilder",
    "GraphMetadata",
    "KnowledgeGraph",
    "Relation",
    "Traversal",
    "assertion_to_edge",
    "dumps_index",
    "file_digest",
    "load_dump",
    "load_index",
    "loads_index",
    "neighbors",
    "normalize_label",
    "save_index",
    "screen_assertion",
]
