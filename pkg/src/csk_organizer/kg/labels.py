"""Concept label normalization and relation parsing.

Both the dump loader and the HTTP client funnel raw ConceptNet strings through
:func:`normalize_label` and :func:`assertion_to_edge`, so an assertion read
from either source ends up as the same :class:`Edge`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NewType

from ..errors import EmptyLabel, NonEnglishConcept

ConceptId = NewType("ConceptId", str)

KNOWN_RELATIONS = (
    "AtLocation",
    "RelatedTo",
    "UsedFor",
    "IsA",
    "PartOf",
    "CapableOf",
    "HasA",
)


def normalize_label(raw: str) -> ConceptId:
    """Map a detector label or a ConceptNet URI to its canonical concept id.

    >>> normalize_label("/c/en/apple/n")
    'apple'
    >>> normalize_label("  Remote Control ")
    'remote_control'
    """
    text = raw.strip().lower()
    if not text:
        raise EmptyLabel("label is empty after trimming")
    if text.startswith("/c/"):
        parts = text.split("/")
        # ['', 'c', lang, term, pos?, ...]
        lang = parts[2] if len(parts) > 2 else ""
        if lang != "en":
            raise NonEnglishConcept(raw, lang)
        text = parts[3] if len(parts) > 3 else ""
    label = "_".join(text.split())
    if not label:
        raise EmptyLabel(f"no concept term in {raw!r}")
    return ConceptId(label)


@dataclass(frozen=True, order=True, slots=True)
class Relation:
    """A relation tag. Names outside :data:`KNOWN_RELATIONS` are kept verbatim."""

    name: str

    @classmethod
    def parse(cls, text: str | Relation) -> Relation:
        """Accept ``/r/AtLocation``, ``AtLocation`` or an existing Relation."""
        if isinstance(text, Relation):
            return text
        name = text.strip()
        if name.startswith("/r/"):
            name = name[3:]
        name = name.strip("/")
        if not name or any(ch.isspace() for ch in name):
            raise ValueError(f"not a relation: {text!r}")
        return cls(name)

    @property
    def is_other(self) -> bool:
        return self.name not in KNOWN_RELATIONS

    def __str__(self) -> str:
        return self.name


AT_LOCATION = Relation("AtLocation")
RELATED_TO = Relation("RelatedTo")
USED_FOR = Relation("UsedFor")
IS_A = Relation("IsA")
PART_OF = Relation("PartOf")
CAPABLE_OF = Relation("CapableOf")
HAS_A = Relation("HasA")


@dataclass(frozen=True, slots=True)
class Edge:
    start: ConceptId
    end: ConceptId
    relation: Relation
    weight: float

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.start, self.end, self.relation.name)


def relation_names(relations) -> frozenset[str] | None:
    """Normalize a relation allow-list to a set of names; ``None`` means all."""
    if relations is None:
        return None
    if isinstance(relations, (str, Relation)):
        relations = [relations]
    return frozenset(Relation.parse(r).name for r in relations)


def parse_weight(value) -> float:
    if isinstance(value, bool):
        raise ValueError("boolean weight")
    weight = float(value)
    if math.isnan(weight) or math.isinf(weight):
        raise ValueError(f"non-finite weight {value!r}")
    return weight


FILTERED_LANGUAGE = "language"
FILTERED_WEIGHT = "weight"


def screen_assertion(rel_uri: str, start_uri: str, end_uri: str, weight) -> tuple[Edge | None, str | None]:
    """Parse one raw assertion.

    Returns ``(edge, None)`` for a kept assertion and ``(None, reason)`` when it
    is filtered for a non-English endpoint or a weight that is not strictly
    positive. Raises ``ValueError`` when the assertion cannot be parsed at all.
    """
    w = parse_weight(weight)
    relation = Relation.parse(rel_uri)
    try:
        start = normalize_label(start_uri)
        end = normalize_label(end_uri)
    except NonEnglishConcept:
        return None, FILTERED_LANGUAGE
    if w <= 0:
        return None, FILTERED_WEIGHT
    return Edge(start, end, relation, w), None


def assertion_to_edge(rel_uri: str, start_uri: str, end_uri: str, weight) -> Edge | None:
    return screen_assertion(rel_uri, start_uri, end_uri, weight)[0]
