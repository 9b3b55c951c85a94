"""Reasoning paths: hops, scoring and the canonical text form.

A rendered path starts at the context concept and reads toward the object::

    kitchen <-(AtLocation)- food <-(RelatedTo)- apple -(RelatedTo)-> pear

``-(R)->`` means the hop follows an ``R`` edge from left to right and
``<-(R)-`` means the edge points from right to left.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

from ..errors import InvalidPath, PathParseError
from ..kg import Edge, KnowledgeGraph, Relation, Traversal


class ScoringStrategy(Enum):
    FIRST_EDGE = "first_edge"
    AVERAGE = "average"

    @classmethod
    def parse(cls, text: str | ScoringStrategy) -> ScoringStrategy:
        if isinstance(text, ScoringStrategy):
            return text
        key = text.strip().lower().replace("-", "_")
        aliases = {
            "first_edge": cls.FIRST_EDGE,
            "firstedgeweight": cls.FIRST_EDGE,
            "first_edge_weight": cls.FIRST_EDGE,
            "average": cls.AVERAGE,
            "averageweight": cls.AVERAGE,
            "average_weight": cls.AVERAGE,
            "mean": cls.AVERAGE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown scoring strategy {text!r}") from None


@dataclass(frozen=True, slots=True)
class Hop:
    source: str
    target: str
    relation: Relation
    weight: float
    direction: Traversal

    @property
    def edge(self) -> Edge:
        if self.direction is Traversal.WITH_EDGE:
            return Edge(self.source, self.target, self.relation, self.weight)
        return Edge(self.target, self.source, self.relation, self.weight)


@dataclass(frozen=True)
class ReasoningPath:
    hops: tuple[Hop, ...]

    def __post_init__(self) -> None:
        hops = tuple(self.hops)
        object.__setattr__(self, "hops", hops)
        if not hops:
            raise InvalidPath("a reasoning path needs at least one hop")
        for a, b in zip(hops, hops[1:]):
            if a.target != b.source:
                raise InvalidPath(f"hops do not chain: {a.target!r} != {b.source!r}")
        concepts = self.concepts
        if len(set(concepts)) != len(concepts):
            raise InvalidPath("path revisits a concept")

    @classmethod
    def _trusted(cls, hops: tuple[Hop, ...]) -> ReasoningPath:
        # for hops the search built itself; skips the chaining checks
        p = object.__new__(cls)
        object.__setattr__(p, "hops", hops)
        return p

    @property
    def context(self) -> str:
        return self.hops[0].source

    @property
    def object(self) -> str:
        return self.hops[-1].target

    @property
    def concepts(self) -> tuple[str, ...]:
        return (self.hops[0].source,) + tuple(h.target for h in self.hops)

    @property
    def degree_of_separation(self) -> int:
        return len(self.hops)

    def __len__(self) -> int:
        return len(self.hops)

    def __str__(self) -> str:
        return render_path(self)


def score_path(path: ReasoningPath, strategy: ScoringStrategy = ScoringStrategy.FIRST_EDGE) -> float:
    """First-hop weight, or the arithmetic mean of all hop weights."""
    if strategy is ScoringStrategy.FIRST_EDGE:
        return path.hops[0].weight
    return math.fsum(h.weight for h in path.hops) / len(path.hops)


def render_path(path: ReasoningPath) -> str:
    parts = [path.hops[0].source]
    for h in path.hops:
        if h.direction is Traversal.WITH_EDGE:
            parts.append(f"-({h.relation.name})->")
        else:
            parts.append(f"<-({h.relation.name})-")
        parts.append(h.target)
    return " ".join(parts)


_WITH = re.compile(r"^-\((\S+)\)->$")
_AGAINST = re.compile(r"^<-\((\S+)\)-$")


def parse_path_shape(text: str) -> list[tuple[str, str, Relation, Traversal]]:
    """Split a rendered path into ``(source, target, relation, direction)`` hops."""
    tokens = text.split(" ")
    if len(tokens) < 3 or len(tokens) % 2 == 0 or any(not t for t in tokens):
        raise PathParseError(f"malformed path: {text!r}")
    hops = []
    for i in range(1, len(tokens), 2):
        arrow = tokens[i]
        if m := _WITH.match(arrow):
            direction = Traversal.WITH_EDGE
        elif m := _AGAINST.match(arrow):
            direction = Traversal.AGAINST_EDGE
        else:
            raise PathParseError(f"bad arrow {arrow!r} in {text!r}")
        hops.append((tokens[i - 1], tokens[i + 1], Relation(m.group(1)), direction))
    return hops


def parse_path(text: str, graph: KnowledgeGraph) -> ReasoningPath:
    """Inverse of :func:`render_path`; hop weights are looked up in ``graph``."""
    hops = []
    for source, target, relation, direction in parse_path_shape(text):
        start, end = (source, target) if direction is Traversal.WITH_EDGE else (target, source)
        weight = graph.edge_weight(start, end, relation)
        if weight is None:
            raise InvalidPath(f"no {relation.name} edge {start!r} -> {end!r} in the graph")
        hops.append(Hop(source, target, relation, weight, direction))
    return ReasoningPath(tuple(hops))
