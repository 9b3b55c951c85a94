"""Immutable weighted multigraph of ConceptNet concepts.

Storage is columnar: one row per unique ``(start, end, relation)`` triple held
in numpy arrays, plus two CSR orderings (outgoing and incoming) whose per-node
slices are pre-sorted in neighbor order. :class:`Edge` objects are only
materialized when a caller asks for them.
"""

from __future__ import annotations

import heapq
from array import array
from collections.abc import Iterable, Iterator
from dataclasses import asdict, dataclass, field, replace
from enum import Enum

import numpy as np

from .labels import ConceptId, Edge, Relation, relation_names

_CHUNK = 256


class Direction(Enum):
    FORWARD = "forward"
    REVERSE = "reverse"
    BOTH = "both"


class Traversal(Enum):
    """Whether a hop follows its edge start->end or end->start."""

    WITH_EDGE = "with"
    AGAINST_EDGE = "against"


_TRAVERSALS = (Traversal.WITH_EDGE, Traversal.AGAINST_EDGE)


@dataclass(frozen=True)
class GraphMetadata:
    source: str | None = None
    source_digest: str | None = None
    built_at: str | None = None
    node_count: int = 0
    edge_count: int = 0
    rows_total: int = 0
    filtered: int = 0
    filtered_language: int = 0
    filtered_weight: int = 0
    filtered_relation: int = 0
    duplicates_collapsed: int = 0
    malformed: int = 0
    malformed_lines: tuple[int, ...] = ()
    relation_filter: tuple[str, ...] | None = None
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["malformed_lines"] = list(self.malformed_lines)
        d["warnings"] = list(self.warnings)
        if self.relation_filter is not None:
            d["relation_filter"] = list(self.relation_filter)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> GraphMetadata:
        d = dict(d)
        d["malformed_lines"] = tuple(d.get("malformed_lines", ()))
        d["warnings"] = tuple(d.get("warnings", ()))
        if d.get("relation_filter") is not None:
            d["relation_filter"] = tuple(d["relation_filter"])
        return cls(**d)


class KnowledgeGraph:
    """Read-only concept graph; build with :class:`GraphBuilder` or :meth:`from_edges`."""

    __slots__ = (
        "_labels",
        "_ids",
        "_relations",
        "_rel_ids",
        "_src",
        "_dst",
        "_rel",
        "_weight",
        "_fwd_ptr",
        "_fwd_order",
        "_rev_ptr",
        "_rev_order",
        "_metadata",
        "_frozen",
    )

    def __init__(
        self,
        labels: tuple[str, ...],
        relations: tuple[str, ...],
        src: np.ndarray,
        dst: np.ndarray,
        rel: np.ndarray,
        weight: np.ndarray,
        metadata: GraphMetadata | None = None,
        fwd_order: np.ndarray | None = None,
        rev_order: np.ndarray | None = None,
    ) -> None:
        # Arrays must already be in canonical (src, dst, rel) order with one row per triple.
        s = object.__setattr__
        n = len(labels)
        s(self, "_labels", tuple(labels))
        s(self, "_ids", {label: i for i, label in enumerate(labels)})
        s(self, "_relations", tuple(Relation(r) for r in relations))
        s(self, "_rel_ids", {r: i for i, r in enumerate(relations)})
        arrays = {}
        for name, arr, dtype in (
            ("_src", src, np.int32),
            ("_dst", dst, np.int32),
            ("_rel", rel, np.int32),
            ("_weight", weight, np.float64),
        ):
            a = np.ascontiguousarray(arr, dtype=dtype)
            a.flags.writeable = False
            arrays[name] = a
            s(self, name, a)
        w = arrays["_weight"]
        if fwd_order is None:
            fwd_order = np.lexsort((arrays["_dst"], arrays["_rel"], -w, arrays["_src"]))
        if rev_order is None:
            rev_order = np.lexsort((arrays["_src"], arrays["_rel"], -w, arrays["_dst"]))
        for name, arr in (("_fwd_order", fwd_order), ("_rev_order", rev_order)):
            a = np.ascontiguousarray(arr, dtype=np.int64)
            a.flags.writeable = False
            s(self, name, a)
        for name, col in (("_fwd_ptr", arrays["_src"]), ("_rev_ptr", arrays["_dst"])):
            ptr = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(np.bincount(col, minlength=n), out=ptr[1:])
            ptr.flags.writeable = False
            s(self, name, ptr)
        if metadata is None:
            metadata = GraphMetadata()
        metadata = replace(metadata, node_count=n, edge_count=len(w))
        s(self, "_metadata", metadata)
        s(self, "_frozen", True)

    def __setattr__(self, name, value):
        raise AttributeError("KnowledgeGraph is immutable")

    # -- construction ---------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Edge | tuple],
        nodes: Iterable[str] = (),
        metadata: GraphMetadata | None = None,
    ) -> KnowledgeGraph:
        """Build from Edge objects or ``(start, end, relation, weight)`` tuples.

        Labels are used as given; callers normalize beforehand.
        """
        b = GraphBuilder()
        for e in edges:
            if isinstance(e, Edge):
                b.add(e.start, e.end, e.relation.name, e.weight)
            else:
                start, end, relation, weight = e
                b.add(start, end, Relation.parse(relation).name, weight)
        for node in nodes:
            b.add_node(node)
        return b.build(metadata)

    def with_metadata(self, **changes) -> KnowledgeGraph:
        return KnowledgeGraph(
            self._labels,
            tuple(r.name for r in self._relations),
            self._src,
            self._dst,
            self._rel,
            self._weight,
            replace(self._metadata, **changes),
            self._fwd_order,
            self._rev_order,
        )

    # -- basic accessors -------------------------------------------------

    @property
    def metadata(self) -> GraphMetadata:
        return self._metadata

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._labels

    @property
    def relations(self) -> tuple[Relation, ...]:
        return self._relations

    @property
    def num_nodes(self) -> int:
        return len(self._labels)

    @property
    def num_edges(self) -> int:
        return len(self._weight)

    def __contains__(self, label: object) -> bool:
        return label in self._ids

    def __len__(self) -> int:
        return len(self._labels)

    def __repr__(self) -> str:
        return f"KnowledgeGraph(nodes={self.num_nodes}, edges={self.num_edges})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return (
            self._labels == other._labels
            and self._relations == other._relations
            and np.array_equal(self._src, other._src)
            and np.array_equal(self._dst, other._dst)
            and np.array_equal(self._rel, other._rel)
            and np.array_equal(self._weight, other._weight)
            and self._metadata.source_digest == other._metadata.source_digest
        )

    __hash__ = None

    def node_id(self, label: str) -> int | None:
        return self._ids.get(label)

    def label(self, node_id: int) -> ConceptId:
        return ConceptId(self._labels[node_id])

    def relation_ids(self, relations) -> frozenset[int] | None:
        """Ids for an allow-list of relations; names absent from the graph are dropped."""
        names = relation_names(relations)
        if names is None:
            return None
        return frozenset(self._rel_ids[n] for n in names if n in self._rel_ids)

    def edge(self, edge_id: int) -> Edge:
        return Edge(
            self._labels[self._src[edge_id]],
            self._labels[self._dst[edge_id]],
            self._relations[self._rel[edge_id]],
            float(self._weight[edge_id]),
        )

    def edges(self) -> Iterator[Edge]:
        """All edges in canonical (start, end, relation) order."""
        labels, rels = self._labels, self._relations
        for a in range(0, self.num_edges, 4096):
            b = a + 4096
            for s, d, r, w in zip(
                self._src[a:b].tolist(),
                self._dst[a:b].tolist(),
                self._rel[a:b].tolist(),
                self._weight[a:b].tolist(),
            ):
                yield Edge(labels[s], labels[d], rels[r], w)

    def out_edges(self, label: str) -> list[Edge]:
        return [e for e, _ in self.neighbors(label, Direction.FORWARD)]

    def in_edges(self, label: str) -> list[Edge]:
        return [e for e, _ in self.neighbors(label, Direction.REVERSE)]

    def edge_id(self, start: str, end: str, relation) -> int | None:
        u, v = self._ids.get(start), self._ids.get(end)
        r = self._rel_ids.get(Relation.parse(relation).name)
        if u is None or v is None or r is None:
            return None
        lo, hi = int(self._fwd_ptr[u]), int(self._fwd_ptr[u + 1])
        # canonical rows are sorted by src, so the forward pointer also bounds them
        dst = self._dst[lo:hi]
        a = int(np.searchsorted(dst, v, "left"))
        b = int(np.searchsorted(dst, v, "right"))
        for i in range(lo + a, lo + b):
            if self._rel[i] == r:
                return i
        return None

    def edge_weight(self, start: str, end: str, relation) -> float | None:
        i = self.edge_id(start, end, relation)
        return None if i is None else float(self._weight[i])

    # -- neighbor iteration ----------------------------------------------

    def _slice(self, u: int, forward: bool, rel_ids: frozenset[int] | None) -> Iterator[tuple]:
        if forward:
            ptr, order, other_col, trav = self._fwd_ptr, self._fwd_order, self._dst, 0
        else:
            ptr, order, other_col, trav = self._rev_ptr, self._rev_order, self._src, 1
        lo, hi = int(ptr[u]), int(ptr[u + 1])
        for a in range(lo, hi, _CHUNK):
            ids = order[a : min(a + _CHUNK, hi)]
            for eid, w, r, o in zip(
                ids.tolist(),
                self._weight[ids].tolist(),
                self._rel[ids].tolist(),
                other_col[ids].tolist(),
            ):
                if rel_ids is None or r in rel_ids:
                    yield (-w, r, o, trav, eid)

    def iter_neighbor_ids(
        self,
        node_id: int,
        direction: Direction = Direction.BOTH,
        rel_ids: frozenset[int] | None = None,
    ) -> Iterator[tuple[float, int, int, int, int]]:
        """Yield ``(-weight, rel_id, other_id, traversal, edge_id)`` in neighbor order.

        ``traversal`` is 0 for a hop along the edge and 1 for a hop against it.
        Node and relation ids are ranks of their names, so the tuple order is
        the public ordering: weight descending, then relation name, then the
        other endpoint's label.
        """
        if direction is Direction.FORWARD:
            return self._slice(node_id, True, rel_ids)
        if direction is Direction.REVERSE:
            return self._slice(node_id, False, rel_ids)
        return heapq.merge(self._slice(node_id, True, rel_ids), self._slice(node_id, False, rel_ids))

    def iter_neighbors(
        self,
        label: str,
        direction: Direction = Direction.BOTH,
        relation_filter=None,
    ) -> Iterator[tuple[Edge, Traversal]]:
        u = self._ids.get(label)
        if u is None:
            return
        for _, _, _, trav, eid in self.iter_neighbor_ids(u, direction, self.relation_ids(relation_filter)):
            yield self.edge(eid), _TRAVERSALS[trav]

    def neighbors(
        self,
        label: str,
        direction: Direction = Direction.BOTH,
        relation_filter=None,
    ) -> list[tuple[Edge, Traversal]]:
        return list(self.iter_neighbors(label, direction, relation_filter))


def neighbors(
    g: KnowledgeGraph,
    c: str,
    direction: Direction = Direction.BOTH,
    relation_filter=None,
) -> list[tuple[Edge, Traversal]]:
    """Edges touching ``c``, strongest first.

    Ties on weight are broken by relation name, then by the label of the other
    endpoint, then hops along an edge before hops against one. Unknown concepts
    yield an empty list.
    """
    return g.neighbors(c, direction, relation_filter)


class GraphBuilder:
    """Accumulates raw triples and compiles them into a :class:`KnowledgeGraph`.

    Duplicate ``(start, end, relation)`` triples keep their maximum weight.
    """

    def __init__(self) -> None:
        self._label_ids: dict[str, int] = {}
        self._labels: list[str] = []
        self._rel_ids: dict[str, int] = {}
        self._rels: list[str] = []
        self._src = array("q")
        self._dst = array("q")
        self._rel = array("q")
        self._w = array("d")

    def _node(self, label: str) -> int:
        i = self._label_ids.get(label)
        if i is None:
            i = self._label_ids[label] = len(self._labels)
            self._labels.append(label)
        return i

    def add_node(self, label: str) -> None:
        if not label:
            raise ValueError("empty concept label")
        self._node(label)

    def add(self, start: str, end: str, relation: str, weight: float) -> None:
        if not start or not end:
            raise ValueError("empty concept label")
        weight = float(weight)
        if not weight > 0 or weight == float("inf"):
            raise ValueError(f"edge weight must be positive and finite, got {weight!r}")
        r = self._rel_ids.get(relation)
        if r is None:
            r = self._rel_ids[relation] = len(self._rels)
            self._rels.append(relation)
        self._src.append(self._node(start))
        self._dst.append(self._node(end))
        self._rel.append(r)
        self._w.append(weight)

    @property
    def raw_count(self) -> int:
        return len(self._w)

    def build(self, metadata: GraphMetadata | None = None) -> KnowledgeGraph:
        labels = sorted(self._labels)
        node_rank = np.empty(len(self._labels), dtype=np.int64)
        node_rank[[self._label_ids[x] for x in labels]] = np.arange(len(labels))
        rels = sorted(self._rels)
        rel_rank = np.empty(len(self._rels), dtype=np.int64)
        rel_rank[[self._rel_ids[x] for x in rels]] = np.arange(len(rels))

        src = node_rank[np.frombuffer(self._src, dtype=np.int64)] if len(self._w) else np.empty(0, np.int64)
        dst = node_rank[np.frombuffer(self._dst, dtype=np.int64)] if len(self._w) else np.empty(0, np.int64)
        rel = rel_rank[np.frombuffer(self._rel, dtype=np.int64)] if len(self._w) else np.empty(0, np.int64)
        w = np.frombuffer(self._w, dtype=np.float64).copy()

        order = np.lexsort((-w, rel, dst, src))
        src, dst, rel, w = src[order], dst[order], rel[order], w[order]
        if len(w):
            first = np.ones(len(w), dtype=bool)
            first[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1]) | (rel[1:] != rel[:-1])
            src, dst, rel, w = src[first], dst[first], rel[first], w[first]
        collapsed = len(self._w) - len(w)
        if metadata is None:
            metadata = GraphMetadata()
        metadata = replace(metadata, duplicates_collapsed=collapsed)
        return KnowledgeGraph(tuple(labels), tuple(rels), src, dst, rel, w, metadata)
