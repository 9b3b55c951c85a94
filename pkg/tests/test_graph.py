import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csk_organizer.kg import Direction, Edge, KnowledgeGraph, Relation, Traversal, neighbors
from oracles import random_edges


def as_rows(pairs):
    return [(e.start, e.end, e.relation.name, e.weight, t) for e, t in pairs]


def test_reverse_atlocation_neighbors_sorted_by_weight(pear):
    # hand-sorted AtLocation edges ending at kitchen: food 7.21, fruit 3.0, bowl 1.2
    got = as_rows(neighbors(pear, "kitchen", Direction.REVERSE, "AtLocation"))
    assert got == [
        ("food", "kitchen", "AtLocation", 7.21, Traversal.AGAINST_EDGE),
        ("fruit", "kitchen", "AtLocation", 3.0, Traversal.AGAINST_EDGE),
        ("bowl", "kitchen", "AtLocation", 1.2, Traversal.AGAINST_EDGE),
    ]


def test_unknown_concept_has_no_neighbors(pear):
    assert neighbors(pear, "zzz_unknown", Direction.BOTH, None) == []


def test_equal_weight_tiebreak_relation_then_label():
    g = KnowledgeGraph.from_edges(
        [
            ("x", "b", "RelatedTo", 1.0),
            ("x", "a", "RelatedTo", 1.0),
            ("x", "c", "AtLocation", 1.0),
            ("d", "x", "RelatedTo", 1.0),
            ("x", "z", "IsA", 5.0),
        ]
    )
    got = [(e.start, e.end, e.relation.name) for e, _ in neighbors(g, "x")]
    assert got == [
        ("x", "z", "IsA"),
        ("x", "c", "AtLocation"),
        ("x", "a", "RelatedTo"),
        ("x", "b", "RelatedTo"),
        ("d", "x", "RelatedTo"),
    ]


def test_opposite_edges_with_identical_keys_put_forward_first():
    g = KnowledgeGraph.from_edges([("a", "b", "RelatedTo", 1.0), ("b", "a", "RelatedTo", 1.0)])
    assert [t for _, t in neighbors(g, "a")] == [Traversal.WITH_EDGE, Traversal.AGAINST_EDGE]


def test_forward_and_relation_filter(pear):
    fwd = neighbors(pear, "pear", Direction.FORWARD)
    assert [e.end for e, _ in fwd] == ["fruit", "bowl", "pear_tree"]
    assert all(t is Traversal.WITH_EDGE for _, t in fwd)
    only = neighbors(pear, "pear", Direction.BOTH, ["IsA", "/r/PartOf"])
    assert {e.relation.name for e, _ in only} == {"IsA", "PartOf"}


def test_duplicates_collapse_to_max_weight():
    g = KnowledgeGraph.from_edges(
        [("a", "b", "RelatedTo", 1.0), ("a", "b", "RelatedTo", 3.0), ("a", "b", "RelatedTo", 2.0), ("a", "b", "IsA", 1.0)]
    )
    assert g.num_edges == 2
    assert g.edge_weight("a", "b", "RelatedTo") == 3.0
    assert g.metadata.duplicates_collapsed == 2


def test_isolated_nodes_kept():
    g = KnowledgeGraph.from_edges([], nodes=["kitchen", "pear"])
    assert g.nodes == ("kitchen", "pear") and g.num_edges == 0
    assert "pear" in g


def test_rejects_nonpositive_weight():
    with pytest.raises(ValueError):
        KnowledgeGraph.from_edges([("a", "b", "RelatedTo", 0.0)])
    with pytest.raises(ValueError):
        KnowledgeGraph.from_edges([("a", "b", "RelatedTo", -1.0)])


def test_immutable(pear):
    with pytest.raises(AttributeError):
        pear.foo = 1
    with pytest.raises(ValueError):
        pear._weight[0] = 99.0


def test_edge_lookup(pear):
    assert pear.edge_weight("food", "kitchen", Relation("AtLocation")) == 7.21
    assert pear.edge_weight("kitchen", "food", "AtLocation") is None
    assert pear.edge_weight("food", "kitchen", "IsA") is None
    assert pear.edge_weight("nope", "kitchen", "AtLocation") is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_mirror_and_dedup_properties(seed):
    rng = random.Random(seed)
    raw = random_edges(rng, n_nodes=rng.randint(2, 25), n_edges=rng.randint(0, 120))
    raw = raw + [(s, e, r, w / 2) for s, e, r, w in raw[: len(raw) // 3]]  # duplicates
    g = KnowledgeGraph.from_edges(raw)
    fwd, rev = [], []
    for n in g.nodes:
        fwd += g.out_edges(n)
        rev += g.in_edges(n)
        for e in g.out_edges(n):
            assert e in g.in_edges(e.end)
    assert sorted(fwd, key=lambda e: e.key) == sorted(rev, key=lambda e: e.key) == list(g.edges())
    assert len(fwd) == g.metadata.edge_count == g.num_edges
    keys = [e.key for e in g.edges()]
    assert len(keys) == len(set(keys))
    # neighbor order is the documented sort
    for n in g.nodes:
        rows = neighbors(g, n)
        def key(pair):
            e, t = pair
            other = e.end if t is Traversal.WITH_EDGE else e.start
            return (-e.weight, e.relation.name, other, t is Traversal.AGAINST_EDGE)
        assert rows == sorted(rows, key=key)


def test_construction_is_order_independent():
    rng = random.Random(7)
    raw = random_edges(rng)
    shuffled = raw[:]
    rng.shuffle(shuffled)
    a, b = KnowledgeGraph.from_edges(raw), KnowledgeGraph.from_edges(shuffled)
    assert a == b
    assert np.array_equal(a._fwd_order, b._fwd_order)


def test_edges_roundtrip_objects():
    e = Edge("a", "b", Relation("IsA"), 2.5)
    g = KnowledgeGraph.from_edges([e])
    assert list(g.edges()) == [e]
