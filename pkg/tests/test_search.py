import random

import pytest

from csk_organizer.kg import KnowledgeGraph
from csk_organizer.reasoner import ReasoningPath, ScoringStrategy, best_path, SearchConfig, enumerate_paths, render_path, score_path
from oracles import brute_force_paths, hop_tuples, random_edges

UNLIMITED = SearchConfig(beam_width=None)


def test_pear_kitchen_three_paths(pear):
    paths = enumerate_paths(pear, "kitchen", "pear", SearchConfig(max_depth=3, beam_width=None))
    assert len(paths) == 3
    assert score_path(paths[0]) == 7.21
    assert [score_path(p) for p in paths] == [7.21, 3.0, 1.2]
    assert render_path(paths[0]) == "kitchen <-(AtLocation)- food <-(RelatedTo)- apple -(RelatedTo)-> pear"


def test_pear_kitchen_matches_oracle(pear):
    from csk_organizer.fixtures import PEAR_EDGES

    oracle = brute_force_paths(PEAR_EDGES, "kitchen", "pear", 3)
    assert {hop_tuples(p) for p in enumerate_paths(pear, "kitchen", "pear", UNLIMITED)} == oracle
    assert len(oracle) == 3


def test_context_equals_object(pear):
    assert enumerate_paths(pear, "kitchen", "kitchen", UNLIMITED) == []


def test_unknown_or_disconnected(pear):
    assert enumerate_paths(pear, "kitchen", "zzz", UNLIMITED) == []
    assert enumerate_paths(pear, "zzz", "pear", UNLIMITED) == []
    assert enumerate_paths(pear, "dining_room", "pear", UNLIMITED) == []


def test_depth_limits(pear):
    assert [len(p) for p in enumerate_paths(pear, "kitchen", "pear", SearchConfig(max_depth=2, beam_width=None))] == [2, 2]
    assert enumerate_paths(pear, "kitchen", "pear", SearchConfig(max_depth=1, beam_width=None)) == []


def test_first_hop_relation_is_enforced(beer):
    assert enumerate_paths(beer, "playroom", "beer", UNLIMITED) == []
    wide = SearchConfig(beam_width=None, first_hop_relations={"AtLocation", "UsedFor"})
    (p,) = enumerate_paths(beer, "playroom", "beer", wide)
    assert render_path(p) == "playroom -(UsedFor)-> fun <-(RelatedTo)- party <-(RelatedTo)- beer"
    narrow = SearchConfig(beam_width=None, first_hop_relations={"UsedFor"}, relations={"IsA"})
    assert enumerate_paths(beer, "playroom", "beer", narrow) == []


def test_beam_keeps_strongest_intermediates():
    # hub has three intermediate routes; beam 1 keeps only the strongest
    edges = [
        ("a1", "hub", "AtLocation", 3.0),
        ("a2", "hub", "AtLocation", 2.0),
        ("a3", "hub", "AtLocation", 1.0),
        ("obj", "a1", "RelatedTo", 1.0),
        ("obj", "a2", "RelatedTo", 1.0),
        ("obj", "a3", "RelatedTo", 1.0),
    ]
    g = KnowledgeGraph.from_edges(edges)
    assert len(enumerate_paths(g, "hub", "obj", SearchConfig(beam_width=None))) == 3
    beamed = enumerate_paths(g, "hub", "obj", SearchConfig(beam_width=1))
    assert [p.concepts for p in beamed] == [("hub", "a1", "obj")]
    # the final hop onto the object is never pruned
    g2 = KnowledgeGraph.from_edges(edges + [("obj", "hub", "AtLocation", 0.1)])
    assert [len(p) for p in enumerate_paths(g2, "hub", "obj", SearchConfig(beam_width=1))] == [2, 1]


def test_ordering_ties_fewer_hops_then_text():
    g = KnowledgeGraph.from_edges(
        [
            ("m", "ctx", "AtLocation", 2.0),
            ("obj", "m", "IsA", 1.0),
            ("obj", "ctx", "AtLocation", 2.0),
            ("b", "ctx", "AtLocation", 2.0),
            ("obj", "b", "IsA", 1.0),
        ]
    )
    got = [render_path(p) for p in enumerate_paths(g, "ctx", "obj", UNLIMITED)]
    assert got == [
        "ctx <-(AtLocation)- obj",
        "ctx <-(AtLocation)- b <-(IsA)- obj",
        "ctx <-(AtLocation)- m <-(IsA)- obj",
    ]


@pytest.mark.parametrize("seed", range(25))
def test_random_graphs_match_brute_force(seed):
    rng = random.Random(seed)
    edges = random_edges(rng, n_nodes=rng.randint(5, 30), n_edges=rng.randint(10, 120), self_loops=True)
    g = KnowledgeGraph.from_edges(edges)
    depth = rng.randint(1, 4)
    first = rng.choice([("AtLocation",), ("AtLocation", "UsedFor"), None])
    later = rng.choice([None, ("RelatedTo", "IsA", "AtLocation")])
    cfg = SearchConfig(max_depth=depth, beam_width=None, first_hop_relations=first, relations=later)
    nodes = sorted(g.nodes)
    for _ in range(5):
        ctx, obj = rng.choice(nodes), rng.choice(nodes)
        got = enumerate_paths(g, ctx, obj, cfg)
        want = brute_force_paths(edges, ctx, obj, depth, first, later)
        assert {hop_tuples(p) for p in got} == want
        assert len(got) == len(want)
        assert best_path(g, ctx, obj, cfg) == (got[0] if got else None)
        for p in got:
            assert ReasoningPath(p.hops) == p
            assert 1 <= len(p) <= depth
            for h in p.hops:
                assert g.edge_weight(h.edge.start, h.edge.end, h.relation) == h.weight
        keys = [(-score_path(p, cfg.strategy), len(p), render_path(p)) for p in got]
        assert keys == sorted(keys)


def test_search_is_deterministic(pear):
    runs = {tuple(render_path(p) for p in enumerate_paths(pear, "kitchen", "pear")) for _ in range(10)}
    assert len(runs) == 1


def test_average_strategy_reorders():
    g = KnowledgeGraph.from_edges(
        [
            ("m", "ctx", "AtLocation", 5.0),
            ("obj", "m", "RelatedTo", 0.5),
            ("obj", "ctx", "AtLocation", 4.0),
        ]
    )
    first = enumerate_paths(g, "ctx", "obj", SearchConfig(beam_width=None))
    avg = enumerate_paths(g, "ctx", "obj", SearchConfig(beam_width=None, strategy=ScoringStrategy.AVERAGE))
    assert [len(p) for p in first] == [2, 1]
    assert [len(p) for p in avg] == [1, 2]
