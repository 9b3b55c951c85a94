import json
from urllib.parse import parse_qs, urlparse

import pytest

from csk_organizer.conceptnet_client import (
    ApiQuery,
    ClientConfig,
    ConceptNetClient,
    Response,
    parse_api_edges,
)
from csk_organizer.errors import HttpError, NetworkDisabled, ParseError, RateLimited
from csk_organizer.fixtures import APPLE_EDGES, write_assertions
from csk_organizer.kg import Direction, load_dump


def api_edge(start, end, rel, weight, lang="en", end_lang=None):
    return {
        "@id": f"/a/[/r/{rel}/,/c/{lang}/{start}/,/c/{end_lang or lang}/{end}/]",
        "rel": {"@id": f"/r/{rel}", "label": rel},
        "start": {"@id": f"/c/{lang}/{start}/n", "label": start},
        "end": {"@id": f"/c/{end_lang or lang}/{end}", "label": end},
        "weight": weight,
    }


class FakeApi:
    """Serves a fixed edge list the way the query endpoint would; records every call."""

    def __init__(self, edges, page=None, extra=()):
        self.edges = list(edges)
        self.extra = list(extra)
        self.page = page
        self.calls = []
        self.script = []

    def __call__(self, url, params):
        self.calls.append((url, params))
        if self.script:
            return self.script.pop(0)
        if params is None:
            params = {k: v[0] for k, v in parse_qs(urlparse(url).query).items()}
        node = params.get("node", "").removeprefix("/c/en/")
        offset = int(params.get("offset", 0))
        hits = [api_edge(*e) for e in self.edges if node in (e[0], e[1])]
        hits += [x for x in self.extra if node in x["@id"]]
        size = self.page or len(hits) or 1
        body = {"edges": hits[offset : offset + size], "version": "5.7"}
        if offset + size < len(hits):
            body["view"] = {"nextPage": f"/query?node=/c/en/{node}&offset={offset + size}&limit={size}"}
        return Response(200, json.dumps(body))


def client(tmp_path, api, **kw):
    cfg = ClientConfig(base_url="http://api.test", cache_dir=tmp_path / "cache", network=True, **kw)
    return ConceptNetClient(cfg, api, clock=lambda: "2024-01-01T00:00:00+00:00", sleep=lambda s: None)


def test_fingerprint_is_normalized():
    a = ApiQuery("Apple Pie", relation="/r/AtLocation")
    b = ApiQuery("apple_pie", relation="AtLocation")
    assert a.fingerprint == b.fingerprint
    assert a.fingerprint != ApiQuery("apple_pie").fingerprint
    assert ApiQuery("x", Direction.FORWARD).params(100) == {"start": "/c/en/x", "limit": "100"}


def test_cache_hit_makes_no_calls(tmp_path):
    api = FakeApi(APPLE_EDGES)
    c = client(tmp_path, api)
    first = c.fetch_neighborhood(ApiQuery("apple"))
    assert len(api.calls) == 1 and not first.from_cache
    second = c.fetch_neighborhood(ApiQuery("apple"))
    assert len(api.calls) == 1 and second.from_cache
    assert second.edges == first.edges
    offline = ConceptNetClient(ClientConfig(cache_dir=tmp_path / "cache"))
    assert offline.fetch_neighborhood(ApiQuery("apple")).edges == first.edges


def test_refresh_refetches(tmp_path):
    api = FakeApi(APPLE_EDGES)
    client(tmp_path, api).fetch_neighborhood(ApiQuery("apple"))
    client(tmp_path, api, refresh=True).fetch_neighborhood(ApiQuery("apple"))
    assert len(api.calls) == 2


def test_network_off_by_default(tmp_path):
    c = ConceptNetClient(ClientConfig(cache_dir=tmp_path))
    with pytest.raises(NetworkDisabled):
        c.fetch_neighborhood(ApiQuery("apple"))


def test_non_english_filtered(tmp_path):
    extra = [api_edge("apple", "apfel", "Synonym", 2.0, end_lang="de"), api_edge("apple", "x", "RelatedTo", 0.0)]
    n = client(tmp_path, FakeApi(APPLE_EDGES, extra=extra)).fetch_neighborhood(ApiQuery("apple"))
    assert n.filtered == 2
    assert all(e.end != "apfel" for e in n.edges)
    assert {e.key for e in n.edges} == {("apple", "food", "RelatedTo"), ("apple", "house", "AtLocation")}


def test_rate_limited(tmp_path):
    api = FakeApi(APPLE_EDGES)
    api.script = [Response(429, "", {"Retry-After": "7"})]
    with pytest.raises(RateLimited) as info:
        client(tmp_path, api).fetch_neighborhood(ApiQuery("apple"))
    assert info.value.retry_after == 7.0


def test_rate_limit_retried_in_crawl(tmp_path):
    api = FakeApi(APPLE_EDGES)
    api.script = [Response(429, "", {"retry-after": "1"})]
    slept = []
    c = client(tmp_path, api)
    c.sleep = slept.append
    g = c.build_subgraph(["apple"], 1)
    assert slept == [1.0] and g.num_edges == 2


def test_http_and_parse_errors(tmp_path):
    api = FakeApi([])
    api.script = [Response(503, "")]
    with pytest.raises(HttpError) as info:
        client(tmp_path, api).fetch_neighborhood(ApiQuery("a"))
    assert info.value.status == 503
    api.script = [Response(200, "<html>")]
    with pytest.raises(ParseError):
        client(tmp_path, api).fetch_neighborhood(ApiQuery("a"))
    api.script = [Response(200, json.dumps({"edges": [{"rel": {}}]}))]
    with pytest.raises(ParseError):
        client(tmp_path, api).fetch_neighborhood(ApiQuery("a"))
    with pytest.raises(ParseError):
        parse_api_edges({"view": {}})
    assert not (tmp_path / "cache").exists() or not list((tmp_path / "cache").glob("*.json"))


def test_pagination(tmp_path):
    edges = [("hub", f"n{i:02d}", "RelatedTo", 1.0 + i) for i in range(7)]
    api = FakeApi(edges, page=3)
    n = client(tmp_path, api).fetch_neighborhood(ApiQuery("hub"))
    assert len(api.calls) == 3
    assert len(n.edges) == 7


def test_limit_caps_edges(tmp_path):
    edges = [("hub", f"n{i:02d}", "RelatedTo", 1.0) for i in range(7)]
    n = client(tmp_path, FakeApi(edges, page=3)).fetch_neighborhood(ApiQuery("hub", limit=4))
    assert len(n.edges) == 4
    with pytest.raises(ValueError):
        client(tmp_path, FakeApi([])).fetch_neighborhood(ApiQuery("hub", limit=501))


def test_build_subgraph_union(tmp_path):
    api = FakeApi(APPLE_EDGES)
    g = client(tmp_path, api).build_subgraph(["apple"], 2)
    # radius 2 reaches food, house and their neighbors
    assert {e.key for e in g.edges()} == {
        ("food", "kitchen", "AtLocation"),
        ("apple", "food", "RelatedTo"),
        ("apple", "house", "AtLocation"),
        ("house", "bedroom", "AtLocation"),
        ("living_room", "house", "AtLocation"),
    }
    assert g.metadata.built_at == "2024-01-01T00:00:00+00:00"
    assert len(g.metadata.source_digest) == 64


def test_radius_zero(tmp_path):
    api = FakeApi(APPLE_EDGES)
    g = client(tmp_path, api).build_subgraph(["Apple"], 0)
    assert g.nodes == ("apple",) and g.num_edges == 0 and api.calls == []


def test_empty_seed_warned(tmp_path):
    g = client(tmp_path, FakeApi(APPLE_EDGES)).build_subgraph(["apple", "qwerty"], 1)
    assert "qwerty" in g
    assert any("qwerty" in w for w in g.metadata.warnings)


def test_continue_on_error(tmp_path):
    class Flaky(FakeApi):
        def __call__(self, url, params):
            if params and params.get("node") == "/c/en/house":
                return Response(500, "")
            return super().__call__(url, params)

    with pytest.raises(HttpError):
        client(tmp_path, Flaky(APPLE_EDGES)).build_subgraph(["apple"], 2)
    g = client(tmp_path, Flaky(APPLE_EDGES)).build_subgraph(["apple"], 2, continue_on_error=True)
    assert any("house" in w for w in g.metadata.warnings)
    assert ("house", "bedroom", "AtLocation") not in {e.key for e in g.edges()}


def test_warm_cache_reproducible(tmp_path):
    from csk_organizer.kg import dumps_index

    g1 = client(tmp_path, FakeApi(APPLE_EDGES), max_connections=4).build_subgraph(["apple", "couch"], 3)
    offline = ConceptNetClient(ClientConfig("http://api.test", tmp_path / "cache", max_connections=1))
    g2 = offline.build_subgraph(["couch", "apple"], 3)
    assert g1 == g2
    assert dumps_index(g1) == dumps_index(g2)


def test_api_and_dump_normalize_alike(tmp_path):
    dump = load_dump(write_assertions(APPLE_EDGES, tmp_path / "a.csv"))
    crawled = client(tmp_path, FakeApi(APPLE_EDGES)).build_subgraph(["apple"], 3)
    want = sorted(e.key + (e.weight,) for e in dump.edges() if e.start != "toothbrush")
    assert sorted(e.key + (e.weight,) for e in crawled.edges()) == want


def test_kitchen_pear_radius_two(tmp_path):
    from csk_organizer.fixtures import PEAR_EDGES

    g = client(tmp_path, FakeApi(PEAR_EDGES)).build_subgraph(["kitchen", "pear"], 2)
    # hand count: everything except the two edges with no route from the seeds within 2 fetch rounds
    want = {(s, e, r) for s, e, r, _ in PEAR_EDGES} - {("table", "dining_room", "AtLocation"), ("scissors", "drawer", "AtLocation")}
    assert {e.key for e in g.edges()} == want
    assert g.num_edges == 10


def test_neighborhood_acts_as_edge_list(tmp_path):
    n = client(tmp_path, FakeApi(APPLE_EDGES)).fetch_neighborhood(ApiQuery("house"))
    assert len(n) == 3 and list(n) == list(n.edges)
