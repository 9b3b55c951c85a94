# Crawling the web API around a few seed concepts. Here a canned transport
# plays the server once; after that the cache answers everything offline.
import json
import tempfile
from pathlib import Path

from csk_organizer.conceptnet_client import ApiQuery, ClientConfig, ConceptNetClient, Response
from csk_organizer.errors import NetworkDisabled
from csk_organizer.fixtures import APPLE_EDGES

calls = []


def canned(url, params):
    calls.append(params["node"])
    node = params["node"].rsplit("/", 1)[-1]
    hits = [
        {"rel": {"@id": f"/r/{r}"}, "start": {"@id": f"/c/en/{s}"}, "end": {"@id": f"/c/en/{e}"}, "weight": w}
        for s, e, r, w in APPLE_EDGES
        if node in (s, e)
    ]
    return Response(200, json.dumps({"edges": hits}))


cache = Path(tempfile.mkdtemp())
online = ConceptNetClient(ClientConfig(base_url="http://local", cache_dir=cache, network=True), canned)
g = online.build_subgraph(["apple"], radius=2)
print(f"crawled {g.num_edges} edges, {len(calls)} requests: {calls}")
print("cache files:", len(list(cache.glob("*.json"))))

offline = ConceptNetClient(ClientConfig(base_url="http://local", cache_dir=cache))
print("offline rebuild identical:", offline.build_subgraph(["apple"], radius=2) == g)
print("cached neighborhood of house:", [f"{e.start} -{e.relation}-> {e.end}" for e in offline.fetch_neighborhood(ApiQuery("house")).edges])

try:
    offline.fetch_neighborhood(ApiQuery("couch"))
except NetworkDisabled as exc:
    print("never fetched, never guessed:", exc)
