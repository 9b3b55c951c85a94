import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from csk_organizer import conceptnet_client  # noqa: E402
from csk_organizer.fixtures import apple_graph, beer_graph, pear_graph  # noqa: E402


@pytest.fixture(autouse=True)
def _no_network(monkeypatch, tmp_path):
    def refuse(self, url, params):
        raise AssertionError(f"test attempted a real HTTP request to {url}")

    monkeypatch.setattr(conceptnet_client.RequestsTransport, "__call__", refuse)
    monkeypatch.setenv("CSK_CACHE_DIR", str(tmp_path / "csk-cache"))


@pytest.fixture
def pear():
    return pear_graph()


@pytest.fixture
def apple():
    return apple_graph()


@pytest.fixture
def beer():
    return beer_graph()
