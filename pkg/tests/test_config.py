import pytest

from csk_organizer.errors import ConfigError
from csk_organizer.reasoner import DEFAULT_CONFIG, ScoringStrategy, SearchConfig


def test_defaults():
    assert DEFAULT_CONFIG.max_depth == 3
    assert DEFAULT_CONFIG.beam_width == 50
    assert DEFAULT_CONFIG.strategy is ScoringStrategy.FIRST_EDGE
    assert DEFAULT_CONFIG.first_hop_relations == frozenset({"AtLocation"})
    assert DEFAULT_CONFIG.relations is None
    assert DEFAULT_CONFIG.unlimited().beam_width is None


@pytest.mark.parametrize(
    "kwargs", [{"max_depth": 0}, {"max_depth": True}, {"beam_width": 0}, {"strategy": "sum"}, {"relations": [""]}]
)
def test_invalid(kwargs):
    with pytest.raises(ConfigError):
        SearchConfig(**kwargs)


def test_file_round_trip(tmp_path):
    cfg = SearchConfig(max_depth=4, beam_width=None, strategy="average", first_hop_relations=["UsedFor", "AtLocation"])
    p = tmp_path / "search.ini"
    p.write_text(cfg.to_text())
    assert SearchConfig.from_file(p) == cfg


def test_file_with_section_and_comments(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("[search]\nmax_depth = 2  # short\nrelations = all\nfirst_hop_relations = /r/AtLocation\n")
    cfg = SearchConfig.from_file(p)
    assert cfg.max_depth == 2 and cfg.relations is None and cfg.first_hop_relations == {"AtLocation"}


def test_unknown_key(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("depth = 2\n")
    with pytest.raises(ConfigError):
        SearchConfig.from_file(p)
    p.write_text("[other]\nmax_depth = 2\n")
    with pytest.raises(ConfigError):
        SearchConfig.from_file(p)
    p.write_text("max_depth = two\n")
    with pytest.raises(ConfigError):
        SearchConfig.from_file(p)
