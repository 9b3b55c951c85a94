import pytest
from hypothesis import given
from hypothesis import strategies as st

from csk_organizer.errors import EmptyLabel, NonEnglishConcept
from csk_organizer.kg import Relation, assertion_to_edge, normalize_label


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("/c/en/apple/n", "apple"),
        ("Remote Control", "remote_control"),
        ("Apple", "apple"),
        ("/c/en/apple", "apple"),
        ("/c/en/remote_control/n/wn/artifact", "remote_control"),
        ("  aerosol   can\t", "aerosol_can"),
        ("/C/EN/Dining_Room", "dining_room"),
    ],
)
def test_normalize_examples(raw, expected):
    assert normalize_label(raw) == expected


def test_uri_and_plain_label_agree():
    assert normalize_label("/c/en/apple/n") == normalize_label("Apple")


@pytest.mark.parametrize("raw", ["", "   ", "\t\n", "/c/en/", "/c/en"])
def test_empty_label(raw):
    with pytest.raises(EmptyLabel):
        normalize_label(raw)


def test_non_english():
    with pytest.raises(NonEnglishConcept) as info:
        normalize_label("/c/fr/pomme")
    assert info.value.language == "fr"


@given(st.text(min_size=1))
def test_normalization_idempotent(raw):
    try:
        once = normalize_label(raw)
    except (EmptyLabel, NonEnglishConcept):
        return
    assert normalize_label(once) == once
    assert once
    assert "\t" not in once and "\n" not in once and " " not in once
    assert once == once.lower()


@given(st.lists(st.sampled_from(["/c/en/", "/c/de/", "Kitchen", " ", "x", "/n", "Ü", "_"]), min_size=1).map("".join))
def test_normalization_idempotent_uri_like(raw):
    try:
        once = normalize_label(raw)
    except (EmptyLabel, NonEnglishConcept):
        return
    assert normalize_label(once) == once


def test_relation_parse():
    assert Relation.parse("/r/AtLocation") == Relation("AtLocation")
    assert not Relation.parse("/r/AtLocation").is_other
    other = Relation.parse("/r/dbpedia/genre")
    assert other.is_other and other.name == "dbpedia/genre"
    assert Relation.parse(Relation("IsA")) == Relation("IsA")
    with pytest.raises(ValueError):
        Relation.parse("/r/")


def test_assertion_to_edge():
    e = assertion_to_edge("/r/AtLocation", "/c/en/food", "/c/en/kitchen", 7.21)
    assert (e.start, e.end, e.relation.name, e.weight) == ("food", "kitchen", "AtLocation", 7.21)
    assert assertion_to_edge("/r/AtLocation", "/c/fr/pomme", "/c/en/kitchen", 1.0) is None
    assert assertion_to_edge("/r/AtLocation", "/c/en/a", "/c/en/b", 0) is None
    with pytest.raises(ValueError):
        assertion_to_edge("/r/AtLocation", "/c/en/a", "/c/en/b", "heavy")
