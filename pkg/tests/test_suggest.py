import pytest

from nfrkit import Taxonomy, suggest_category


@pytest.fixture
def taxonomy():
    return Taxonomy()


def ranking(answer, taxonomy, **kwargs):
    return [category for category, _ in suggest_category(answer, taxonomy, **kwargs)]


def test_performance_answer_ranks_performance_first(taxonomy):
    ranked = suggest_category("Less than 10 second", taxonomy)
    assert ranked[0] == ("Performance", 1.0)
    assert all(score == 0.0 for _, score in ranked[1:])


def test_empty_answer_keeps_taxonomy_order(taxonomy):
    ranked = suggest_category("", taxonomy)
    assert [c for c, _ in ranked] == list(taxonomy.categories)
    assert {s for _, s in ranked} == {0.0}


def test_usability_outranks_security_on_table1_row5(taxonomy):
    # two usability keywords (show, message) vs one security keyword (password)
    ranked = suggest_category(
        "Show message if submit without user name or password", taxonomy
    )
    scores = dict(ranked)
    assert scores["Usability"] == 1.0
    assert scores["Security"] == 0.5
    assert ranking(
        "Show message if submit without user name or password", taxonomy
    ).index("Usability") < ranking(
        "Show message if submit without user name or password", taxonomy
    ).index("Security")


def test_ties_break_by_taxonomy_order(taxonomy):
    # one keyword each: "second" (Performance) and "ways" (Flexibility)
    ranked = ranking("second ways", taxonomy)
    assert ranked[:2] == ["Performance", "Flexibility"]


def test_match_is_case_insensitive(taxonomy):
    assert ranking("PASSWORD required", taxonomy)[0] == "Security"


def test_multiword_keyword(taxonomy):
    assert ranking("use a drop down box", taxonomy)[0] == "Usability"


def test_scores_normalized_to_unit_interval(taxonomy):
    ranked = suggest_category("fast time in a second, show message options", taxonomy)
    assert ranked[0][1] == 1.0
    assert all(0.0 <= score <= 1.0 for _, score in ranked)


def test_custom_keyword_table():
    taxonomy = Taxonomy(("Latency", "Looks"))
    table = {"Latency": ("slow", "ms"), "Looks": ("pretty",)}
    ranked = suggest_category("500 ms is slow", taxonomy, keywords=table)
    assert ranked == [("Latency", 1.0), ("Looks", 0.0)]


def test_categories_without_keywords_score_zero(taxonomy):
    scores = dict(suggest_category("this mentions nothing relevant", taxonomy))
    assert scores["Legal issue"] == 0.0


def test_deterministic(taxonomy):
    a = suggest_category("show the time", taxonomy)
    b = suggest_category("show the time", taxonomy)
    assert a == b


def test_every_taxonomy_entry_is_ranked(taxonomy):
    ranked = suggest_category("anything", taxonomy)
    assert sorted(c for c, _ in ranked) == sorted(taxonomy.categories)
