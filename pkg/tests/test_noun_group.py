"""Noun-group composition: schema pairs, hyphenation, candidate ranking."""

import pytest

from textkb.noun_group import (
    NGItem,
    PairSchema,
    PairTable,
    genitive_specialize,
    interpret_noun_group,
    specialize,
)
from textkb.ontology import (
    ROOT,
    CfDefinition,
    Ontology,
    Quantifier,
    RelationRestriction,
)


@pytest.fixture()
def onto():
    o = Ontology()
    for rel in ("ingest", "live-in", "inhabit", "size", "color", "contains"):
        o.declare_relation(rel)
    tree = {
        "physical-object": ROOT,
        "substance": ROOT,
        "quality": ROOT,
        "habitat": ROOT,
        "region": ROOT,
        "weather": ROOT,
        "food": "physical-object",
        "animate": "physical-object",
        "animal": "animate",
        "mammal": "animal",
        "lion": "mammal",
        "bear": "mammal",
        "polar-bear": "bear",
        "artifact": "physical-object",
        "container": "artifact",
        "bottle": "container",
        "drink": "substance",
        "wine": "drink",
        "quality-size": "quality",
        "quality-color": "quality",
        "big": "quality-size",
        "red": "quality-color",
        "sea": "habitat",
        "forest": "habitat",
        "rain": "weather",
        "africa": "region",
    }
    for cid, parent in tree.items():
        o.add_concept(cid, parents=[parent])
    return o


@pytest.fixture()
def table():
    return PairTable(
        [
            PairSchema("habitat", "animate", "live-in", "second"),
            PairSchema("quality-size", "physical-object", "size", "second"),
            PairSchema("quality-color", "drink", "color", "second"),
            PairSchema("quality-color", "physical-object", "color", "second"),
            PairSchema("substance", "container", "contains", "second"),
            PairSchema("region", "animate", "inhabit", "second"),
        ]
    )


def cf_of(onto, cid):
    return onto.concept(cid).cf


def test_pair_meaning_contract_examples(onto, table):
    m = table.pair_meaning("sea", "mammal", onto)
    assert m is not None and m.relation == "live-in" and m.holder == "second"
    assert table.pair_meaning("rain", "forest", onto) is None
    m = table.pair_meaning("wine", "bottle", onto)
    assert m is not None and m.relation == "contains"


def test_sea_mammal_equals_mammals_that_live_in_the_sea(onto, table):
    relcl = specialize(onto, "mammal", [("live-in", "sea", Quantifier.existential())])
    (ng,) = interpret_noun_group([NGItem("sea", "sea"), NGItem("mammal", "mammal")], onto, table)
    assert ng == relcl
    assert onto.equivalent(ng, relcl)


def test_sea_lion_is_defined_not_primitive(onto, table):
    (ng,) = interpret_noun_group([NGItem("sea", "sea"), NGItem("lion", "lion")], onto, table)
    cf = cf_of(onto, ng)
    assert cf is not None
    assert cf.genus == "lion"
    assert [(r.relation, r.filler) for r in cf.restrictions] == [("live-in", "sea")]


def test_quoted_sea_lion_bypasses_pairing(onto, table):
    (ng,) = interpret_noun_group(
        [NGItem("sea", "sea"), NGItem("lion", "lion")], onto, table, proper=True
    )
    assert ng == "sea-lion"
    assert cf_of(onto, ng) is None
    assert onto.concepts[ng].parents == {"lion"}


def test_rain_forest_hyphenates(onto, table):
    (ng,) = interpret_noun_group([NGItem("rain", "rain"), NGItem("forest", "forest")], onto, table)
    assert ng == "rain-forest"
    assert cf_of(onto, ng) is None
    assert onto.concepts[ng].parents == {"forest"}
    # reuse, not duplication
    again = interpret_noun_group([NGItem("rain", "rain"), NGItem("forest", "forest")], onto, table)
    assert again == ["rain-forest"]


def test_senseless_modifier_hyphenates(onto, table):
    (ng,) = interpret_noun_group([NGItem("crowned", None), NGItem("eagle", "lion")], onto, table)
    assert ng == "crowned-lion"
    assert onto.concepts[ng].parents == {"lion"}


def test_collapse_when_modifier_already_specializes_head(onto, table):
    out = interpret_noun_group(
        [NGItem("polar", "polar-bear"), NGItem("bear", "bear")], onto, table
    )
    assert out == ["polar-bear"]


def test_big_red_wine_bottle_exactly_two_candidates(onto, table):
    items = [
        NGItem("big", "big"),
        NGItem("red", "red"),
        NGItem("wine", "wine"),
        NGItem("bottle", "bottle"),
    ]
    ex = Quantifier.existential()
    red_wine = specialize(onto, "wine", [("color", "red", ex)])
    preferred = specialize(onto, "bottle", [("size", "big", ex), ("contains", red_wine, ex)])
    other = specialize(
        onto, "bottle", [("size", "big", ex), ("color", "red", ex), ("contains", "wine", ex)]
    )
    got = interpret_noun_group(items, onto, table)
    assert got == [preferred, other]
    assert "big-red-wine-bottle" in onto.concepts[preferred].names


def test_candidates_are_stable_and_reused(onto, table):
    items = lambda: [
        NGItem("big", "big"),
        NGItem("red", "red"),
        NGItem("wine", "wine"),
        NGItem("bottle", "bottle"),
    ]
    first = interpret_noun_group(items(), onto, table)
    n = len(onto.concepts)
    second = interpret_noun_group(items(), onto, table)
    assert first == second
    assert len(onto.concepts) == n


def test_genitive_specialization_binds_first_matching_sense(onto, table):
    onto.add_concept(
        "diet",
        cf=CfDefinition(
            "food", (RelationRestriction("ingest%by", "animal", Quantifier.existential()),)
        ),
    )
    onto.classify("diet")
    got = genitive_specialize(onto, ["diet"], "bear")
    assert got is not None
    cf = cf_of(onto, got)
    assert cf.genus == "food"
    assert [(r.relation, r.filler) for r in cf.restrictions] == [("ingest%by", "bear")]
    # an of-object no restriction can bind does not specialize
    assert genitive_specialize(onto, ["diet"], "sea") is None
    # a primitive head has no restrictions to bind
    assert genitive_specialize(onto, ["bear"], "sea") is None


def test_defined_head_binds_its_modifier(onto, table):
    onto.add_concept("insect", parents=["animal"])
    onto.add_concept(
        "eater",
        cf=CfDefinition(
            "animate", (RelationRestriction("ingest", "physical-object", Quantifier.existential()),)
        ),
    )
    onto.classify("eater")
    (ng,) = interpret_noun_group(
        [NGItem("insect", "insect"), NGItem("eaters", "eater")], onto, table
    )
    cf = cf_of(onto, ng)
    assert cf.genus == "animate"
    assert [(r.relation, r.filler) for r in cf.restrictions] == [("ingest", "insect")]
    assert onto.by_name("insect-eaters") == ng
    # the modifier must actually fit a restriction; otherwise normal pairing applies
    (plain,) = interpret_noun_group(
        [NGItem("sea", "sea"), NGItem("eaters", "eater")], onto, table
    )
    cf2 = cf_of(onto, plain)
    assert cf2 is not None
    assert ("live-in", "sea") in [(r.relation, r.filler) for r in cf2.restrictions]
