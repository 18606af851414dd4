"""Instance formation, store integration, and forward inference."""

from importlib import resources

import pytest

from textkb import kbio
from textkb.formation import form_sentence
from textkb.inference import infer
from textkb.integration import integrate
from textkb.interpreter import Interpreter, load_meaning_rules
from textkb.lexicon import Lexicon
from textkb.noun_group import PairTable
from textkb.ontology import Quantifier
from textkb.parser import Parser
from textkb.verbal_concepts import VerbalConcepts


def data_file(name: str) -> str:
    return str(resources.files("textkb").joinpath("data", name))


class World:
    def __init__(self):
        self.onto = kbio.load(data_file("ontology.txt"))
        self.lexicon = Lexicon.load(data_file("lexicon.tsv"))
        self.vcs = VerbalConcepts.load(data_file("vconcepts.txt"), self.onto)
        self.pairs = PairTable.load(data_file("pairschema.txt"), self.onto)
        rules = load_meaning_rules(data_file("vmrules.txt"), self.vcs, self.onto)
        self.parser = Parser(self.lexicon, self.onto)
        self.interp = Interpreter(
            self.onto, self.lexicon, self.vcs, self.pairs, rules
        )

    def form(self, text, topic=None):
        meaning = self.interp.interpret(self.parser.parse(text, topic_class=topic))
        assert meaning.failures == []
        return form_sentence(self.onto, meaning)

    def ingest(self, text, topic=None):
        formed = self.form(text, topic)
        report = integrate(self.onto, formed.astructs, formed.statements)
        derived = infer(self.onto, self.vcs, report.kept)
        integrate(self.onto, derived)
        assert self.onto.check() == []
        return report


@pytest.fixture()
def world():
    return World()


def facts(onto, relation=None):
    out = set()
    for astr in onto.astructs.values():
        if relation is None or astr.relation == relation:
            out.add(
                (astr.relation,)
                + tuple((b.role, b.concept, b.quant.token()) for b in astr.bindings)
            )
    return out


# ---------------------------------------------------------------- formation


def test_three_member_object_expands_to_three_instances(world):
    formed = world.form("Ducks eat plant matter, grass and seaweed.")
    assert [a.relation for a in formed.astructs] == ["ingest"] * 3
    themes = [a.bindings[1].concept for a in formed.astructs]
    assert themes == ["plant-matter", "grass", "seaweed"]
    for astr, theme in zip(formed.astructs, themes):
        assert astr.semantics() == (
            f"∀x(duck(x) ⟹ ∃y({theme}(y) ∧ ingest(x,y)))"
        )


def test_linked_events_form_one_instance_after_their_parent(world):
    world.lexicon.add_provisional_noun("grizzly", "bear", world.onto)
    formed = world.form(
        "A grizzly has long, curved claws that it uses chiefly to dig out"
        " ground squirrels and mice."
    )
    have, use, dig = formed.astructs
    assert [a.relation for a in (have, use, dig)] == ["have", "use", "dig-out"]
    # links point forward: the linking instance was numbered first
    assert use.modifiers["purpose"] == dig.id
    assert int(use.id[2:]) < int(dig.id[2:])
    # the linked event holds both themes on one instance
    assert [b.role for b in dig.bindings] == ["actor", "theme", "theme"]
    assert {b.concept for b in dig.bindings if b.role == "theme"} >= {"mouse"}


def test_coordination_squares_out(world):
    formed = world.form("Hunters and trappers kill eagles and ospreys.")
    combos = {
        (a.bindings[0].concept, a.bindings[1].concept) for a in formed.astructs
    }
    assert combos == {
        ("hunter", "eagle"),
        ("hunter", "osprey"),
        ("trapper", "eagle"),
        ("trapper", "osprey"),
    }


# --------------------------------------------------------------- integration


def test_integration_builds_slots_and_objects(world):
    report = world.ingest("Monkeys eat fruit.")
    assert len(report.created) == 1
    (aid,) = report.created
    (entry,) = world.onto.slot_entries("monkey", "ingest")
    assert (entry.filler, entry.quant) == ("fruit", Quantifier.unknown())
    assert aid in entry.more
    (back,) = world.onto.slot_entries("fruit", "ingest%by")
    assert (back.filler, back.quant) == ("monkey", Quantifier.universal())
    assert {"monkey", "fruit"} <= world.onto.objects


def test_linked_instances_get_no_slots(world):
    world.ingest("Birds migrate south when it freezes.")
    migrate = [a for a in world.onto.astructs.values() if a.relation == "migrate"]
    freeze = [a for a in world.onto.astructs.values() if a.relation == "freeze"]
    assert len(migrate) == 1 and len(freeze) == 1
    assert migrate[0].modifiers["time"] == freeze[0].id
    assert world.onto.slot_entries("bird", "migrate")  # asserted fact indexed
    assert not world.onto.concept("weather").slots  # linked event not indexed


def test_reingesting_a_sentence_changes_nothing(world):
    world.ingest("Birds migrate south when it freezes.")
    before_astructs = set(world.onto.astructs)
    before = kbio.dumps(world.onto)
    report = world.ingest("Birds migrate south when it freezes.")
    assert report.created == []
    assert len(report.merged) == 2
    assert set(world.onto.astructs) == before_astructs
    assert kbio.dumps(world.onto) == before


def test_direct_and_derived_statements_share_one_slot(world):
    world.ingest("Honey is eaten by bears.")
    world.ingest("Bears are fond of honey.")
    (entry,) = [
        e
        for e in world.onto.slot_entries("bear", "ingest")
        if e.filler == "honey"
    ]
    assert len(entry.more) == 2  # stated instance and inferred instance
    derived = [world.onto.astructs[i].derived_by for i in entry.more]
    assert sorted(d or "" for d in derived) == ["", "be-fond-of.r1"]


# ----------------------------------------------------------------- inference


def test_digging_out_implies_eating(world):
    world.lexicon.add_provisional_noun("grizzly", "bear", world.onto)
    world.ingest(
        "A grizzly has long, curved claws that it uses chiefly to dig out"
        " ground squirrels and mice."
    )
    derived = [a for a in world.onto.astructs.values() if a.derived_by]
    assert {a.relation for a in derived} == {"ingest"}
    themes = {a.bindings[1].concept for a in derived}
    assert "mouse" in themes
    squirrels = themes - {"mouse"}
    ((rel, filler),) = [
        (r.relation, r.filler)
        for s in squirrels
        for r in world.onto.concept(s).cf.restrictions
    ]
    assert (rel, filler) == ("live-in", "ground")
    for a in derived:
        assert a.derived_by == "dig-r.r1"
        assert world.onto.astructs[a.derived_from].relation == "dig-out"
    # derived facts are asserted: they enter the slot index
    assert any(
        e.filler == "mouse" for e in world.onto.slot_entries("grizzly", "ingest")
    )


def test_fondness_implies_eating(world):
    world.ingest("Bears are fond of honey.")
    assert ("ingest", ("actor", "bear", "all"), ("theme", "honey", "?")) in facts(
        world.onto, "ingest"
    )


def test_hunting_for_food_implies_eating_for_people(world):
    world.ingest("Eskimos hunt polar bears for food.")
    assert (
        "ingest",
        ("actor", "eskimo", "all"),
        ("theme", "polar-bear", "?"),
    ) in facts(world.onto, "ingest")


def test_hunting_for_fur_implies_no_eating(world):
    world.ingest("People hunt some kinds of seals for their soft fur.")
    assert facts(world.onto, "ingest") == set()


def test_searching_for_places_implies_no_eating(world):
    world.ingest("Tigers search for warm places to sleep during the day.")
    assert facts(world.onto, "ingest") == set()
    assert facts(world.onto, "search-for") != set()


def test_animal_hunting_implies_eating_with_carried_modifiers(world):
    world.ingest("Tigers hunt deer at night.")
    derived = [a for a in world.onto.astructs.values() if a.derived_by]
    assert len(derived) == 1
    assert derived[0].relation == "ingest"
    assert derived[0].modifiers == {"time": "night"}
    assert derived[0].derived_by == "animal-hunt.r1"


def test_inference_is_single_step_and_repeatable(world):
    world.ingest("Bears are fond of honey.")
    count = len(world.onto.astructs)
    derived = infer(
        world.onto, world.vcs, list(world.onto.astructs.values())
    )
    integrate(world.onto, derived)
    assert len(world.onto.astructs) == count  # nothing new on a second pass
