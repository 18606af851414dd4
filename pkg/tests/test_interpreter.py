"""Clause interpretation: verbal-concept choice, roles, quantifiers."""

from importlib import resources

import pytest

from textkb import kbio
from textkb.interpreter import (
    ClauseFailure,
    Interpretation,
    Interpreter,
    RuleFormatError,
    load_meaning_rules,
)
from textkb.lexicon import Lexicon
from textkb.noun_group import PairTable
from textkb.ontology import QuantKind, Quantifier
from textkb.parser import Parser
from textkb.verbal_concepts import VerbalConcepts


def data_file(name: str) -> str:
    return str(resources.files("textkb").joinpath("data", name))


@pytest.fixture()
def world():
    onto = kbio.load(data_file("ontology.txt"))
    lex = Lexicon.load(data_file("lexicon.tsv"))
    vcs = VerbalConcepts.load(data_file("vconcepts.txt"), onto)
    pairs = PairTable.load(data_file("pairschema.txt"), onto)
    rules = load_meaning_rules(data_file("vmrules.txt"), vcs, onto)
    parser = Parser(lex, onto)
    interp = Interpreter(onto, lex, vcs, pairs, rules)
    return onto, lex, parser, interp


def run(world, text, topic=None):
    onto, lex, parser, interp = world
    return interp.interpret(parser.parse(text, topic_class=topic))


def only(meaning):
    assert meaning.failures == []
    assert len(meaning.clauses) == 1
    return meaning.clauses[0]


def restrictions(onto, cid):
    cf = onto.concept(cid).cf
    assert cf is not None
    return cf.genus, {(r.relation, r.filler) for r in cf.restrictions}


# -------------------------------------------------------------- structure


def test_two_clause_sentence_with_genitive_subject(world):
    onto = world[0]
    meaning = run(
        world, "The crowned eagle of Africa lives in the rain forests and eats monkeys."
    )
    assert meaning.failures == []
    lives, eats = meaning.clauses
    assert (lives.vc, lives.relation) == ("live", "live-in")
    (eagle,) = lives.roles["actor"].members
    assert restrictions(onto, eagle) == ("crowned-eagle", {("inhabit", "africa")})
    assert lives.roles["actor"].quant == Quantifier.universal()
    assert lives.roles["location-r"].members == ("rain-forest",)
    assert lives.roles["location-r"].quant == Quantifier.unknown()
    assert onto.concept("rain-forest").parents == {"forest"}
    # the second clause shares the specialized subject
    assert (eats.vc, eats.relation) == ("ingest", "ingest")
    assert eats.roles["actor"].members == (eagle,)
    assert eats.roles["theme"].members == ("monkey",)
    assert eats.roles["theme"].quant == Quantifier.unknown()


def test_object_relative_clause_becomes_companion_event(world):
    onto, lex, parser, interp = world
    lex.add_provisional_noun("grizzly", "bear", onto)
    meaning = run(
        world,
        "A grizzly has long, curved claws that it uses chiefly to dig out"
        " ground squirrels and mice.",
    )
    have = only(meaning)
    assert (have.vc, have.relation) == ("have", "have")
    assert have.roles["actor"].members == ("grizzly",)
    (claws,) = have.roles["theme"].members
    genus, rest = restrictions(onto, claws)
    assert genus == "curved-claw" and rest == {("size", "long")}

    (use,) = have.companions
    assert (use.vc, use.relation) == ("use", "use")
    assert use.roles["actor"].members == ("grizzly",)
    assert use.roles["theme"].members == (claws,)
    assert use.modifiers["frequency"] == "chiefly"
    dig = use.modifiers["purpose"]
    assert (dig.vc, dig.relation) == ("dig-r", "dig-out")
    assert dig.roles["actor"].members == ("grizzly",)
    squirrels, mouse = dig.roles["theme"].members
    assert restrictions(onto, squirrels) == ("squirrel", {("live-in", "ground")})
    assert mouse == "mouse"


def test_passive_by_phrase_supplies_actor(world):
    itp = only(run(world, "Honey is eaten by bears."))
    assert itp.relation == "ingest"
    assert itp.roles["actor"].members == ("bear",)
    assert itp.roles["actor"].quant == Quantifier.universal()
    assert itp.roles["theme"].members == ("honey",)
    assert itp.roles["theme"].quant == Quantifier.unknown()


def test_hedged_fishing_defaults_its_theme(world):
    itp = only(run(world, "Owls have been known to fish in shallow creeks."))
    assert (itp.vc, itp.relation) == ("animal-fish", "hunt")
    assert itp.roles["actor"].members == ("owl",)
    assert itp.roles["theme"].members == ("fish",)
    assert itp.roles["theme"].quant == Quantifier.unknown()
    assert itp.modifiers["frequency"] == "sometimes"
    assert itp.modifiers["location"] == "shallow-creek"


def test_rarely_weakens_the_theme_quantifier(world):
    itp = only(run(world, "These owls rarely eat rodents."))
    assert itp.roles["actor"].quant == Quantifier.universal()
    assert itp.roles["theme"].members == ("rodent",)
    assert itp.roles["theme"].quant == Quantifier.proportion("rarely")
    assert "frequency" not in itp.modifiers


def test_fond_predicate_selects_its_own_meaning(world):
    itp = only(run(world, "Bears are fond of honey."))
    assert (itp.vc, itp.relation) == ("be-fond-of", "be-fond-of")
    assert itp.roles["actor"].members == ("bear",)
    assert itp.roles["theme"].members == ("honey",)


def test_measured_object_and_daily_frequency(world):
    onto, lex, parser, interp = world
    onto.add_concept("vampire-bat", parents=["bat"])
    lex.alias_noun("vampire", "vampire-bat")
    itp = only(run(world, "A vampire bat drinks 1 tablespoon of blood a day."))
    assert (itp.vc, itp.relation) == ("drink", "ingest")
    assert itp.roles["actor"].members == ("vampire-bat",)
    assert itp.roles["theme"].members == ("blood",)
    assert itp.roles["theme"].quant == Quantifier.count("1", "tablespoon")
    assert itp.modifiers["quantity"] == "1:tablespoon"
    assert itp.modifiers["frequency"] == "day"


def test_take_resolves_by_clause_shape(world):
    ingest = only(run(world, "Peter took an aspirin."))
    assert (ingest.vc, ingest.relation) == ("ingest", "ingest")
    assert ingest.roles["actor"].members == ("peter",)
    assert ingest.roles["theme"].members == ("aspirin",)

    to = only(run(world, "Peter took an aspirin to Mary."))
    assert (to.vc, to.relation) == ("transport", "transport")
    assert to.roles["recipient"].members == ("mary",)
    assert to.roles["theme"].members == ("aspirin",)

    io = only(run(world, "Peter took Mary an aspirin."))
    assert (io.vc, io.relation) == ("transport", "transport")
    assert io.roles["recipient"].members == ("mary",)
    assert io.roles["theme"].members == ("aspirin",)


def test_enumerated_enemies_inherit_the_role(world):
    onto = world[0]
    itp = only(
        run(
            world,
            "Monkeys that live on the ground have enemies such as leopards,"
            " lions, cheetahs, hyenas and jackals.",
        )
    )
    assert (itp.vc, itp.relation) == ("have-enemy", "has-enemy")
    (ground_monkey,) = itp.roles["actor"].members
    assert restrictions(onto, ground_monkey) == ("monkey", {("at-loc", "ground")})
    assert itp.roles["theme"].members == (
        "leopard",
        "lion",
        "cheetah",
        "hyena",
        "jackal",
    )
    assert itp.roles["theme"].quant == Quantifier.unknown()


def test_relational_subject_runs_forward(world):
    onto = world[0]
    itp = only(run(world, "The diet of bears consists of nuts, berries and small rodents."))
    assert (itp.vc, itp.relation) == ("consist-of", "ingest")
    assert itp.roles["actor"].members == ("bear",)
    assert itp.roles["actor"].quant == Quantifier.universal()
    nut, berry, small = itp.roles["theme"].members
    assert (nut, berry) == ("nut", "berry")
    assert restrictions(onto, small) == ("rodent", {("size", "small")})


def test_kind_of_object_is_transparent(world):
    onto = world[0]
    itp = only(run(world, "People hunt some kinds of seals for their soft fur."))
    assert (itp.vc, itp.relation) == ("human-hunt", "hunt")
    assert itp.roles["actor"].members == ("human",)
    assert itp.roles["theme"].members == ("seal",)
    assert itp.roles["theme"].quant == Quantifier.existential()
    (fur,) = itp.roles["purpose"].members
    assert restrictions(onto, fur) == ("fur", {("texture", "soft")})


def test_animal_hunting_with_weak_time(world):
    itp = only(run(world, "Tigers hunt deer at night."))
    assert (itp.vc, itp.relation) == ("animal-hunt", "hunt")
    assert itp.roles["theme"].members == ("deer",)
    assert itp.modifiers["time"] == "night"


def test_when_clause_falls_back_to_case_restriction(world):
    itp = only(run(world, "Birds migrate south when it freezes."))
    assert (itp.vc, itp.relation) == ("migrate", "migrate")
    assert itp.roles["direction"].members == ("south",)
    freeze = itp.modifiers["time"]
    assert isinstance(freeze, Interpretation)
    assert freeze.relation == "freeze"
    assert freeze.roles["actor"].members == ("weather",)
    assert freeze.roles["actor"].quant == Quantifier.unknown()


def test_manner_clause_with_folded_relative(world):
    onto = world[0]
    itp = only(run(world, "Birds help farmers by eating insects that eat crops."))
    assert (itp.vc, itp.relation) == ("help", "help")
    assert itp.roles["theme"].members == ("farmer",)
    eating = itp.modifiers["manner"]
    assert eating.relation == "ingest"
    assert eating.roles["actor"].members == ("bird",)
    (pest,) = eating.roles["theme"].members
    assert restrictions(onto, pest) == ("insect", {("ingest", "crop")})


def test_most_quantifies_a_folded_subject(world):
    onto = world[0]
    itp = only(run(world, "Most birds that live in cactuses eat insects."))
    (cactus_bird,) = itp.roles["actor"].members
    assert restrictions(onto, cactus_bird) == ("bird", {("live-in", "cactus")})
    assert itp.roles["actor"].quant == Quantifier.proportion("most")
    assert itp.roles["theme"].members == ("insect",)


def test_compound_heads_build_defined_concepts(world):
    onto = world[0]
    itp = only(run(world, "The Louisiana water thrush eats water insects."))
    (thrush,) = itp.roles["actor"].members
    genus, rest = restrictions(onto, thrush)
    assert genus == "thrush"
    assert rest == {("inhabit", "louisiana"), ("live-in", "water")}
    assert onto.by_name("louisiana-water-thrush") == thrush
    (prey,) = itp.roles["theme"].members
    assert restrictions(onto, prey) == ("insect", {("live-in", "water")})


# ---------------------------------------------------------------- failures


def test_unattachable_preposition_fails_the_clause(world):
    meaning = run(world, "Tigers sleep in honey.")
    assert meaning.clauses == []
    assert meaning.failures == ["unattached preposition: in"]


def test_missing_required_role_fails_the_clause(world):
    meaning = run(world, "Bears eat.")
    assert meaning.clauses == []
    assert meaning.failures == ["ingest is missing its theme"]


def test_case_violation_fails_the_clause(world):
    meaning = run(world, "Hunters kill eagles and forests.")
    assert meaning.clauses == []
    assert len(meaning.failures) == 1
    assert "does not fit kill" in meaning.failures[0]


def test_one_bad_clause_does_not_sink_the_others(world):
    meaning = run(world, "Bears eat honey and sleep in honey.")
    assert len(meaning.clauses) == 1
    assert meaning.clauses[0].relation == "ingest"
    assert meaning.failures == ["unattached preposition: in"]


# ------------------------------------------------------------- rule files


def test_meaning_rule_errors_carry_line_numbers(world, tmp_path):
    onto, lex, parser, interp = world
    vcs = VerbalConcepts.load(data_file("vconcepts.txt"), onto)

    bad = tmp_path / "rules.txt"
    bad.write_text("vmrule verb eat => nonesuch\n")
    with pytest.raises(RuleFormatError, match="line 1: unknown verbal concept"):
        load_meaning_rules(bad, vcs, onto)

    bad.write_text("# ok\nvmrule nowhere eat => ingest\n")
    with pytest.raises(RuleFormatError, match="line 2: bad trigger point"):
        load_meaning_rules(bad, vcs, onto)

    bad.write_text("vmrule verb eat if obj sorta food => ingest\n")
    with pytest.raises(RuleFormatError, match="line 1: bad condition"):
        load_meaning_rules(bad, vcs, onto)

    bad.write_text("vmrule verb eat ingest\n")
    with pytest.raises(RuleFormatError, match="missing '=>'"):
        load_meaning_rules(bad, vcs, onto)
