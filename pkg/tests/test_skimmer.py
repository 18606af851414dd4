"""Article reflow, sentence selection, and the naming prescan."""

from importlib import resources
from pathlib import Path

import pytest

from textkb import kbio
from textkb.lexicon import Lexicon
from textkb.skimmer import TopicSpec, read_article, skim, split_sentences


def data_file(name: str) -> str:
    return str(resources.files("textkb").joinpath("data", name))


@pytest.fixture()
def world():
    class World:
        onto = kbio.load(data_file("ontology.txt"))
        lexicon = Lexicon.load(data_file("lexicon.tsv"))
        topic = TopicSpec.load(data_file("topic-diet.txt"))

        def skim(self, article):
            text = Path(data_file(f"corpus/{article}.txt")).read_text()
            return skim(text, self.topic, self.lexicon, self.onto)

    return World()


def test_wrapped_lines_rejoin_into_sentences():
    prose = (
        "A grizzly has long,\ncurved claws that it uses chiefly to dig out"
        " ground squirrels and mice.\nBears are fond of honey."
    )
    assert split_sentences(prose) == [
        "A grizzly has long, curved claws that it uses chiefly to dig out"
        " ground squirrels and mice.",
        "Bears are fond of honey.",
    ]


def test_abbreviations_do_not_end_sentences():
    assert split_sentences("Dr. Lee fed the owls. They slept.") == [
        "Dr. Lee fed the owls.",
        "They slept.",
    ]


def test_title_line_is_not_prose():
    article = read_article("Bats\nVampire bats live in caves. Bats fly.\n")
    assert article.title == "Bats"
    assert len(article.sentences) == 2


def test_selection_matches_lemmas_and_patterns(world):
    assert world.topic.selects("Honey is eaten by bears.", world.lexicon)
    assert world.topic.selects("The prey of polar bears consists of seals.", world.lexicon)
    assert not world.topic.selects("Birds have feathers.", world.lexicon)
    assert not world.topic.selects("The grizzly is a bear.", world.lexicon)


def test_naming_copula_admits_unknown_kind(world):
    report = world.skim("bears")
    assert ("grizzly", "bear") in report.learned
    assert world.onto.is_subclass("grizzly", "bear")
    assert world.lexicon.known("grizzly")
    assert len(report.selected) == 5


def test_known_word_never_renamed_by_copula(world):
    world.skim("tigers")
    assert "tiger" in world.onto
    assert not world.onto.is_subclass("tiger", "cat")  # "big cat" names nothing


def test_unknown_modifier_coins_compound_and_alias(world):
    report = world.skim("bats")
    assert ("vampire-bat", "bat") in report.learned
    (entry,) = world.lexicon.lookup("vampire")
    assert entry.senses == ("vampire-bat",)
    assert world.lexicon.known("vampire-bats")


def test_empty_adjective_coins_compound_without_alias(world):
    report = world.skim("eagles")
    assert ("crowned-eagle", "eagle") in report.learned
    (entry,) = world.lexicon.lookup("crowned")
    assert entry.senses == ()  # the adjective reading is untouched
    # "curved beaks" names nothing: beak is an unknown head
    assert not any(head == "beak" for _, head in report.learned)


def test_prescan_reads_even_unselected_sentences(world):
    report = world.skim("birds")
    assert ("tomato-worm", "worm") in report.learned  # from a skipped sentence
    assert world.lexicon.lookup("tomato")[0].senses == ("tomato-worm",)
    assert len(report.selected) == 16


def test_question_lead_in_is_not_a_modifier(world):
    world.skim("birds")
    assert not world.lexicon.known("how")
    assert "how-penguin" not in world.onto


def test_skim_is_idempotent(world):
    first = world.skim("sharks")
    assert ("mako-shark", "shark") in first.learned
    again = world.skim("sharks")
    assert again.learned == []
    assert again.selected == first.selected


ARTICLE_SENTENCE_COUNTS = {
    "bats": (3, 3),
    "bears": (8, 5),
    "birds": (18, 16),
    "eagles": (3, 2),
    "monkeys": (3, 3),
    "owls": (3, 3),
    "people": (3, 3),
    "seals": (4, 3),
    "sharks": (3, 3),
    "tigers": (3, 2),
}


@pytest.mark.parametrize("article", sorted(ARTICLE_SENTENCE_COUNTS))
def test_corpus_sentence_and_selection_counts(world, article):
    total, kept = ARTICLE_SENTENCE_COUNTS[article]
    report = world.skim(article)
    assert len(report.article.sentences) == total
    assert len(report.selected) == kept
