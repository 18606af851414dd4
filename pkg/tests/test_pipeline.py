"""Reading sessions: corpus ingest statistics, store round trips, sidecars."""

from pathlib import Path

import pytest

from textkb.pipeline import (
    DATA_DIR_ENV,
    Session,
    bundled_corpus,
    default_data_dir,
    lexicon_sidecar,
)
from textkb.qa import CANNOT_PARSE

GOLDEN_DUMP = Path(__file__).parent / "golden" / "corpus.kb"

# (sentences, selected, parsed, interpreted, instances added, derivations)
CORPUS_STATS = {
    "Bats": (3, 3, 3, 3, 3, 0),
    "Bears": (8, 5, 5, 5, 13, 4),
    "Birds": (18, 16, 15, 15, 31, 0),
    "Eagles": (3, 2, 2, 2, 6, 0),
    "Monkeys": (3, 3, 3, 3, 7, 0),
    "Owls": (3, 3, 3, 3, 4, 1),
    "People": (3, 3, 3, 3, 2, 0),
    "Seals": (4, 3, 3, 3, 4, 0),
    "Sharks": (3, 3, 3, 3, 5, 0),
    "Tigers": (3, 2, 2, 2, 4, 1),
}


@pytest.fixture(scope="module")
def corpus_session():
    s = Session()
    s.stats = s.read_corpus()
    return s


def test_bundled_corpus_is_sorted():
    paths = bundled_corpus()
    assert len(paths) == 10
    assert [p.name for p in paths] == sorted(p.name for p in paths)


def test_data_dir_override(monkeypatch, tmp_path):
    monkeypatch.setenv(DATA_DIR_ENV, str(tmp_path))
    assert default_data_dir() == tmp_path
    monkeypatch.delenv(DATA_DIR_ENV)
    assert default_data_dir().joinpath("ontology.txt").exists()


def test_corpus_reading_statistics(corpus_session):
    got = {
        st.title: (
            st.sentences,
            st.selected,
            st.parsed,
            st.interpreted,
            st.integrated,
            st.inferred,
        )
        for st in corpus_session.stats
    }
    assert got == CORPUS_STATS


def test_only_failure_is_the_unknown_question_word(corpus_session):
    failures = [f for st in corpus_session.stats for f in st.failures]
    assert failures == [
        "How penguins eat remains a mystery to scientists. [unknown word: How]"
    ]


def test_corpus_dump_matches_golden(corpus_session):
    assert corpus_session.dump() == GOLDEN_DUMP.read_text(encoding="utf-8")


def test_store_verifies_after_reading(corpus_session):
    assert corpus_session.check() == []


def test_rereading_the_corpus_changes_nothing():
    s = Session()
    s.read_corpus()
    before = s.dump()
    again = s.read_corpus()
    assert s.dump() == before
    assert all(st.integrated == 0 for st in again)


def test_save_and_load_round_trip(tmp_path, corpus_session):
    kb = tmp_path / "animals.kb"
    corpus_session.save(kb)
    assert kb.exists()
    assert lexicon_sidecar(kb).exists()

    loaded = Session()
    loaded.load_store(kb)
    assert loaded.dump() == corpus_session.dump()
    assert loaded.check() == []


def test_sidecar_carries_the_learned_words(tmp_path, corpus_session):
    kb = tmp_path / "animals.kb"
    corpus_session.save(kb)
    question = "Do vampire bats attack human beings?"

    with_sidecar = Session()
    with_sidecar.load_store(kb)
    assert with_sidecar.ask(question) == (
        "yes, vampire-bat harm human *frequency* sometimes"
    )

    lexicon_sidecar(kb).unlink()
    without = Session()
    without.load_store(kb)
    assert without.ask(question) == CANNOT_PARSE


def test_single_article_reading(tmp_path):
    article = tmp_path / "bears.txt"
    article.write_text("Bears\nBears eat honey.\nBears are large.\n")
    s = Session()
    stats = s.read_file(article)
    assert stats.title == "Bears"
    assert stats.sentences == 2
    assert stats.failures == []
    assert s.ask("Do bears eat honey?") == "yes, bear ingest honey"
