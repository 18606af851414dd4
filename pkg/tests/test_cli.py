"""Command line entry points."""

from pathlib import Path

import pytest

from textkb.cli import main

GOLDEN_DUMP = Path(__file__).parent / "golden" / "corpus.kb"


@pytest.fixture(scope="module")
def saved_kb(tmp_path_factory):
    kb = tmp_path_factory.mktemp("cli") / "animals.kb"
    assert main(["ingest", "--corpus", "--kb", str(kb)]) == 0
    return kb


def test_ingest_reports_statistics_and_saves(saved_kb, capsys):
    assert main(["ingest", "--corpus", "--kb", str(saved_kb)]) == 0
    out = capsys.readouterr().out
    assert "article     sentences  selected  parsed  interpreted  added  derived" in out
    assert "Bears" in out and "Tigers" in out
    assert "skipped: How penguins eat remains a mystery" in out
    assert f"store written to {saved_kb}" in out
    assert saved_kb.exists()
    assert Path(str(saved_kb) + ".lex").exists()


def test_ask_explains_by_default(saved_kb, capsys):
    assert main(["ask", "Do bats eat blood?", "--kb", str(saved_kb)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines() == [
        "yes, some bat ingest blood because",
        "  vampire-bat is-a bat and",
        "  vampire-bat ingest blood quantity 1 tablespoon *frequency* day",
    ]


def test_ask_no_explain_gives_facts_only(saved_kb, capsys):
    assert main(["ask", "Do bats eat blood?", "--no-explain", "--kb", str(saved_kb)]) == 0
    assert capsys.readouterr().out == "yes, some bat ingest blood\n"


def test_dump_prints_the_store(saved_kb, capsys):
    assert main(["dump", "--kb", str(saved_kb)]) == 0
    assert capsys.readouterr().out == GOLDEN_DUMP.read_text(encoding="utf-8")


def test_check_passes_on_a_sound_store(saved_kb, capsys):
    assert main(["check", "--kb", str(saved_kb)]) == 0
    assert capsys.readouterr().err == ""


def test_ingest_of_named_articles(tmp_path, capsys):
    article = tmp_path / "bears.txt"
    article.write_text("Bears\nBears eat honey.\n")
    assert main(["ingest", "--article", str(article)]) == 0
    out = capsys.readouterr().out
    assert "Bears" in out


def test_ask_without_a_store_reads_the_corpus(capsys):
    assert main(["ask", "Which birds eat nectar?"]) == 0
    assert capsys.readouterr().out == "hummingbird ingest nectar\n"


def test_repl_loop(saved_kb, capsys, monkeypatch):
    lines = iter(
        [
            "Do birds help people?",
            ":explain off",
            "Do bats eat blood?",
            ":explain bogus",
            ":quit",
        ]
    )
    monkeypatch.setattr("builtins.input", lambda prompt="": next(lines))
    assert main(["repl", "--kb", str(saved_kb)]) == 0
    out = capsys.readouterr().out
    assert "yes, bird help farmer" in out
    assert "yes, some bat ingest blood\n" in out
    assert "usage: :explain on|off" in out
