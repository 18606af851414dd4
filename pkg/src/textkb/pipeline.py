"""Reading sessions: load the data files, skim articles, and push each
selected sentence through parse → interpret → form → integrate → infer.

A session owns one knowledge store and one lexicon.  Articles feed both:
the skimmer's naming scan admits words and concepts, reading asserts
instances, and inference derives follow-on facts which integrate like
anything read directly.  The store is verified after every sentence, so
a malformed ingest fails at its source instead of corrupting later work.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from . import kbio
from .formation import form_sentence
from .inference import infer
from .integration import integrate
from .interpreter import Interpreter, load_meaning_rules
from .lexicon import Lexicon, Pos
from .noun_group import PairTable
from .parser import NoParse, Parser
from .qa import QuestionAnswerer
from .skimmer import TopicSpec, skim
from .verbal_concepts import VerbalConcepts

DATA_DIR_ENV = "TEXTKB_DATA"

DATA_FILES = {
    "ontology": "ontology.txt",
    "lexicon": "lexicon.tsv",
    "vconcepts": "vconcepts.txt",
    "pairschema": "pairschema.txt",
    "vmrules": "vmrules.txt",
}


class IntegrityError(Exception):
    """The store failed verification after an ingest."""


def default_data_dir() -> Path:
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("textkb").joinpath("data")))


def bundled_corpus() -> list[Path]:
    return sorted(default_data_dir().joinpath("corpus").glob("*.txt"))


@dataclass
class ArticleStats:
    title: str
    sentences: int = 0
    selected: int = 0
    parsed: int = 0
    interpreted: int = 0
    integrated: int = 0  # instances created in the store
    inferred: int = 0  # derivations produced (before duplicate folding)
    failures: list[str] = field(default_factory=list)


class Session:
    def __init__(self, data_dir: Optional[str | Path] = None, topic: str = "diet"):
        base = Path(data_dir) if data_dir is not None else default_data_dir()
        self.onto = kbio.load(base / DATA_FILES["ontology"])
        self.lexicon = Lexicon.load(base / DATA_FILES["lexicon"])
        self.vcs = VerbalConcepts.load(base / DATA_FILES["vconcepts"], self.onto)
        self.pairs = PairTable.load(base / DATA_FILES["pairschema"], self.onto)
        self.rules = load_meaning_rules(
            base / DATA_FILES["vmrules"], self.vcs, self.onto
        )
        self.topic = TopicSpec.load(base / f"topic-{topic}.txt")
        self.parser = Parser(self.lexicon, self.onto)
        self.interpreter = Interpreter(
            self.onto, self.lexicon, self.vcs, self.pairs, self.rules
        )
        self.answerer = QuestionAnswerer(self.onto, self.interpreter)

    # ------------------------------------------------------------ reading

    def read_article(self, text: str, verify: bool = True) -> ArticleStats:
        report = skim(text, self.topic, self.lexicon, self.onto)
        stats = ArticleStats(report.article.title)
        stats.sentences = len(report.article.sentences)
        stats.selected = len(report.selected)
        topic_class = self._title_class(report.article.title)
        for sentence in report.selected:
            self._read_sentence(sentence, topic_class, stats, verify)
        return stats

    def read_file(self, path: str | Path, verify: bool = True) -> ArticleStats:
        return self.read_article(
            Path(path).read_text(encoding="utf-8"), verify=verify
        )

    def read_corpus(self, verify: bool = True) -> list[ArticleStats]:
        return [self.read_file(p, verify=verify) for p in bundled_corpus()]

    def _read_sentence(
        self, sentence: str, topic_class: Optional[str], stats: ArticleStats, verify: bool
    ) -> None:
        try:
            parse = self.parser.parse(sentence, topic_class=topic_class)
        except NoParse as exc:
            stats.failures.append(f"{sentence} [{exc}]")
            return
        stats.parsed += 1
        meaning = self.interpreter.interpret(parse)
        if meaning.failures or not meaning.clauses:
            stats.failures.extend(f"{sentence} [{f}]" for f in meaning.failures)
            return
        stats.interpreted += 1
        formed = form_sentence(self.onto, meaning)
        report = integrate(self.onto, formed.astructs, formed.statements)
        stats.integrated += len(report.created)
        derived = infer(self.onto, self.vcs, report.kept)
        stats.inferred += len(derived)
        second = integrate(self.onto, derived)
        stats.integrated += len(second.created)
        if verify:
            problems = self.onto.check()
            if problems:
                raise IntegrityError(f"{sentence}: {'; '.join(problems)}")

    def _title_class(self, title: str) -> Optional[str]:
        words = title.split()
        if len(words) != 1:
            return None
        for analysis in self.lexicon.analyze(words[0]):
            if analysis.entry.pos is Pos.NOUN and analysis.entry.senses:
                return analysis.entry.senses[0]
        return None

    # ---------------------------------------------------------- questions

    def ask(self, question: str) -> str:
        return self.answerer.ask(question)

    # ------------------------------------------------------- store access

    def dump(self) -> str:
        return kbio.dumps(self.onto)

    def check(self) -> list[str]:
        return self.onto.check()

    def save(self, path: str | Path) -> None:
        """Store dump plus the lexicon grown while reading (side file)."""
        kbio.dump(self.onto, path)
        self.lexicon.save(lexicon_sidecar(path))

    def load_store(self, path: str | Path) -> None:
        self.onto = kbio.load(path)
        sidecar = lexicon_sidecar(path)
        if sidecar.exists():
            self.lexicon = Lexicon.load(sidecar)
            self.parser = Parser(self.lexicon, self.onto)
        self.interpreter = Interpreter(
            self.onto, self.lexicon, self.vcs, self.pairs, self.rules
        )
        self.answerer = QuestionAnswerer(self.onto, self.interpreter)


def lexicon_sidecar(path: str | Path) -> Path:
    return Path(str(path) + ".lex")
