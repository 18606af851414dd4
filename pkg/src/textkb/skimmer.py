"""Article skimming: choosing what to read closely, and names learned
in passing.

An article is a title line followed by prose whose lines wrap
mid-sentence.  Skimming reflows the prose, splits it into sentences, and
keeps the sentences worth careful reading: those mentioning the topic's
vocabulary (by surface form or lemma) or matching one of its patterns.

Every sentence — kept or not — is first scanned for naming patterns, so
that a name introduced in a sentence about one thing is available when a
later sentence uses it:

* ``The grizzly is a bear.`` admits the unknown word as a noun for a new
  kind of the named class.
* ``vampire bats`` / ``curved claws``: a modifier that carries no meaning
  of its own (an unknown word, or an adjective with no concept behind it)
  followed by a known noun names a new kind of that noun.  When the
  modifier was a wholly unknown word, the bare word is also admitted as a
  noun for the new kind, so ``Makos feed ...`` reads back to the mako
  shark.

Interrogative lead-ins (``How penguins eat ...``) are never mistaken for
modifiers; such sentences are left to fail honestly downstream, since the
grammar covers declarative statements only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .lexicon import Lexicon, Pos
from .ontology import Ontology
from .parser import tokenize

_QUESTION_WORDS = frozenset(
    ["how", "what", "when", "where", "which", "who", "whom", "whose", "why"]
)
_ABBREVIATIONS = frozenset(["dr.", "e.g.", "etc.", "i.e.", "mr.", "mrs.", "ms.", "vs."])
_SENTENCE_END = re.compile(r"(?<=[.!?])\s+(?=[\"A-Z0-9])")


@dataclass(frozen=True)
class Article:
    title: str
    sentences: tuple[str, ...]


def split_sentences(prose: str) -> list[str]:
    """Reflow wrapped lines and cut at sentence boundaries."""
    flowed = " ".join(prose.split())
    out: list[str] = []
    start = 0
    for boundary in _SENTENCE_END.finditer(flowed):
        candidate = flowed[start : boundary.start()]
        last_word = candidate.rsplit(None, 1)[-1].lower()
        if last_word in _ABBREVIATIONS or re.fullmatch(r"[a-z]\.", last_word):
            continue  # an abbreviation's period does not end the sentence
        out.append(candidate)
        start = boundary.end()
    tail = flowed[start:].strip()
    if tail:
        out.append(tail)
    return out


def read_article(text: str) -> Article:
    title, _, body = text.strip().partition("\n")
    return Article(title.strip(), tuple(split_sentences(body)))


@dataclass(frozen=True)
class TopicSpec:
    keywords: frozenset[str]
    patterns: tuple[re.Pattern[str], ...]

    @classmethod
    def load(cls, path: str | Path) -> "TopicSpec":
        keywords: set[str] = set()
        patterns: list[re.Pattern[str]] = []
        for lineno, raw in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), 1
        ):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            kind, _, rest = line.partition(" ")
            rest = rest.strip()
            if kind == "keyword" and rest:
                keywords.add(rest.lower())
            elif kind == "pattern" and rest:
                patterns.append(re.compile(rest, re.IGNORECASE))
            else:
                raise ValueError(f"{path}:{lineno}: expected 'keyword ...' or 'pattern ...'")
        return cls(frozenset(keywords), tuple(patterns))

    def selects(self, sentence: str, lexicon: Lexicon) -> bool:
        for word in tokenize(sentence):
            lowered = word.lower()
            if lowered in self.keywords:
                return True
            if any(a.entry.lemma in self.keywords for a in lexicon.analyze(lowered)):
                return True
        return any(p.search(sentence) for p in self.patterns)


@dataclass
class SkimReport:
    article: Article
    selected: list[str]
    learned: list[tuple[str, str]]  # (new concept, its parent)


def skim(text: str, topic: TopicSpec, lexicon: Lexicon, onto: Ontology) -> SkimReport:
    article = read_article(text)
    selected: list[str] = []
    learned: list[tuple[str, str]] = []
    for sentence in article.sentences:
        learned.extend(prescan(sentence, lexicon, onto))
        if topic.selects(sentence, lexicon):
            selected.append(sentence)
    return SkimReport(article, selected, learned)


# ------------------------------------------------------------ naming scan


def prescan(sentence: str, lexicon: Lexicon, onto: Ontology) -> list[tuple[str, str]]:
    """Admit names coined by the sentence; returns (concept, parent) pairs."""
    words = tokenize(sentence)
    learned = _scan_naming_copula(words, lexicon, onto)
    for position, (mod, head) in enumerate(zip(words, words[1:])):
        if not _names_a_kind(mod, position, lexicon):
            continue
        noun = _known_noun(head, lexicon)
        if noun is None:
            continue
        parent = noun.senses[0]
        compound = f"{mod.lower()}-{noun.lemma}"
        if compound not in onto:
            onto.add_concept(compound, parents=[parent])
            learned.append((compound, parent))
        lexicon.alias_noun(compound, compound)
        if not lexicon.known(mod):
            lexicon.alias_noun(mod, compound)
    return learned


def _scan_naming_copula(
    words: list[str], lexicon: Lexicon, onto: Ontology
) -> list[tuple[str, str]]:
    """``[The] <unknown> is/are [a] <known noun> .`` names a new kind."""
    rest = [w for w in words if w != "."]
    if rest and rest[0].lower() in ("the", "a", "an"):
        rest = rest[1:]
    if len(rest) == 4 and rest[2].lower() in ("a", "an"):
        del rest[2]
    if len(rest) != 3 or rest[1].lower() not in ("is", "are"):
        return []
    subject, _, predicate = rest
    if lexicon.known(subject):
        return []
    noun = _known_noun(predicate, lexicon)
    if noun is None:
        return []
    entry = lexicon.add_provisional_noun(subject, noun.senses[0], onto)
    return [(entry.senses[0], noun.senses[0])]


def _names_a_kind(word: str, position: int, lexicon: Lexicon) -> bool:
    """Could this word be the modifier half of a coined compound?"""
    if not word.isalpha() or word.lower() in _QUESTION_WORDS:
        return False
    if word[:1].isupper() and position > 0:
        return False  # a proper name mid-sentence, not a modifier
    readings = lexicon.analyze(word)
    if not readings:
        return True  # wholly unknown: the compound is its introduction
    return all(
        a.entry.pos is Pos.ADJ and not a.entry.senses for a in readings
    )  # an empty adjective contributes nothing but the name


def _known_noun(word: str, lexicon: Lexicon):
    for analysis in lexicon.analyze(word):
        entry = analysis.entry
        if entry.pos is Pos.NOUN and entry.senses:
            return entry
    return None
