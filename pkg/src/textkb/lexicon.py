"""Word store: entries, inflectional analysis, provisional nouns.

Entries live in a tab-separated file, one surface form per line.  Irregular
forms (ate, mice, been) are ordinary lines whose lemma differs from the
word, tagged with the inflection they carry.  Regular inflection is
recovered by suffix stripping at lookup time; lookup itself never mutates
the store.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:  # pragma: no cover
    from .ontology import Ontology


class Pos(Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJ = "adj"
    ADV = "adv"
    PREP = "prep"
    DET = "det"
    CONJ = "conj"
    PRON = "pron"
    NUM = "num"


@dataclass(frozen=True)
class LexEntry:
    word: str
    pos: Pos
    lemma: str
    senses: tuple[str, ...] = ()  # concept ids, preference order
    verb_frames: tuple[str, ...] = ()
    tag: str = ""  # inflection this surface form carries ("" for base forms)
    provisional: bool = False


@dataclass(frozen=True)
class Analysis:
    entry: LexEntry
    infl: str  # "", "pl", "3sg", "past", "pp", "ing"


class LexiconError(Exception):
    pass


def _strip_candidates(w: str) -> list[tuple[str, str]]:
    """Regular de-suffixing: (base candidate, generic tag).  The generic "s"
    tag becomes pl or 3sg depending on the part of speech that matches."""
    out: list[tuple[str, str]] = []
    if w.endswith("ies") and len(w) > 4:
        out.append((w[:-3] + "y", "s"))
    if w.endswith("es") and len(w) > 3:
        out.append((w[:-2], "s"))
    if w.endswith("s") and not w.endswith("ss") and len(w) > 2:
        out.append((w[:-1], "s"))
    if w.endswith("ed") and len(w) > 3:
        out.append((w[:-2], "past"))
        out.append((w[:-1], "past"))
        if len(w) > 4 and w[-3] == w[-4]:
            out.append((w[:-3], "past"))
    if w.endswith("ing") and len(w) > 4:
        out.append((w[:-3], "ing"))
        out.append((w[:-3] + "e", "ing"))
        if len(w) > 5 and w[-4] == w[-5]:
            out.append((w[:-4], "ing"))
    return out


def regular_singular(w: str) -> str:
    """Best-effort lemma for an unknown plural-looking noun."""
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith(("xes", "ches", "shes", "sses", "zes")) and len(w) > 4:
        return w[:-2]
    if w.endswith("s") and not w.endswith("ss") and len(w) > 2:
        return w[:-1]
    return w


class Lexicon:
    def __init__(self):
        self.entries: dict[str, list[LexEntry]] = {}

    def add(self, entry: LexEntry) -> None:
        self.entries.setdefault(entry.word, []).append(entry)

    def analyze(self, word: str) -> list[Analysis]:
        """All readings of a surface form, exact entries first."""
        w = word.lower()
        out: list[Analysis] = []
        for e in self.entries.get(w, []):
            out.append(Analysis(e, e.tag))
        for base, tag in _strip_candidates(w):
            for e in self.entries.get(base, []):
                if e.tag:
                    continue  # do not inflect an already inflected form
                if tag == "s":
                    if e.pos is Pos.NOUN:
                        out.append(Analysis(e, "pl"))
                    elif e.pos is Pos.VERB:
                        out.append(Analysis(e, "3sg"))
                elif tag in ("past", "ing") and e.pos is Pos.VERB:
                    out.append(Analysis(e, tag))
        seen = set()
        unique = []
        for a in out:
            key = (a.entry.word, a.entry.pos, a.entry.lemma, a.infl)
            if key not in seen:
                seen.add(key)
                unique.append(a)
        return unique

    def lookup(self, word: str) -> list[LexEntry]:
        out = []
        seen = set()
        for a in self.analyze(word):
            key = (a.entry.word, a.entry.pos, a.entry.lemma)
            if key not in seen:
                seen.add(key)
                out.append(a.entry)
        return out

    def known(self, word: str) -> bool:
        return bool(self.analyze(word))

    # --------------------------------------------------- provisional nouns

    def add_provisional_noun(
        self, word: str, parent_hint: str, onto: "Ontology"
    ) -> LexEntry:
        """Admit an unknown word as a noun naming a fresh primitive concept
        under `parent_hint`."""
        w = word.lower()
        if self.known(w):
            raise LexiconError(f"already known: {word}")
        lemma = regular_singular(w)
        if lemma in onto:
            concept = lemma
        else:
            concept = onto.add_concept(lemma, parents=[parent_hint])
        entry = LexEntry(lemma, Pos.NOUN, lemma, senses=(concept,), provisional=True)
        self.add(entry)
        return entry

    def alias_noun(self, word: str, concept: str) -> Optional[LexEntry]:
        """Point a bare surface word at an existing concept (skimmer aliases).
        No-op when the word already has a reading."""
        w = word.lower()
        if self.known(w):
            return None
        entry = LexEntry(w, Pos.NOUN, w, senses=(concept,), provisional=True)
        self.add(entry)
        return entry

    # ------------------------------------------------------------- file io

    def save(self, path: str | Path) -> None:
        lines = []
        for word in sorted(self.entries):
            for e in sorted(self.entries[word], key=lambda e: (e.pos.value, e.lemma)):
                extras = [f"senses={','.join(e.senses)}"]
                if e.verb_frames:
                    extras.append(f"frames={','.join(e.verb_frames)}")
                if e.tag:
                    extras.append(f"tag={e.tag}")
                lines.append(f"{e.word}\t{e.pos.value}\t{e.lemma}\t{';'.join(extras)}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        lex = cls()
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.rstrip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise LexiconError(f"{path}:{lineno}: expected 4 tab-separated fields")
            word, pos, lemma, extras = parts
            senses: tuple[str, ...] = ()
            frames: tuple[str, ...] = ()
            tag = ""
            for item in extras.split(";"):
                if not item:
                    continue
                key, _, value = item.partition("=")
                values = tuple(v for v in value.split(",") if v)
                if key == "senses":
                    senses = values
                elif key == "frames":
                    frames = values
                elif key == "tag":
                    tag = value
                else:
                    raise LexiconError(f"{path}:{lineno}: unknown field {key}")
            lex.add(LexEntry(word, Pos(pos), lemma, senses, frames, tag))
        return lex
