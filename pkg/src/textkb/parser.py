"""Deterministic surface parser for the sentence subset the skimmer keeps.

One pass, no backtracking: a clause is a subject noun group, a verb group,
and a flat run of constituents (noun groups, prepositional phrases,
subordinate clauses).  Prepositional phrases are recorded in surface order
and left unattached; attachment is the interpreter's job.  Anything outside
the subset raises NoParse with a reason, and every input token is accounted
for: it lands in a noun group, the verb group, a PP, a subclause, or the
discard list.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

from .lexicon import Analysis, Lexicon, Pos

if TYPE_CHECKING:  # pragma: no cover
    from .ontology import Ontology

TOKEN_RE = re.compile(r"[A-Za-z][\w'-]*|\d+|[.,;:?!\"]")

# words that close off a noun group without opening anything nominal
BOUNDARY = {",", "and", "or", ".", ";", "such", "including"}

TEMPORAL_HEADS = {"day", "night", "week", "month", "year", "winter", "summer"}

RELPRONS = {"that", "which", "who"}

SUBCLAUSE_CONJ = {"when": "time", "because": "causality"}


def tokenize(text: str) -> list[str]:
    return TOKEN_RE.findall(text)


@dataclass
class Token:
    surface: str
    index: int
    readings: list[Analysis] = field(default_factory=list)

    @property
    def lower(self) -> str:
        return self.surface.lower()

    @property
    def capitalized(self) -> bool:
        return self.surface[:1].isupper()

    def has_pos(self, pos: Pos) -> bool:
        return any(a.entry.pos is pos for a in self.readings)

    def reading(self, pos: Pos) -> Optional[Analysis]:
        for a in self.readings:
            if a.entry.pos is pos:
                return a
        return None

    @property
    def nominal(self) -> bool:
        return self.has_pos(Pos.NOUN) or self.has_pos(Pos.ADJ)

    @property
    def is_word(self) -> bool:
        return self.surface[:1].isalpha()


@dataclass
class NPGroup:
    tokens: list[Token] = field(default_factory=list)  # item words only
    determiners: list[str] = field(default_factory=list)
    coordination: list["NPGroup"] = field(default_factory=list)
    enumeration: list["NPGroup"] = field(default_factory=list)
    relclause: Optional["ClauseParse"] = None
    rel_role: Optional[str] = None  # which gap the head fills in relclause
    quantity: Optional[tuple[str, str]] = None  # (number, unit)
    plural: bool = False
    proper: bool = False  # quoted or capitalized multiword name
    pronoun: Optional[str] = None

    @property
    def head(self) -> Optional[Token]:
        for tok in reversed(self.tokens):
            if tok.has_pos(Pos.NOUN):
                return tok
        return None

    def surface(self) -> str:
        if self.coordination:
            return " + ".join(m.surface() for m in self.coordination)
        if self.pronoun:
            return self.pronoun
        return " ".join(t.surface for t in self.tokens)

    def all_groups(self) -> list["NPGroup"]:
        out = [self]
        for m in self.coordination:
            out.extend(m.all_groups())
        for m in self.enumeration:
            out.extend(m.all_groups())
        return out


@dataclass
class PPItem:
    prep: str
    np: NPGroup
    after_verb: bool


@dataclass
class ClauseParse:
    verb: str = ""
    particle: Optional[str] = None
    subj: Optional[NPGroup] = None
    obj: Optional[NPGroup] = None
    io: Optional[NPGroup] = None
    pred: Optional[NPGroup] = None
    pred_adj: Optional[str] = None
    pps: list[PPItem] = field(default_factory=list)
    adverbs: list[str] = field(default_factory=list)
    subclauses: list[tuple[str, "ClauseParse"]] = field(default_factory=list)
    shared_subject: bool = False
    passive: bool = False
    hedged: bool = False
    freq_np: Optional[str] = None

    def nps(self) -> list[NPGroup]:
        out = []
        for np in (self.subj, self.obj, self.io, self.pred):
            if np is not None:
                out.extend(np.all_groups())
        for pp in self.pps:
            out.extend(pp.np.all_groups())
        return out

    def relclauses(self) -> list[tuple[NPGroup, "ClauseParse"]]:
        return [(np, np.relclause) for np in self.nps() if np.relclause is not None]


@dataclass
class ParseStructure:
    source: str
    clauses: list[ClauseParse] = field(default_factory=list)
    discarded: list[str] = field(default_factory=list)


class NoParse(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class Parser:
    def __init__(self, lexicon: Lexicon, onto: "Ontology"):
        self.lexicon = lexicon
        self.onto = onto

    # ------------------------------------------------------------ plumbing

    def parse(self, text: str, topic_class: Optional[str] = None) -> ParseStructure:
        words = tokenize(text)
        tokens = [Token(w, i, self.lexicon.analyze(w)) for i, w in enumerate(words)]
        self.tokens = tokens
        self.resolve_unknowns(tokens, topic_class)
        for t in tokens:
            if t.is_word and not t.readings:
                raise NoParse(f"unknown word: {t.surface}")
        self.pos = 0
        self.discarded: list[str] = []
        ps = ParseStructure(source=text, discarded=self.discarded)
        ps.clauses.append(self.parse_clause(shared=False))
        while not self.at_end():
            tok = self.peek()
            if tok.lower == "and":
                self.take()
                self.discarded.append("and")
                ps.clauses.append(self.parse_clause(shared=True))
            elif tok.surface == ".":
                self.take()
                self.discarded.append(".")
            else:
                raise NoParse(f"unexpected token: {tok.surface}")
        return ps

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self, ahead: int = 0) -> Optional[Token]:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    # ------------------------------------------------------ unknown policy

    def resolve_unknowns(self, tokens: list[Token], topic_class: Optional[str]) -> None:
        """Admit unknown words the policy covers, then re-analyze them.

        Coordination with known nouns hints a common superclass; an unknown
        capitalized word standing as its own noun group falls back to the
        topic class.  Everything else stays unknown and fails the parse.
        """
        unknowns = [t for t in tokens if t.is_word and not t.readings]
        if not unknowns:
            return
        runs = self._nominal_runs(tokens)
        for t in unknowns:
            hint = self._coordination_hint(t, runs, topic_class)
            if hint is None and t.capitalized and topic_class:
                run = next((r for r in runs if t in r), None)
                if run is not None and run[-1] is t:
                    hint = topic_class
            if hint is not None:
                try:
                    self.lexicon.add_provisional_noun(t.surface, hint, self.onto)
                except Exception:
                    continue
                t.readings = self.lexicon.analyze(t.surface)

    def _nominal_runs(self, tokens: list[Token]) -> list[list[Token]]:
        runs: list[list[Token]] = []
        cur: list[Token] = []
        for t in tokens:
            if t.is_word and (t.nominal or not t.readings) and not t.has_pos(Pos.DET):
                cur.append(t)
            else:
                if cur:
                    runs.append(cur)
                cur = []
        if cur:
            runs.append(cur)
        return runs

    def _coordination_hint(
        self, t: Token, runs: list[list[Token]], topic_class: Optional[str]
    ) -> Optional[str]:
        """Common strict superclass of known coordination siblings.

        A single known sibling therefore hints its parent class (robins
        hints bird, not robin).  A list whose members are all unknown
        falls back to the article's topic class.
        """
        idx = next((i for i, r in enumerate(runs) if t in r), None)
        if idx is None or runs[idx][-1] is not t:
            return None  # only the head position of a run is admitted
        in_list = False
        siblings = []
        for j, run in enumerate(runs):
            if j == idx:
                continue
            if not self._list_separated(runs, min(idx, j), max(idx, j)):
                continue
            in_list = True
            sense = self._first_noun_sense(run[-1])
            if sense:
                siblings.append(sense)
        if not siblings:
            return topic_class if in_list else None
        common = None
        for s in siblings:
            anc = self.onto.ancestors(s)
            common = anc if common is None else common & anc
        if not common:
            return None
        return max(common, key=lambda c: (self._depth(c), c))

    def _list_separated(self, runs: list[list[Token]], i: int, j: int) -> bool:
        """True when runs i and j sit in one comma/and list: every token
        between consecutive runs is a comma or a coordinating conjunction."""
        for k in range(i, j):
            end = runs[k][-1].index
            start = runs[k + 1][0].index
            between = [t.lower for t in self.tokens_between(end, start)]
            if not between or any(b not in (",", "and", "or") for b in between):
                return False
        return True

    def tokens_between(self, end: int, start: int) -> list[Token]:
        return [t for t in self.all_tokens if end < t.index < start]

    @property
    def all_tokens(self) -> list[Token]:
        return getattr(self, "tokens", [])

    def _first_noun_sense(self, tok: Token) -> Optional[str]:
        a = tok.reading(Pos.NOUN)
        if a and a.entry.senses:
            return a.entry.senses[0]
        return None

    def _depth(self, cid: str) -> int:
        seen = {}

        def d(c: str) -> int:
            if c in seen:
                return seen[c]
            parents = self.onto.concepts[c].parents
            seen[c] = 0 if not parents else 1 + max(d(p) for p in parents)
            return seen[c]

        return d(cid)

    # -------------------------------------------------------------- clause

    def parse_clause(self, shared: bool) -> ClauseParse:
        clause = ClauseParse(shared_subject=shared)
        if not shared:
            clause.subj = self.parse_np_coord()
            while not self.at_end() and self.peek().has_pos(Pos.PREP):
                prep = self.take().lower
                np = self.parse_np_coord()
                clause.pps.append(PPItem(prep, np, after_verb=False))
        self.parse_verb_group(clause)
        self.parse_constituents(clause)
        if clause.passive:
            if clause.obj is not None:
                raise NoParse("passive clause with an object")
            clause.obj = clause.subj
            clause.subj = None
        return clause

    def parse_verb_group(self, clause: ClauseParse) -> None:
        while not self.at_end() and self.peek().has_pos(Pos.ADV) and not self.peek().nominal:
            clause.adverbs.append(self.take().lower)
        tok = self.peek()
        if tok is None or not tok.has_pos(Pos.VERB):
            raise NoParse(f"expected a verb, got: {tok.surface if tok else 'end'}")
        analysis = tok.reading(Pos.VERB)
        self.take()
        lemma = analysis.entry.lemma
        if lemma == "have" and self._next_is_participle():
            self.discarded.append(tok.lower)
            self._parse_perfect(clause)
            return
        if lemma == "be":
            self._parse_copula_or_passive(clause, tok)
            return
        self._finish_verb(clause, analysis.entry)

    def _next_is_participle(self) -> bool:
        nxt = self.peek()
        if nxt is None:
            return False
        a = nxt.reading(Pos.VERB)
        return a is not None and a.infl in ("past", "pp")

    def _parse_perfect(self, clause: ClauseParse) -> None:
        # have been known to V  ->  hedged active V
        nxt = self.peek()
        a = nxt.reading(Pos.VERB)
        if a.entry.lemma == "be" and a.infl == "pp":
            self.take()
            self.discarded.append(nxt.lower)
            self._parse_copula_or_passive(clause, None)
            return
        # plain perfect: have eaten -> eat
        self.take()
        self._finish_verb(clause, a.entry)

    def _parse_copula_or_passive(self, clause: ClauseParse, be_tok: Optional[Token]) -> None:
        tok = self.peek()
        if tok is not None:
            a = tok.reading(Pos.VERB)
            if a is not None and a.infl in ("past", "pp"):
                if be_tok is not None:
                    self.discarded.append(be_tok.lower)
                if a.entry.lemma == "know" and self.peek(1) and self.peek(1).lower == "to":
                    # evidential idiom: (have) been known to V
                    self.take()
                    self.discarded.append(tok.lower)
                    to = self.take()
                    self.discarded.append(to.lower)
                    clause.hedged = True
                    verb_tok = self.peek()
                    if verb_tok is None or not verb_tok.has_pos(Pos.VERB):
                        raise NoParse("known to needs a verb")
                    self.take()
                    self._finish_verb(clause, verb_tok.reading(Pos.VERB).entry)
                    return
                self.take()
                clause.passive = True
                self._finish_verb(clause, a.entry)
                return
            if a is not None and a.infl == "ing":
                if be_tok is not None:
                    self.discarded.append(be_tok.lower)
                self.take()
                self._finish_verb(clause, a.entry)
                return
        clause.verb = "be"

    def _finish_verb(self, clause: ClauseParse, entry) -> None:
        clause.verb = entry.lemma
        nxt = self.peek()
        if nxt is not None and f"phrasal:{nxt.lower}" in entry.verb_frames:
            clause.particle = self.take().lower
        while not self.at_end() and self.peek().has_pos(Pos.ADV) and not self.peek().nominal:
            clause.adverbs.append(self.take().lower)

    # -------------------------------------------------------- constituents

    def parse_constituents(self, clause: ClauseParse, embedded: bool = False) -> None:
        while not self.at_end():
            tok = self.peek()
            low = tok.lower
            if tok.surface == ".":
                return
            if low == ",":
                nxt = self.peek(1)
                if nxt is not None and nxt.lower in ("and", "or", "such", "including"):
                    self.take()
                    self.discarded.append(",")
                    continue
                raise NoParse("stray comma")
            if low == "and":
                return  # clause coordination or list handled above us
            if low in SUBCLAUSE_CONJ:
                if embedded:
                    return
                self.take()
                self.discarded.append(low)
                sub = self.parse_clause(shared=False)
                clause.subclauses.append((SUBCLAUSE_CONJ[low], sub))
                continue
            if low == "to" and self._starts_verb(self.peek(1)):
                self.take()
                self.discarded.append("to")
                sub = ClauseParse(shared_subject=True)
                self.parse_verb_group(sub)
                self.parse_constituents(sub, embedded=True)
                clause.subclauses.append(("purpose", sub))
                continue
            if low == "by" and self._starts_ing(self.peek(1)):
                self.take()
                self.discarded.append("by")
                sub = ClauseParse(shared_subject=True)
                self.parse_verb_group(sub)
                self.parse_constituents(sub, embedded=True)
                clause.subclauses.append(("manner", sub))
                continue
            if tok.has_pos(Pos.PREP):
                self.take()
                np = self.parse_np_coord()
                clause.pps.append(PPItem(low, np, after_verb=True))
                continue
            if tok.has_pos(Pos.ADV) and not tok.nominal:
                self.take()
                clause.adverbs.append(low)
                continue
            if (
                clause.verb == "be"
                and clause.pred is None
                and clause.pred_adj is None
                and tok.has_pos(Pos.ADJ)
                and not tok.has_pos(Pos.NOUN)
                and (self.peek(1) is None or not self.peek(1).nominal)
            ):
                self.take()
                clause.pred_adj = tok.reading(Pos.ADJ).entry.lemma
                continue
            if self._starts_np(tok):
                self._place_np(clause)
                continue
            if tok.has_pos(Pos.VERB):
                if embedded:
                    return  # the matrix clause's verb
                raise NoParse(f"second verb in clause: {tok.surface}")
            raise NoParse(f"unexpected token: {tok.surface}")

    def _starts_verb(self, tok: Optional[Token]) -> bool:
        return tok is not None and tok.has_pos(Pos.VERB)

    def _starts_ing(self, tok: Optional[Token]) -> bool:
        if tok is None:
            return False
        a = tok.reading(Pos.VERB)
        return a is not None and a.infl == "ing"

    def _starts_np(self, tok: Token) -> bool:
        return (
            tok.surface == '"'
            or tok.nominal
            or tok.has_pos(Pos.DET)
            or tok.has_pos(Pos.PRON)
            or tok.surface.isdigit()
        )

    def _place_np(self, clause: ClauseParse) -> None:
        np = self.parse_np_coord()
        if clause.verb == "be" and clause.pred is None and clause.pred_adj is None:
            clause.pred = np
            return
        if clause.obj is None:
            clause.obj = np
            return
        head = np.head
        if (
            clause.io is None
            and head is not None
            and head.reading(Pos.NOUN).entry.lemma in TEMPORAL_HEADS
        ):
            clause.freq_np = head.reading(Pos.NOUN).entry.lemma
            self.discarded.extend(np.determiners)
            self.discarded.extend(t.surface for t in np.tokens)
            return
        if clause.io is None:
            clause.io = clause.obj
            clause.obj = np
            return
        raise NoParse("too many noun groups")

    # ------------------------------------------------------------------ NP

    def parse_np_coord(self) -> NPGroup:
        members = [self.parse_np()]
        while not self.at_end():
            tok = self.peek()
            if (
                tok.lower == ","
                and self.peek(1) is not None
                and self.peek(1).lower in ("and", "or")
                and self._member_follows(2)
            ):
                self.take()
                self.discarded.append(",")
                conj = self.take()
                self.discarded.append(conj.lower)
                members.append(self.parse_np())
            elif tok.lower == "," and self._member_follows(1):
                self.take()
                self.discarded.append(",")
                members.append(self.parse_np())
            elif tok.lower in ("and", "or") and self._member_follows(1):
                self.take()
                self.discarded.append(tok.lower)
                members.append(self.parse_np())
            else:
                break
        if len(members) == 1:
            np = members[0]
        else:
            np = NPGroup(coordination=members)
        self._maybe_enumeration(np)
        return np

    def _member_follows(self, ahead: int) -> bool:
        tok = self.peek(ahead)
        if tok is None or not self._starts_np(tok):
            return False
        if tok.has_pos(Pos.VERB) and not self._noun_preferred(tok, self.pos + ahead):
            return False
        return True

    def _maybe_enumeration(self, np: NPGroup) -> None:
        tok = self.peek()
        if (
            tok is not None
            and tok.surface == ","
            and self.peek(1) is not None
            and self.peek(1).lower in ("such", "including")
        ):
            self.take()
            self.discarded.append(",")
            tok = self.peek()
        if tok is None:
            return
        if tok.lower == "such" and self.peek(1) is not None and self.peek(1).lower == "as":
            self.take()
            self.take()
            self.discarded.extend(["such", "as"])
        elif tok.lower == "including":
            self.take()
            self.discarded.append("including")
        else:
            return
        inner = self.parse_np_coord()
        np.enumeration = inner.coordination if inner.coordination else [inner]

    def _noun_preferred(self, tok: Token, at: int) -> bool:
        """For noun/verb ambiguous words: noun unless what follows rules a
        noun group out (e.g. "owls fish in creeks")."""
        if not tok.has_pos(Pos.NOUN):
            return False
        if not tok.has_pos(Pos.VERB):
            return True
        nxt = self.tokens[at + 1] if at + 1 < len(self.tokens) else None
        if nxt is None:
            return True
        return nxt.nominal or nxt.lower in BOUNDARY

    def parse_np(self) -> NPGroup:
        np = NPGroup()
        tok = self.peek()
        if tok is not None and tok.surface == '"':
            return self._parse_quoted()
        if tok is not None and tok.has_pos(Pos.PRON):
            self.take()
            np.pronoun = tok.reading(Pos.PRON).entry.lemma
            return np
        while not self.at_end() and self.peek().has_pos(Pos.DET):
            np.determiners.append(self.take().lower)
        tok = self.peek()
        if tok is not None and tok.surface.isdigit():
            return self._parse_measure(np)
        while not self.at_end():
            tok = self.peek()
            if (
                tok.surface == ","
                and np.head is None
                and np.tokens
                and self.peek(1) is not None
                and self.peek(1).nominal
            ):
                # comma inside a premodifier list: "long, curved claws"
                self.take()
                self.discarded.append(",")
                continue
            if not tok.is_word or not tok.nominal or tok.has_pos(Pos.DET):
                break
            if (
                tok.has_pos(Pos.VERB)
                and tok.has_pos(Pos.NOUN)
                and not self._noun_preferred(tok, self.pos)
            ):
                break
            np.tokens.append(self.take())
        if np.head is None:
            got = np.tokens[-1].surface if np.tokens else (tok.surface if tok else "end")
            raise NoParse(f"noun group without a noun head: {got}")
        head_analysis = np.head.reading(Pos.NOUN)
        np.plural = head_analysis.infl == "pl"
        if len(np.tokens) >= 2 and all(t.capitalized for t in np.tokens):
            if np.tokens[0].index > 0:
                np.proper = True
        self._maybe_relclause(np)
        return np

    def _parse_quoted(self) -> NPGroup:
        self.take()
        self.discarded.append('"')
        np = NPGroup(proper=True)
        while not self.at_end() and self.peek().surface != '"':
            np.tokens.append(self.take())
        if self.at_end():
            raise NoParse("unterminated quote")
        self.take()
        self.discarded.append('"')
        if np.head is None:
            raise NoParse("quoted name without a noun")
        return np

    def _parse_measure(self, np: NPGroup) -> NPGroup:
        number = self.take()
        unit = self.peek()
        of = self.peek(1)
        if unit is None or not unit.has_pos(Pos.NOUN) or of is None or of.lower != "of":
            raise NoParse(f"unsupported number: {number.surface}")
        self.take()
        self.take()
        self.discarded.append("of")
        inner = self.parse_np()
        inner.quantity = (number.surface, unit.reading(Pos.NOUN).entry.lemma)
        inner.determiners = np.determiners + inner.determiners
        return inner

    def _maybe_relclause(self, np: NPGroup) -> None:
        tok = self.peek()
        if tok is None or tok.lower not in RELPRONS:
            return
        self.take()
        self.discarded.append(tok.lower)
        nxt = self.peek()
        sub = ClauseParse(shared_subject=False)
        if nxt is not None and nxt.has_pos(Pos.VERB) and not self._noun_preferred(nxt, self.pos):
            np.rel_role = "subj"
            self.parse_verb_group(sub)
            self.parse_constituents(sub, embedded=True)
        else:
            np.rel_role = "obj"
            sub.subj = self.parse_np_coord()
            self.parse_verb_group(sub)
            self.parse_constituents(sub, embedded=True)
        np.relclause = sub
