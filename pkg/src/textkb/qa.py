"""Question answering over the knowledge store, with explanation chains.

Questions are matched against a fixed set of templates; the noun phrases
inside them go through the same noun-group machinery used while reading,
so "insect eaters" or "cactus dwellers" become defined concepts that the
classifier places on demand.  Answers come from classification-based
reasoning: walk the concepts under the question's subject, read their
indexed slots, and report the facts with a chain of is-a and slot steps
that a verifier can replay against the store.

"Most" questions are answered by the quantifier recorded on the fact's
actor, never by counting: the store holds generic statements, not
individuals.

Yes/no questions distinguish "no" from "I don't know": a fact whose
relation-level quantifier sits below the existential (rarely) is
counterevidence, and the weak fact is shown instead of a bare denial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .interpreter import Interpreter
from .lexicon import Pos
from .noun_group import NGItem, interpret_noun_group
from .ontology import AStructure, Ontology, Quantifier, sort_key
from .parser import tokenize

CANNOT_PARSE = "I can't parse that question."
DONT_KNOW = "I don't know"

_MOST_RANK = Quantifier.proportion("most").rank()
_ASSERTED_RANK = Quantifier.existential().rank()
_DETERMINERS = frozenset(["a", "an", "the"])

QUERY_KINDS = (
    "what-rel",
    "which",
    "yesno",
    "kinds-of",
    "what-is",
    "who-rel-inverse",
    "when",
    "how",
    "how-much",
)


class UnparsedQuestion(Exception):
    pass


@dataclass(frozen=True)
class Query:
    kind: str
    subject: Optional[str] = None  # concept id
    relation: Optional[str] = None
    object: Optional[str] = None  # concept id, None = unconstrained
    most: bool = False


@dataclass
class Answer:
    lines: list[str] = field(default_factory=list)
    chain: list[tuple] = field(default_factory=list)  # replayable steps

    @property
    def text(self) -> str:
        return "\n".join(self.lines) if self.lines else DONT_KNOW

    @property
    def summary(self) -> str:
        """The facts without their because-chains."""
        kept = [
            line.split(" because", 1)[0]
            for line in self.lines
            if not line.startswith("  ")
        ]
        return "\n".join(kept) if kept else DONT_KNOW


def verify_chain(onto: Ontology, answer: Answer) -> bool:
    """Replay every explanation step against the store."""
    for step in answer.chain:
        if step[0] == "is-a":
            if not onto.is_subclass(step[1], step[2]):
                return False
        elif step[0] == "slot":
            _, cid, relation, filler = step
            if not any(e.filler == filler for e in onto.slot_entries(cid, relation)):
                return False
        else:
            return False
    return True


# ---------------------------------------------------------------- rendering


def render_concept(onto: Ontology, cid: str) -> str:
    """Primitives by id; defined concepts by their structure."""
    c = onto.concept(cid)
    if c.cf is None:
        return cid
    parts = [render_concept(onto, c.cf.genus), "which"]
    for r in c.cf.restrictions:
        parts.append(r.relation)
        parts.append(render_concept(onto, r.filler))
    return "<" + " ".join(parts) + ">"


def render_fact_line(
    onto: Ontology, subject: str, relation: str, fillers: list[str]
) -> str:
    rendered = " ".join(render_concept(onto, f) for f in fillers)
    return f"{render_concept(onto, subject)} {relation} {rendered}"


def render_modifiers(onto: Ontology, astr: AStructure) -> str:
    """Fixed-order modifier suffix so answers diff exactly."""
    out = []
    mods = astr.modifiers
    if "quantity" in mods:
        out.append("quantity " + mods["quantity"].replace(":", " "))
    if "frequency" in mods:
        out.append(f"*frequency* {mods['frequency']}")
    if "time" in mods:
        out.append(f"at-time {render_concept(onto, mods['time'])}")
    if "location" in mods:
        out.append(f"at-loc {render_concept(onto, mods['location'])}")
    for key in ("purpose", "manner", "causality"):
        value = mods.get(key)
        if value is not None and value.startswith("@A"):
            linked = onto.astructs[value]
            out.append("<related-to> " + render_astr(onto, linked, star=True))
    return " ".join(out)


def render_astr(onto: Ontology, astr: AStructure, star: bool = False) -> str:
    anchor = astr.anchor()
    relation = f"*{astr.relation}*" if star else astr.relation
    fillers = [b.concept for b in astr.bindings if b is not anchor]
    subject = render_concept(onto, anchor.concept) if anchor else "?"
    body = " ".join([subject, relation] + [render_concept(onto, f) for f in fillers])
    suffix = render_modifiers(onto, astr)
    return f"{body} {suffix}" if suffix else body


# ------------------------------------------------------------ fact lookup


@dataclass(frozen=True)
class Fact:
    subject: str
    relation: str
    filler: str
    quant: Quantifier  # the slot's relation-level quantifier
    supports: tuple[AStructure, ...]  # oldest first


def _astr_number(astr: AStructure) -> int:
    return int(astr.id.lstrip("@A"))


class QuestionAnswerer:
    def __init__(self, onto: Ontology, interpreter: Interpreter):
        self.onto = onto
        self.interp = interpreter
        self.lexicon = interpreter.lexicon

    # ---------------------------------------------------------- frontend

    def ask(self, text: str, explain: bool = True) -> str:
        try:
            query = self.parse_question(text)
        except UnparsedQuestion:
            return CANNOT_PARSE
        answer = self.answer(query)
        return answer.text if explain else answer.summary

    # ---------------------------------------------------- question parse

    def parse_question(self, text: str) -> Query:
        words = [w.lower() for w in tokenize(text) if w.isalnum()]
        if not words:
            raise UnparsedQuestion(text)
        head = words[0]
        if head == "what" and len(words) > 2 and words[1] in ("kind", "kinds"):
            if words[2] != "of" or words[-2:] != ["are", "there"]:
                raise UnparsedQuestion(text)
            return Query("kinds-of", subject=self._concept(words[3:-2]))
        if head == "what" and len(words) > 1 and words[1] in ("is", "are"):
            return Query("what-is", subject=self._concept(words[2:]))
        if head == "how" and len(words) > 2 and words[1] in ("much", "many"):
            return self._how_much(words[2:], text)
        if head in ("how", "when") and len(words) > 1 and words[1] in ("do", "does"):
            subject, relation, object_, most, _ = self._clause(words[2:], text)
            return Query(head, subject, relation, object_, most)
        if head in ("what", "who") and len(words) > 1:
            if words[1] in ("do", "does"):
                subject, relation, object_, most, _ = self._clause(words[2:], text)
                if object_ is not None:
                    raise UnparsedQuestion(text)
                return Query("what-rel", subject, relation, most=most)
            if self._verb_lemma(words[1]):
                verb = self._verb_lemma(words[1])
                object_ = self._concept(words[2:])
                meaning = self.interp.meaning_of_verb(verb, obj=object_)
                if meaning is None:
                    raise UnparsedQuestion(text)
                return Query("who-rel-inverse", relation=meaning[1], object=object_)
        if head == "which":
            subject, relation, object_, most, _ = self._clause(words[1:], text)
            if object_ is None:
                raise UnparsedQuestion(text)
            return Query("which", subject, relation, object_, most)
        if head in ("do", "does"):
            subject, relation, object_, most, folded = self._clause(words[1:], text)
            if folded:
                object_ = None  # the object named the relation, not a filter
            return Query("yesno", subject, relation, object_, most)
        raise UnparsedQuestion(text)

    def _how_much(self, words: list[str], text: str) -> Query:
        for i, w in enumerate(words):
            if w in ("do", "does"):
                object_ = self._concept(words[:i])
                subject, relation, tail, most, _ = self._clause(
                    words[i + 1 :], text, object_hint=object_
                )
                return Query("how-much", subject, relation, object_, most)
        raise UnparsedQuestion(text)

    def _clause(
        self,
        words: list[str],
        text: str,
        object_hint: Optional[str] = None,
    ) -> tuple[str, str, Optional[str], bool, bool]:
        """subject concept, relation, object concept, most-flag, obj-folded."""
        most = bool(words) and words[0] == "most"
        if most:
            words = words[1:]
        for i, w in enumerate(words):
            if i == 0:
                continue
            verb = self._verb_lemma(w)
            if verb is None:
                continue
            subject = self._concept(words[:i])
            tail = words[i + 1 :]
            if tail and self._is_prep(tail[0]):
                tail = tail[1:]
            object_ = self._concept(tail) if tail else object_hint
            meaning = self.interp.meaning_of_verb(verb, subj=subject, obj=object_)
            if meaning is None:
                raise UnparsedQuestion(text)
            _, relation, folded = meaning
            return subject, relation, object_, most, folded
        raise UnparsedQuestion(text)

    def _verb_lemma(self, word: str) -> Optional[str]:
        for a in self.lexicon.analyze(word):
            if a.entry.pos is Pos.VERB:
                return a.entry.lemma
        return None

    def _is_prep(self, word: str) -> bool:
        return any(a.entry.pos is Pos.PREP for a in self.lexicon.analyze(word))

    def _concept(self, words: list[str]) -> str:
        """Resolve a bare noun phrase, classifying new defined concepts."""
        words = [w for w in words if w not in _DETERMINERS]
        if not words:
            raise UnparsedQuestion(" ".join(words))
        items = []
        for w in words:
            analyses = self.lexicon.analyze(w)
            best = next(
                (a for a in analyses if a.entry.pos is Pos.NOUN), None
            ) or next((a for a in analyses if a.entry.pos is Pos.ADJ), None)
            if best is None:
                raise UnparsedQuestion(w)
            senses = best.entry.senses
            items.append(NGItem(best.entry.lemma, senses[0] if senses else None))
        candidates = interpret_noun_group(items, self.onto, self.interp.pairs)
        return candidates[0]

    # ------------------------------------------------------------ answers

    def answer(self, query: Query) -> Answer:
        handler = {
            "what-rel": self._answer_what_rel,
            "which": self._answer_which,
            "yesno": self._answer_yesno,
            "kinds-of": self._answer_kinds_of,
            "what-is": self._answer_what_is,
            "who-rel-inverse": self._answer_inverse,
            "when": self._answer_when,
            "how": self._answer_how,
            "how-much": self._answer_how_much,
        }[query.kind]
        return handler(query)

    # -- shared machinery

    def _subclasses(self, cid: str) -> list[str]:
        return sorted(
            (c for c in self.onto.concepts if self.onto.is_subclass(c, cid)),
            key=sort_key,
        )

    def _facts(
        self,
        subject: str,
        relation: str,
        object_: Optional[str] = None,
        most: bool = False,
    ) -> list[Fact]:
        out = []
        for c in self._subclasses(subject):
            for entry in self.onto.slot_entries(c, relation):
                if object_ is not None and not self.onto.is_subclass(
                    entry.filler, object_
                ):
                    continue
                supports = sorted(
                    (self.onto.astructs[a] for a in entry.more), key=_astr_number
                )
                if most:
                    supports = [a for a in supports if self._mostly(a)]
                    if not supports:
                        continue
                out.append(
                    Fact(c, relation, entry.filler, entry.quant, tuple(supports))
                )
        return out

    @staticmethod
    def _mostly(astr: AStructure) -> bool:
        anchor = astr.anchor()
        return anchor is not None and anchor.quant.rank() >= _MOST_RANK

    def _fact_line(self, fact: Fact) -> str:
        line = render_fact_line(self.onto, fact.subject, fact.relation, [fact.filler])
        suffix = (
            render_modifiers(self.onto, fact.supports[0]) if fact.supports else ""
        )
        return f"{line} {suffix}" if suffix else line

    def _fact_steps(self, query_subject: str, fact: Fact) -> list[tuple]:
        steps: list[tuple] = []
        if fact.subject != query_subject:
            steps.append(("is-a", fact.subject, query_subject))
        steps.append(("slot", fact.subject, fact.relation, fact.filler))
        return steps

    # -- per-kind handlers

    def _answer_what_rel(self, q: Query) -> Answer:
        answer = Answer()
        for fact in self._facts(q.subject, q.relation, most=q.most):
            answer.lines.append(self._fact_line(fact))
            answer.chain.extend(self._fact_steps(q.subject, fact))
        answer.lines.sort()
        return answer

    def _answer_which(self, q: Query) -> Answer:
        answer = Answer()
        for fact in self._facts(q.subject, q.relation, q.object, most=q.most):
            answer.lines.append(self._fact_line(fact))
            answer.chain.extend(self._fact_steps(q.subject, fact))
            answer.chain.append(("is-a", fact.filler, q.object))
        answer.lines.sort()
        return answer

    def _answer_yesno(self, q: Query) -> Answer:
        facts = self._facts(q.subject, q.relation, q.object, most=q.most)
        asserted = [f for f in facts if f.quant.rank() >= _ASSERTED_RANK]
        if asserted:
            return self._yes_answer(q, asserted)
        if facts:
            return self._no_answer(q, facts)
        return Answer()

    def _yes_answer(self, q: Query, facts: list[Fact]) -> Answer:
        answer = Answer()
        quantifier = "most" if q.most else "some"
        by_subject: dict[str, list[Fact]] = {}
        for fact in facts:
            by_subject.setdefault(fact.subject, []).append(fact)

        own = by_subject.pop(q.subject, None)
        if own is not None:
            fillers = sorted({f.filler for f in own}, key=sort_key)
            line = render_fact_line(self.onto, q.subject, q.relation, fillers)
            if len(own) == 1 and own[0].supports:
                suffix = render_modifiers(self.onto, own[0].supports[0])
                if suffix:
                    line = f"{line} {suffix}"
            answer.lines.append(f"yes, {line}")
            for fact in own:
                answer.chain.extend(self._fact_steps(q.subject, fact))
            return answer

        for subject in sorted(by_subject, key=sort_key):
            group = by_subject[subject]
            fillers = sorted({f.filler for f in group}, key=sort_key)
            rendered = " ".join(render_concept(self.onto, f) for f in fillers)
            summary = (
                f"{render_concept(self.onto, q.subject)} {q.relation} {rendered}"
            )
            witness = render_fact_line(self.onto, subject, q.relation, fillers)
            if len(group) == 1 and group[0].supports:
                suffix = render_modifiers(self.onto, group[0].supports[0])
                if suffix:
                    witness = f"{witness} {suffix}"
            answer.lines.append(f"yes, {quantifier} {summary} because")
            answer.lines.append(
                f"  {render_concept(self.onto, subject)} is-a"
                f" {render_concept(self.onto, q.subject)} and"
            )
            answer.lines.append(f"  {witness}")
            for fact in group:
                answer.chain.extend(self._fact_steps(q.subject, fact))
        return answer

    def _no_answer(self, q: Query, facts: list[Fact]) -> Answer:
        """Nothing asserted outright, only weaker-than-existential facts:
        the answer is no, and the weak fact itself is the evidence."""
        answer = Answer()
        ordered = sorted(
            facts, key=lambda f: (sort_key(f.subject), sort_key(f.filler))
        )
        for fact in ordered:
            shown = (
                f"{render_concept(self.onto, fact.subject)} {fact.quant.token()}"
                f" {fact.relation} {render_concept(self.onto, fact.filler)}"
            )
            if fact.supports:
                suffix = render_modifiers(self.onto, fact.supports[0])
                if suffix:
                    shown = f"{shown} {suffix}"
            if fact.subject == q.subject:
                answer.lines.append(f"no, {shown}")
            else:
                answer.lines.append(
                    f"no, {render_concept(self.onto, q.subject)}"
                    f" {fact.quant.token()} {fact.relation}"
                    f" {render_concept(self.onto, fact.filler)} because"
                )
                answer.lines.append(
                    f"  {render_concept(self.onto, fact.subject)} is-a"
                    f" {render_concept(self.onto, q.subject)} and"
                )
                answer.lines.append(f"  {shown}")
            answer.chain.extend(self._fact_steps(q.subject, fact))
        return answer

    def _answer_kinds_of(self, q: Query) -> Answer:
        genus, restrictions = self.onto.normal_form(q.subject)
        members = []
        answer = Answer()
        for cid, c in self.onto.concepts.items():
            if c.cf is not None or cid == q.subject:
                continue  # kinds are primitive concepts
            if self.onto.is_subclass(cid, q.subject):
                members.append(cid)
                answer.chain.append(("is-a", cid, q.subject))
                continue
            if not restrictions or not self.onto.is_subclass(cid, genus):
                continue
            steps = self._satisfaction_steps(cid, restrictions)
            if steps is not None:
                members.append(cid)
                answer.chain.append(("is-a", cid, genus))
                answer.chain.extend(steps)
        if members:
            answer.lines.append(", ".join(sorted(members, key=sort_key)))
        return answer

    def _satisfaction_steps(self, cid: str, restrictions) -> Optional[list[tuple]]:
        """Slot lookups showing `cid` meets every restriction, or None."""
        steps: list[tuple] = []
        for r in restrictions:
            entry = next(
                (
                    e
                    for e in self.onto.slot_entries(cid, r.relation)
                    if self.onto.is_subclass(e.filler, r.filler)
                ),
                None,
            )
            if entry is None:
                return None
            steps.append(("slot", cid, r.relation, entry.filler))
            steps.append(("is-a", entry.filler, r.filler))
        return steps

    def _answer_what_is(self, q: Query) -> Answer:
        answer = Answer()
        concept = self.onto.concept(q.subject)
        if concept.cf is not None:
            answer.lines.append(
                f"{q.subject} = {render_concept(self.onto, q.subject)}"
            )
            return answer
        if concept.children:
            kinds = ", ".join(sorted(concept.children, key=sort_key))
            answer.lines.append(f"kinds of {q.subject}: {kinds}")
            for child in concept.children:
                answer.chain.append(("is-a", child, q.subject))
            return answer
        related = self._mentioning(q.subject)
        if related:
            answer.lines.append("I don't know, but I know that:")
            answer.lines.extend(
                sorted(f"  {render_astr(self.onto, a)}" for a in related)
            )
        return answer

    def _mentioning(self, cid: str) -> list[AStructure]:
        linked = {
            v
            for a in self.onto.astructs.values()
            for v in a.modifiers.values()
            if v.startswith("@A")
        }
        return [
            a
            for a in self.onto.astructs.values()
            if a.id not in linked and any(b.concept == cid for b in a.bindings)
        ]

    def _answer_inverse(self, q: Query) -> Answer:
        answer = Answer()
        inverse = q.relation + "%by"
        for fact in self._facts(q.object, inverse):
            actor = render_concept(self.onto, fact.filler)
            patient = render_concept(self.onto, fact.subject)
            line = f"{actor} {q.relation} {patient}"
            if fact.subject != q.object:
                line += f" because {patient} is-a {render_concept(self.onto, q.object)}"
            answer.lines.append(line)
            answer.chain.extend(self._fact_steps(q.object, fact))
        answer.lines.sort()
        return answer

    def _answer_when(self, q: Query) -> Answer:
        return self._modifier_answer(q, "time", "at-time {}")

    def _answer_how(self, q: Query) -> Answer:
        answer = Answer()
        seen = set()
        for fact in self._facts(q.subject, q.relation, q.object, most=q.most):
            for astr in fact.supports:
                value = astr.modifiers.get("manner")
                if value is None or not value.startswith("@A"):
                    continue
                line = render_astr(self.onto, self.onto.astructs[value])
                if line not in seen:
                    seen.add(line)
                    answer.lines.append(line)
                    answer.chain.extend(self._fact_steps(q.subject, fact))
        answer.lines.sort()
        return answer

    def _answer_how_much(self, q: Query) -> Answer:
        answer = Answer()
        for fact in self._facts(q.subject, q.relation, q.object, most=q.most):
            for astr in fact.supports:
                if "quantity" not in astr.modifiers:
                    continue
                line = render_astr(self.onto, astr)
                if line not in answer.lines:
                    answer.lines.append(line)
                    answer.chain.extend(self._fact_steps(q.subject, fact))
        answer.lines.sort()
        return answer

    def _modifier_answer(self, q: Query, key: str, template: str) -> Answer:
        answer = Answer()
        for fact in self._facts(q.subject, q.relation, q.object, most=q.most):
            for astr in fact.supports:
                value = astr.modifiers.get(key)
                if value is None or value.startswith("@A"):
                    continue
                line = template.format(render_concept(self.onto, value))
                if line not in answer.lines:
                    answer.lines.append(line)
                    answer.chain.extend(self._fact_steps(q.subject, fact))
        answer.lines.sort()
        return answer
