"""Clause meaning: pick a verbal concept, bind case roles, set modifiers.

The interpreter turns parsed clauses into relation-shaped meanings.  A small
rule file decides which verbal concept a verb evokes; rules are anchored to
trigger points that mirror clause order (subject, verb, object, indirect
object, predicate, prepositions, clause end), and the first rule whose point
is reached and whose conditions hold wins.  With the verbal concept fixed,
noun groups are bound to case roles under the concept's restrictions,
prepositional phrases attach as strong roles or weak modifiers, and
subclauses become linked sub-meanings.

Interpretation is deliberately side-effectful on the ontology: resolving a
noun group may mint new concepts (hyphenated subclasses, defined
specializations), exactly as during reading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .lexicon import Lexicon, Pos
from .noun_group import (
    NGItem,
    NounGroupError,
    PairTable,
    genitive_specialize,
    interpret_noun_group,
    specialize,
)
from .ontology import Ontology, Quantifier
from .parser import ClauseParse, NPGroup, ParseStructure
from .verbal_concepts import VerbalConcepts

TRIGGER_POINTS = ("subj", "verb", "obj", "io", "pred", "prep", "end")

_CONSTITUENTS = ("subj", "obj", "io", "pred")


class ClauseFailure(Exception):
    """One clause could not be understood; the rest of the sentence may."""


class RuleFormatError(Exception):
    def __init__(self, message: str, lineno: Optional[int] = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


# ------------------------------------------------------------ meaning rules


@dataclass(frozen=True)
class Condition:
    kind: str  # "isa" | "io" | "pp" | "particle"
    arg: str  # constituent name, preposition, or ""
    value: str  # concept id, "present"/"absent", or particle word


@dataclass(frozen=True)
class MeaningRule:
    point: str
    lemma: str
    conditions: tuple[Condition, ...]
    vc: str


def _parse_condition(text: str, onto: Ontology, lineno: int) -> Condition:
    words = text.split()
    if len(words) == 3 and words[1] == "isa":
        if words[0] not in _CONSTITUENTS:
            raise RuleFormatError(f"bad isa constituent: {words[0]}", lineno)
        if words[2] not in onto:
            raise RuleFormatError(f"unknown concept: {words[2]}", lineno)
        return Condition("isa", words[0], words[2])
    if len(words) == 2 and words[0] == "io" and words[1] in ("present", "absent"):
        return Condition("io", "", words[1])
    if len(words) == 2 and words[0].startswith("pp:"):
        if words[1] not in ("present", "absent"):
            raise RuleFormatError(f"bad pp condition: {text}", lineno)
        return Condition("pp", words[0][3:], words[1])
    if len(words) == 1 and words[0].startswith("particle="):
        return Condition("particle", "", words[0].split("=", 1)[1])
    raise RuleFormatError(f"bad condition: {text}", lineno)


def load_meaning_rules(
    path: str | Path, vcs: VerbalConcepts, onto: Ontology
) -> list[MeaningRule]:
    rules: list[MeaningRule] = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=>" not in line:
            raise RuleFormatError("missing '=>'", lineno)
        left, _, target = line.partition("=>")
        target = target.strip()
        if target not in vcs:
            raise RuleFormatError(f"unknown verbal concept: {target}", lineno)
        words = left.split()
        if len(words) < 3 or words[0] != "vmrule":
            raise RuleFormatError("expected 'vmrule <point> <lemma> ...'", lineno)
        point, lemma = words[1], words[2]
        if point not in TRIGGER_POINTS:
            raise RuleFormatError(f"bad trigger point: {point}", lineno)
        conditions: list[Condition] = []
        rest = " ".join(words[3:])
        if rest:
            if not rest.startswith("if "):
                raise RuleFormatError(f"unexpected tail: {rest}", lineno)
            for part in rest[3:].split(" and "):
                conditions.append(_parse_condition(part.strip(), onto, lineno))
        rules.append(MeaningRule(point, lemma, tuple(conditions), target))
    return rules


# ------------------------------------------------------------ result model


@dataclass
class Filler:
    """Concepts bound to one role; several members expand to several facts."""

    members: tuple[str, ...]
    quant: Quantifier


@dataclass
class Interpretation:
    """One clause resolved to a relation with role fillers and modifiers."""

    vc: str
    relation: str
    roles: dict[str, Filler] = field(default_factory=dict)
    modifiers: dict[str, Union[str, "Interpretation"]] = field(default_factory=dict)
    companions: list["Interpretation"] = field(default_factory=list)

    def head_concept(self, role: str) -> Optional[str]:
        filler = self.roles.get(role)
        return filler.members[0] if filler and filler.members else None


@dataclass
class IsaStatement:
    """Copular sentence asserting class membership."""

    subjects: tuple[str, ...]
    parent: str


ClauseMeaning = Union[Interpretation, IsaStatement]


@dataclass
class SentenceMeaning:
    clauses: list[ClauseMeaning] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)


# -------------------------------------------------------------- resolution


@dataclass
class _ResolvedNP:
    """A noun phrase ready for binding."""

    np: NPGroup
    candidates: list[str]  # head candidates, best first
    member_candidates: list[list[str]]  # coordination/enumeration expansion
    inherit_role: bool  # members skip the case check (enumerations)
    events: list[Interpretation] = field(default_factory=list)

    def concept(self) -> Optional[str]:
        return self.candidates[0] if self.candidates else None


class Interpreter:
    def __init__(
        self,
        onto: Ontology,
        lexicon: Lexicon,
        vcs: VerbalConcepts,
        pairs: PairTable,
        rules: list[MeaningRule],
    ):
        self.onto = onto
        self.lexicon = lexicon
        self.vcs = vcs
        self.pairs = pairs
        self.rules_by_point: dict[str, list[MeaningRule]] = {}
        for rule in rules:
            self.rules_by_point.setdefault(rule.point, []).append(rule)

    # ------------------------------------------------------------- public

    def interpret(self, parse: ParseStructure) -> SentenceMeaning:
        out = SentenceMeaning()
        matrix: Optional[Filler] = None
        for clause in parse.clauses:
            try:
                meaning = self._clause(clause, outer=matrix)
            except (ClauseFailure, NounGroupError) as exc:
                out.failures.append(str(exc))
                continue
            out.clauses.append(meaning)
            if matrix is None and isinstance(meaning, Interpretation):
                matrix = meaning.roles.get("actor")
        return out

    # ------------------------------------------------------- clause level

    def _clause(
        self,
        clause: ClauseParse,
        outer: Optional[Filler],
        gap_obj: Optional[_ResolvedNP] = None,
    ) -> ClauseMeaning:
        pps = list(clause.pps)
        subj, subj_pronoun = self._subject(clause, outer, pps)

        # what embedded clauses and pronouns see as "the subject"
        if subj is not None and subj.concept() is not None:
            inner = Filler(
                self._pick_members(subj), self._np_quant(subj.np, actor=True)
            )
        else:
            inner = outer

        obj = self._steal_kind_object(clause, pps)
        if obj is None and clause.obj is not None:
            obj = self._resolve_np(clause.obj, inner)
        if obj is None and gap_obj is not None:
            obj = gap_obj
        io = self._resolve_np(clause.io, inner) if clause.io is not None else None
        pred = self._resolve_np(clause.pred, inner) if clause.pred is not None else None

        concepts = {
            "subj": subj.concept() if subj else (inner.members[0] if inner else None),
            "obj": obj.concept() if obj else None,
            "io": io.concept() if io else None,
            "pred": pred.concept() if pred else self._adj_concept(clause.pred_adj),
        }
        rule = self._select_rule(clause, concepts)
        if rule is None:
            if clause.verb == "be" and pred is not None and subj is not None:
                return IsaStatement(self._pick_members(subj), pred.concept())
            raise ClauseFailure(f"no meaning for verb: {clause.verb}")
        vc = rule.vc

        itp = Interpretation(vc, self.vcs.relation_for(vc))

        # case roles, actor first
        if subj is not None:
            self._bind_case(itp, vc, "subj", subj, actor=True)
        elif subj_pronoun:
            self._bind_pronoun_subject(itp, vc, outer)
        elif outer is not None:
            self._bind_outer_subject(itp, vc, outer)
        elif clause.passive:
            pass  # the by-phrase supplies the actor
        else:
            raise ClauseFailure(f"no subject for {vc}")
        for case, resolved in (("obj", obj), ("io", io), ("pred", pred)):
            if resolved is not None:
                self._bind_case(itp, vc, case, resolved)

        self._attach_pps(itp, vc, clause, pps)
        self._apply_quantity(itp, obj)
        self._apply_adverbs(itp, clause)
        self._attach_subclauses(itp, clause)
        self._apply_defaults(itp, vc)
        self._check_requires(itp, vc)
        if vc == "consist-of":
            self._unpack_relational_subject(itp)
        for resolved in (subj, obj, io, pred):
            if resolved is not None:
                itp.companions.extend(resolved.events)
        return itp

    # --------------------------------------------------------- vc choice

    def meaning_of_verb(
        self,
        verb: str,
        subj: Optional[str] = None,
        obj: Optional[str] = None,
        particle: Optional[str] = None,
    ) -> Optional[tuple[str, str, bool]]:
        """Resolve a bare subject-verb-object skeleton (question fragments)
        to (verbal concept, relation, object-folded).  Object-folded means
        an is-a test on the object picked the meaning, so the object names
        the relation's category rather than a participant to filter by."""
        clause = ClauseParse(verb=verb, particle=particle)
        concepts = {"subj": subj, "obj": obj, "io": None, "pred": None}
        rule = self._select_rule(clause, concepts)
        if rule is None:
            return None
        folded = any(c.kind == "isa" and c.arg == "obj" for c in rule.conditions)
        return rule.vc, self.vcs.relation_for(rule.vc), folded

    def _select_rule(
        self, clause: ClauseParse, concepts: dict[str, Optional[str]]
    ) -> Optional[MeaningRule]:
        for point in TRIGGER_POINTS:
            if not self._point_reached(point, clause, concepts):
                continue
            for rule in self.rules_by_point.get(point, ()):
                if rule.lemma != clause.verb:
                    continue
                if all(self._holds(c, clause, concepts) for c in rule.conditions):
                    return rule
        return None

    @staticmethod
    def _point_reached(
        point: str, clause: ClauseParse, concepts: dict[str, Optional[str]]
    ) -> bool:
        """A constituent's trigger point exists only when it does."""
        if point in ("verb", "end"):
            return True
        if point == "prep":
            return bool(clause.pps)
        if point == "pred":
            return clause.pred is not None or clause.pred_adj is not None
        return concepts.get(point) is not None

    def _holds(
        self, cond: Condition, clause: ClauseParse, concepts: dict[str, Optional[str]]
    ) -> bool:
        if cond.kind == "isa":
            concept = concepts.get(cond.arg)
            return concept is not None and self.onto.is_subclass(concept, cond.value)
        if cond.kind == "io":
            return (clause.io is not None) == (cond.value == "present")
        if cond.kind == "pp":
            present = any(pp.prep == cond.arg for pp in clause.pps)
            return present == (cond.value == "present")
        if cond.kind == "particle":
            return clause.particle == cond.value
        return False

    # ------------------------------------------------------------ binding

    def _bind_case(
        self,
        itp: Interpretation,
        vc: str,
        case: str,
        resolved: _ResolvedNP,
        actor: bool = False,
    ) -> None:
        role = None
        members: list[str] = []
        if resolved.inherit_role:
            # enumeration members take the role the head earned, unchecked
            role = self._case_role(vc, case, resolved.candidates)
            members = [c[0] for c in resolved.member_candidates]
        elif resolved.member_candidates:
            for candidates in resolved.member_candidates:
                member_role = self._case_role(vc, case, candidates)
                if member_role is None or (role is not None and member_role != role):
                    raise ClauseFailure(
                        f"{case} {candidates[0]} does not fit {vc}"
                    )
                role = member_role
                members.append(self._case_pick(vc, case, candidates))
        else:
            role = self._case_role(vc, case, resolved.candidates)
            members = [self._case_pick(vc, case, resolved.candidates)]
        if role is None:
            raise ClauseFailure(f"{case} {resolved.concept()} does not fit {vc}")
        quant = self._np_quant(resolved.np, actor=(role == "actor"))
        itp.roles[role] = Filler(tuple(members), quant)

    def _case_role(self, vc: str, case: str, candidates: list[str]) -> Optional[str]:
        for concept in candidates:
            role = self.vcs.match_case(vc, case, concept, self.onto)
            if role is not None:
                return role
        return None

    def _case_pick(self, vc: str, case: str, candidates: list[str]) -> str:
        for concept in candidates:
            if self.vcs.match_case(vc, case, concept, self.onto) is not None:
                return concept
        return candidates[0]

    def _bind_pronoun_subject(
        self, itp: Interpretation, vc: str, outer: Optional[Filler]
    ) -> None:
        """'it' takes the surrounding subject when the case allows it."""
        concept = outer.members[0] if outer and outer.members else None
        if concept and self.vcs.match_case(vc, "subj", concept, self.onto):
            itp.roles["actor"] = Filler(outer.members, outer.quant)
        else:
            self._bind_default_subject(itp, vc, True)

    def _bind_outer_subject(self, itp: Interpretation, vc: str, outer: Filler) -> None:
        """Shared and gap subjects reuse the surrounding subject, checked."""
        role = self._case_role(vc, "subj", list(outer.members))
        if role is None:
            raise ClauseFailure(f"subj {outer.members[0]} does not fit {vc}")
        itp.roles[role] = Filler(outer.members, outer.quant)

    def _bind_default_subject(self, itp: Interpretation, vc: str, ok: bool) -> None:
        """An absent or opaque subject falls back to the case restriction."""
        if not ok:
            raise ClauseFailure(f"no subject for {vc}")
        for node in self.vcs.chain(vc):
            entries = node.cases.get("subj")
            if entries:
                role = entries[0].role
                itp.roles[role] = Filler(
                    (entries[0].restriction,), Quantifier.unknown()
                )
                return

    def _np_quant(self, np: Optional[NPGroup], actor: bool) -> Quantifier:
        if np is None:
            return Quantifier.universal() if actor else Quantifier.unknown()
        if np.quantity:
            return Quantifier.count(*np.quantity)
        dets = np.determiners
        if "most" in dets:
            return Quantifier.proportion("most")
        if "some" in dets:
            return Quantifier.existential()
        if "all" in dets:
            return Quantifier.universal()
        return Quantifier.universal() if actor else Quantifier.unknown()

    # ------------------------------------------------------------ subject

    def _subject(
        self,
        clause: ClauseParse,
        outer: Optional[Filler],
        pps: list,
    ) -> tuple[Optional[_ResolvedNP], bool]:
        """Resolve the subject, folding pre-verbal genitives into it."""
        np = clause.subj
        if np is None:
            if clause.passive or clause.shared_subject or outer is not None:
                return None, False
            raise ClauseFailure("clause has no subject")
        if np.pronoun:
            return None, True
        resolved = self._resolve_np(np, outer)
        for pp in list(pps):
            if pp.after_verb:
                continue
            if pp.prep != "of":
                raise ClauseFailure(f"unattached preposition: {pp.prep}")
            of = self._resolve_np(pp.np, outer)
            resolved = self._genitive(resolved, of, pp.np)
            pps.remove(pp)
        return resolved, False

    def _genitive(
        self, head: _ResolvedNP, of: _ResolvedNP, of_np: NPGroup
    ) -> _ResolvedNP:
        of_concept = of.concept()
        bound = genitive_specialize(self.onto, head.candidates, of_concept)
        if bound is None:
            meaning = None
            base = head.concept()
            if base is not None:
                meaning = self.pairs.pair_meaning(of_concept, base, self.onto)
            if meaning is None:
                raise ClauseFailure(
                    f"cannot relate {of_concept} to {head.concept()}"
                )
            relation = meaning.relation
            if meaning.holder == "first":
                relation += "%by"
            bound = specialize(
                self.onto, base, [(relation, of_concept, Quantifier.existential())]
            )
        return _ResolvedNP(head.np, [bound], [], False, head.events + of.events)

    # ------------------------------------------------------ noun phrases

    def _resolve_np(self, np: NPGroup, outer: Optional[Filler]) -> _ResolvedNP:
        if np.pronoun:
            raise ClauseFailure(f"unresolved pronoun: {np.pronoun}")
        if np.coordination:
            member_candidates = []
            events: list[Interpretation] = []
            for member in np.coordination:
                resolved = self._resolve_np(member, outer)
                member_candidates.append(resolved.candidates)
                events.extend(resolved.events)
            return _ResolvedNP(np, member_candidates[0], member_candidates, False, events)

        events = []
        if np.relclause is not None and np.rel_role == "subj":
            candidates = [self._fold_relclause(np)]
        else:
            candidates = interpret_noun_group(
                self._ng_items(np), self.onto, self.pairs, proper=np.proper
            )
            if np.relclause is not None:
                head = _ResolvedNP(np, candidates, [], False)
                event = self._clause(np.relclause, outer, gap_obj=head)
                if not isinstance(event, Interpretation):
                    raise ClauseFailure("relative clause is not an event")
                events.append(event)

        if np.enumeration:
            member_candidates = []
            for member in np.enumeration:
                resolved = self._resolve_np(member, outer)
                member_candidates.append(resolved.candidates)
                events.extend(resolved.events)
            return _ResolvedNP(np, candidates, member_candidates, True, events)
        return _ResolvedNP(np, candidates, [], False, events)

    def _fold_relclause(self, np: NPGroup) -> str:
        """A subject-gap relative clause restricts its head concept."""
        candidates = interpret_noun_group(
            self._ng_items(np), self.onto, self.pairs, proper=np.proper
        )
        head = candidates[0]
        inner = self._clause(
            np.relclause, outer=Filler((head,), Quantifier.universal())
        )
        if not isinstance(inner, Interpretation):
            raise ClauseFailure("relative clause is not an event")
        restrictions = []
        for role, filler in inner.roles.items():
            if role == "actor":
                continue
            relation = self.onto.slot_relation(role, inner.relation)
            for member in filler.members:
                restrictions.append((relation, member, filler.quant))
        if not restrictions:
            return head
        return specialize(self.onto, head, restrictions)

    def _ng_items(self, np: NPGroup) -> list[NGItem]:
        items = []
        for tok in np.tokens:
            analysis = tok.reading(Pos.NOUN) or tok.reading(Pos.ADJ)
            if analysis is None:
                analysis = tok.readings[0] if tok.readings else None
            if analysis is None:
                raise ClauseFailure(f"word without reading: {tok.surface}")
            senses = analysis.entry.senses
            items.append(NGItem(analysis.entry.lemma, senses[0] if senses else None))
        if not items:
            raise ClauseFailure("empty noun group")
        return items

    def _steal_kind_object(
        self, clause: ClauseParse, pps: list
    ) -> Optional[_ResolvedNP]:
        """'some kinds of seals' quantifies over the of-object directly."""
        np = clause.obj
        if np is None or np.head is None:
            return None
        analysis = np.head.reading(Pos.NOUN)
        if analysis is None or analysis.entry.lemma != "kind" or analysis.entry.senses:
            return None
        for pp in pps:
            if pp.prep == "of" and pp.after_verb:
                resolved = self._resolve_np(pp.np, None)
                pps.remove(pp)
                resolved.np = np  # outer determiners carry the quantifier
                return resolved
        raise ClauseFailure("kind without an of-phrase")

    def _adj_concept(self, lemma: Optional[str]) -> Optional[str]:
        if lemma is None:
            return None
        for entry in self.lexicon.lookup(lemma):
            if entry.pos is Pos.ADJ and entry.senses:
                return entry.senses[0]
        return None

    def _pick_members(self, resolved: _ResolvedNP) -> tuple[str, ...]:
        if resolved.member_candidates:
            return tuple(c[0] for c in resolved.member_candidates)
        return tuple(resolved.candidates[:1])

    # -------------------------------------------------- preps & modifiers

    def _attach_pps(
        self, itp: Interpretation, vc: str, clause: ClauseParse, pps: list
    ) -> None:
        for pp in pps:
            if clause.passive and pp.prep == "by":
                agent = self._resolve_np(pp.np, None)
                self._bind_case(itp, vc, "subj", agent, actor=True)
                continue
            resolved = self._resolve_np(pp.np, None)
            meaning = self._prep_meaning(vc, pp.prep, resolved.candidates)
            if meaning is None:
                raise ClauseFailure(f"unattached preposition: {pp.prep}")
            name, strength = meaning
            if strength == "strong":
                members: list[str]
                if resolved.member_candidates:
                    members = [c[0] for c in resolved.member_candidates]
                else:
                    members = [resolved.concept()]
                itp.roles[name] = Filler(
                    tuple(members), self._np_quant(pp.np, actor=False)
                )
            else:
                itp.modifiers[name] = resolved.concept()
            itp.companions.extend(resolved.events)

    def _prep_meaning(
        self, vc: str, prep: str, candidates: list[str]
    ) -> Optional[tuple[str, str]]:
        for concept in candidates:
            meaning = self.vcs.match_prep(vc, prep, concept, self.onto)
            if meaning is not None:
                return meaning
        return None

    def _apply_quantity(
        self, itp: Interpretation, obj: Optional[_ResolvedNP]
    ) -> None:
        if obj is not None and obj.np.quantity:
            number, unit = obj.np.quantity
            itp.modifiers["quantity"] = f"{number}:{unit}"

    def _apply_adverbs(self, itp: Interpretation, clause: ClauseParse) -> None:
        if clause.hedged:
            itp.modifiers["frequency"] = "sometimes"
        if clause.freq_np:
            itp.modifiers["frequency"] = clause.freq_np
        for adverb in clause.adverbs:
            if adverb == "rarely":
                theme = itp.roles.get("theme")
                if theme is not None:
                    itp.roles["theme"] = Filler(
                        theme.members, Quantifier.proportion("rarely")
                    )
            else:
                itp.modifiers["frequency"] = adverb

    def _attach_subclauses(self, itp: Interpretation, clause: ClauseParse) -> None:
        actor = itp.roles.get("actor")
        for kind, sub in clause.subclauses:
            inner = self._clause(sub, outer=actor)
            if not isinstance(inner, Interpretation):
                raise ClauseFailure(f"{kind} clause is not an event")
            itp.modifiers[kind] = inner

    def _apply_defaults(self, itp: Interpretation, vc: str) -> None:
        for role, concept in self.vcs.defaults_for(vc).items():
            if role not in itp.roles:
                itp.roles[role] = Filler((concept,), Quantifier.unknown())

    def _check_requires(self, itp: Interpretation, vc: str) -> None:
        for role in self.vcs.requires_for(vc):
            if role not in itp.roles:
                raise ClauseFailure(f"{vc} is missing its {role}")

    def _unpack_relational_subject(self, itp: Interpretation) -> None:
        """'The diet of bears consists of X': the subject names the relation's
        passive side, so the fact runs forward from the genitive object."""
        actor = itp.roles.get("actor")
        if actor is None or len(actor.members) != 1:
            raise ClauseFailure("relational subject needed")
        cf = self.onto.concept(actor.members[0]).cf
        if cf is None:
            raise ClauseFailure(f"{actor.members[0]} names no relationship")
        inverse = [r for r in cf.restrictions if r.relation.endswith("%by")]
        if len(inverse) != 1 or inverse[0].relation[:-3] != itp.relation:
            raise ClauseFailure(f"{actor.members[0]} names no {itp.relation} side")
        itp.roles["actor"] = Filler((inverse[0].filler,), Quantifier.universal())
