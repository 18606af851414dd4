"""Verb semantics: a hierarchy of verbal concepts.

Each verbal concept says which constituents it accepts (case entries), what
its prepositions mean (prep entries, strong or weak), and what follow-up
facts its instances license (addition rules).  Lookup walks the hierarchy
bottom-up, and a node that defines entries for a case or preposition fully
shadows its ancestors for that case: if none of its entries accept the
filler, the match fails rather than falling back to a parent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:  # pragma: no cover
    from .ontology import Ontology

ROOT_VC = "action"


@dataclass(frozen=True)
class CaseEntry:
    restriction: str
    role: str
    claim: bool = True  # False = deny: a matching filler fails the clause


@dataclass(frozen=True)
class PrepEntry:
    restriction: str
    meaning: str
    strength: str  # "strong" or "weak"
    claim: bool = True


@dataclass(frozen=True)
class AdditionRule:
    id: str
    antecedent: tuple[tuple[str, str], ...]  # (role, minimum concept)
    relation: str
    args: tuple[str, ...]  # roles feeding the derived relation, in order
    guard: Optional[tuple[str, str]] = None  # unless <role> isa <concept>
    override: Optional[tuple[str, str]] = None  # ... override <role> isa <concept>


@dataclass
class VerbalConcept:
    name: str
    parent: Optional[str]
    triggers: list[str] = field(default_factory=list)
    cases: dict[str, list[CaseEntry]] = field(default_factory=dict)
    preps: dict[str, list[PrepEntry]] = field(default_factory=dict)
    addition_rules: list[AdditionRule] = field(default_factory=list)
    relation: Optional[str] = None
    requires: Optional[tuple[str, ...]] = None
    defaults: dict[str, str] = field(default_factory=dict)


class VerbalConceptError(Exception):
    pass


class VerbalConcepts:
    def __init__(self):
        self.nodes: dict[str, VerbalConcept] = {ROOT_VC: VerbalConcept(ROOT_VC, None)}

    def __contains__(self, name: str) -> bool:
        return name in self.nodes

    def node(self, name: str) -> VerbalConcept:
        try:
            return self.nodes[name]
        except KeyError:
            raise VerbalConceptError(f"no such verbal concept: {name}") from None

    def chain(self, name: str) -> list[VerbalConcept]:
        """The node and its ancestors, bottom-up, ending at the root."""
        out = []
        cur: Optional[str] = name
        while cur is not None:
            node = self.node(cur)
            out.append(node)
            cur = node.parent
        return out

    # ----------------------------------------------------------- matching

    def match_case(
        self, vc: str, case: str, filler: str, onto: "Ontology"
    ) -> Optional[str]:
        """Role for `filler` in the given case, or None on failure.  The
        first node (bottom-up) defining the case decides alone."""
        for node in self.chain(vc):
            entries = node.cases.get(case)
            if entries is None:
                continue
            for e in entries:
                if onto.is_subclass(filler, e.restriction):
                    return e.role if e.claim else None
            return None
        return None

    def match_prep(
        self, vc: str, prep: str, filler: str, onto: "Ontology"
    ) -> Optional[tuple[str, str]]:
        """(meaning, strength) for a prepositional object, or None."""
        for node in self.chain(vc):
            entries = node.preps.get(prep)
            if entries is None:
                continue
            for e in entries:
                if onto.is_subclass(filler, e.restriction):
                    return (e.meaning, e.strength) if e.claim else None
            return None
        return None

    # -------------------------------------------------------- inheritance

    def inherited_addition_rules(self, vc: str) -> list[AdditionRule]:
        out = []
        for node in self.chain(vc):
            out.extend(node.addition_rules)
        return out

    def relation_for(self, vc: str) -> str:
        for node in self.chain(vc):
            if node.relation:
                return node.relation
        return vc

    def requires_for(self, vc: str) -> tuple[str, ...]:
        for node in self.chain(vc):
            if node.requires is not None:
                return node.requires
        return ()

    def defaults_for(self, vc: str) -> dict[str, str]:
        merged: dict[str, str] = {}
        for node in reversed(self.chain(vc)):  # child settings win
            merged.update(node.defaults)
        return merged

    def ingest_marked(self, vc: str) -> bool:
        return any(r.relation == "ingest" for r in self.inherited_addition_rules(vc))

    def vcs_for_trigger(self, lemma: str, particle: Optional[str] = None) -> list[str]:
        key = f"{lemma} {particle}" if particle else lemma
        out = []
        for name in self.nodes:
            if key in self.node(name).triggers:
                out.append(name)
        return sorted(out)

    # ------------------------------------------------------------ loading

    @classmethod
    def load(cls, path: str | Path, onto: "Ontology") -> "VerbalConcepts":
        vcs = cls()
        current: Optional[VerbalConcept] = None
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                current = vcs._parse_line(line, current, onto)
            except VerbalConceptError as e:
                raise VerbalConceptError(f"{path}:{lineno}: {e}") from None
        return vcs

    def _parse_line(
        self, line: str, current: Optional[VerbalConcept], onto: "Ontology"
    ) -> Optional[VerbalConcept]:
        parts = line.split()
        kind = parts[0]
        if kind == "vconcept":
            if len(parts) != 4 or parts[2] != "parent":
                raise VerbalConceptError(f"bad vconcept line: {line}")
            name, parent = parts[1], parts[3]
            if name in self.nodes:
                raise VerbalConceptError(f"duplicate verbal concept: {name}")
            if parent != "-" and parent not in self.nodes:
                raise VerbalConceptError(f"unknown parent: {parent}")
            node = VerbalConcept(name, None if parent == "-" else parent)
            self.nodes[name] = node
            return node
        if current is None:
            raise VerbalConceptError(f"directive before any vconcept: {line}")
        if kind == "trigger":
            current.triggers.append(" ".join(parts[1:]).replace("+", " "))
        elif kind == "case":
            if len(parts) < 4:
                raise VerbalConceptError(f"bad case line: {line}")
            case, restriction, role = parts[1], parts[2], parts[3]
            claim = "deny" not in parts[4:]
            self._need_concept(restriction, onto)
            current.cases.setdefault(case, []).append(CaseEntry(restriction, role, claim))
        elif kind == "prep":
            if len(parts) < 5:
                raise VerbalConceptError(f"bad prep line: {line}")
            prep, strength, restriction, meaning = parts[1], parts[2], parts[3], parts[4]
            if strength not in ("strong", "weak"):
                raise VerbalConceptError(f"bad strength: {strength}")
            claim = "deny" not in parts[5:]
            self._need_concept(restriction, onto)
            current.preps.setdefault(prep, []).append(
                PrepEntry(restriction, meaning, strength, claim)
            )
        elif kind == "addrule":
            current.addition_rules.append(self._parse_addrule(parts[1:], current, onto))
        elif kind == "relation":
            current.relation = parts[1]
        elif kind == "require":
            current.requires = tuple(parts[1].split(","))
        elif kind == "default":
            current.defaults[parts[1]] = parts[2]
            self._need_concept(parts[2], onto)
        else:
            raise VerbalConceptError(f"unknown directive: {kind}")
        return current

    def _parse_addrule(
        self, parts: list[str], node: VerbalConcept, onto: "Ontology"
    ) -> AdditionRule:
        # addrule actor:animal theme:animate => ingest(actor,theme)
        #         [unless actor:human override purpose:food]
        if "=>" not in parts:
            raise VerbalConceptError("addrule needs =>")
        arrow = parts.index("=>")
        antecedent = tuple(self._parse_pair(p, onto) for p in parts[:arrow])
        rest = parts[arrow + 1:]
        consequent = rest[0]
        rel, _, args = consequent.partition("(")
        arg_roles = tuple(a.strip() for a in args.rstrip(")").split(","))
        guard = override = None
        rest = rest[1:]
        while rest:
            if rest[0] == "unless":
                guard = self._parse_pair(rest[1], onto)
                rest = rest[2:]
            elif rest[0] == "override":
                override = self._parse_pair(rest[1], onto)
                rest = rest[2:]
            else:
                raise VerbalConceptError(f"bad addrule tail: {' '.join(rest)}")
        rule_id = f"{node.name}.r{len(node.addition_rules) + 1}"
        return AdditionRule(rule_id, antecedent, rel, arg_roles, guard, override)

    def _parse_pair(self, text: str, onto: "Ontology") -> tuple[str, str]:
        role, sep, concept = text.partition(":")
        if not sep:
            raise VerbalConceptError(f"expected role:concept, got {text}")
        self._need_concept(concept, onto)
        return (role, concept)

    @staticmethod
    def _need_concept(cid: str, onto: "Ontology") -> None:
        if cid not in onto:
            raise VerbalConceptError(f"unknown concept: {cid}")
