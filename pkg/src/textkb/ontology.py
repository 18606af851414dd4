"""Long-term memory: concepts, subsumption, and the classifier.

Concepts form a DAG under a single root (``entity``).  A concept is either
primitive (its meaning is its place in the hierarchy) or defined by a
``CfDefinition``: a genus plus relation restrictions that are necessary and
sufficient.  Defined concepts are positioned by the classifier, which finds
the most specific subsumers and most general subsumees and rewires links.

The store also holds relation instances (a-structures, registered by the
integration layer) and the bidirectional slot index derived from them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple, Optional, Union

ROOT = "entity"

_MACHINE_ID = re.compile(r"^@([XA])(\d+)$")


def sort_key(cid: str) -> tuple:
    """Machine ids numerically first, then names alphabetically."""
    m = _MACHINE_ID.match(cid)
    if m:
        return (0, m.group(1), int(m.group(2)))
    return (1, "", 0, cid)


class QuantKind(Enum):
    UNIVERSAL = "universal"
    EXISTENTIAL = "existential"
    UNKNOWN = "unknown"
    PROPORTION = "proportion"
    COUNT = "count"


# Strength order: all > most > some = ? = counts > sometimes > rarely.
_PROPORTION_RANKS = {"most": 30, "sometimes": 14, "rarely": 10}
_KIND_RANKS = {
    QuantKind.UNIVERSAL: 40,
    QuantKind.EXISTENTIAL: 20,
    QuantKind.UNKNOWN: 20,
    QuantKind.COUNT: 20,
}


@dataclass(frozen=True)
class Quantifier:
    """Quantifier on one binding of a relation instance."""

    kind: QuantKind
    value: Optional[str] = None  # proportion word, or "<n> <unit>" for counts

    @staticmethod
    def universal() -> "Quantifier":
        return Quantifier(QuantKind.UNIVERSAL)

    @staticmethod
    def existential() -> "Quantifier":
        return Quantifier(QuantKind.EXISTENTIAL)

    @staticmethod
    def unknown() -> "Quantifier":
        return Quantifier(QuantKind.UNKNOWN)

    @staticmethod
    def proportion(word: str) -> "Quantifier":
        # "some" as a proportion is just the existential
        if word == "some":
            return Quantifier(QuantKind.EXISTENTIAL)
        if word not in _PROPORTION_RANKS:
            raise ValueError(f"unknown proportion word: {word!r}")
        return Quantifier(QuantKind.PROPORTION, word)

    @staticmethod
    def count(number: str, unit: str) -> "Quantifier":
        return Quantifier(QuantKind.COUNT, f"{number} {unit}")

    def rank(self) -> int:
        if self.kind is QuantKind.PROPORTION:
            return _PROPORTION_RANKS[self.value or ""]
        return _KIND_RANKS[self.kind]

    def token(self) -> str:
        if self.kind is QuantKind.UNIVERSAL:
            return "all"
        if self.kind is QuantKind.EXISTENTIAL:
            return "some"
        if self.kind is QuantKind.UNKNOWN:
            return "?"
        if self.kind is QuantKind.PROPORTION:
            return self.value or "?"
        return (self.value or "").replace(" ", ":", 1)

    @staticmethod
    def from_token(tok: str) -> "Quantifier":
        if tok == "all":
            return Quantifier.universal()
        if tok == "some":
            return Quantifier.existential()
        if tok == "?":
            return Quantifier.unknown()
        if tok in _PROPORTION_RANKS:
            return Quantifier(QuantKind.PROPORTION, tok)
        if ":" in tok:
            number, unit = tok.split(":", 1)
            return Quantifier.count(number, unit)
        raise ValueError(f"bad quantifier token: {tok!r}")

    def matches(self, candidate: "Quantifier") -> bool:
        """Restriction matching: does `candidate` satisfy this quantifier?

        Unknown is special: it only accepts unknown or plain existential.
        Everything else is at-least-as-strong by rank.
        """
        if self.kind is QuantKind.UNKNOWN:
            return candidate.kind in (QuantKind.UNKNOWN, QuantKind.EXISTENTIAL)
        return candidate.rank() >= self.rank()


@dataclass(frozen=True)
class RelationRestriction:
    relation: str  # may carry the %by suffix for the inverse direction
    filler: str
    quant: Quantifier

    def key(self) -> tuple:
        return (self.relation, self.filler, self.quant.token())


@dataclass(frozen=True)
class CfDefinition:
    """Genus plus restrictions; order-insensitive, stored canonically."""

    genus: str
    restrictions: tuple[RelationRestriction, ...] = ()

    def __post_init__(self):
        canon = tuple(sorted(set(self.restrictions), key=RelationRestriction.key))
        object.__setattr__(self, "restrictions", canon)


@dataclass
class SlotEntry:
    filler: str
    quant: Quantifier
    more: set[str] = field(default_factory=set)  # supporting a-structure ids


class Binding(NamedTuple):
    """One quantified argument of a relation instance."""

    role: str
    concept: str
    quant: Quantifier


# Modifier keys an a-structure may carry; values are plain tokens ("day",
# "1 tablespoon") or the id of a linked a-structure ("@A3").
MODIFIER_KEYS = (
    "frequency",
    "quantity",
    "time",
    "location",
    "purpose",
    "manner",
    "causality",
)

_VARS = "xyzwvut"


@dataclass
class AStructure:
    """A reified relation instance (@A<n>) over quantified bindings.

    ``derived_by``/``derived_from`` record the addition rule and the source
    instance for inferred facts.  ``vc`` remembers the verbal concept that
    produced the instance; it matters only while the ingest pass runs and is
    not written to dumps.
    """

    id: str
    relation: str
    bindings: tuple[Binding, ...]
    modifiers: dict[str, str] = field(default_factory=dict)
    derived_by: str = ""
    derived_from: str = ""
    vc: Optional[str] = None

    def anchor(self) -> Optional[Binding]:
        """The binding whose concept carries the forward slot."""
        for b in self.bindings:
            if b.role == "actor":
                return b
        return self.bindings[0] if self.bindings else None

    def content_key(self) -> tuple:
        """Identity for duplicate detection: everything but the id."""
        return (
            self.relation,
            self.bindings,
            tuple(sorted(self.modifiers.items())),
            self.derived_by,
            self.derived_from,
        )

    def semantics(self) -> str:
        """First-order reading, quantifier scope left to right.

        Universal bindings restrict with an implication; everything weaker
        (existential, unknown, proportions, counts) reads existentially.
        """
        n = len(self.bindings)
        expr = f"{self.relation}({','.join(_VARS[:n])})"
        for i in reversed(range(n)):
            b = self.bindings[i]
            v = _VARS[i]
            if b.quant.kind is QuantKind.UNIVERSAL:
                expr = f"∀{v}({b.concept}({v}) ⟹ {expr})"
            else:
                expr = f"∃{v}({b.concept}({v}) ∧ {expr})"
        return expr


@dataclass
class Concept:
    id: str
    names: set[str] = field(default_factory=set)
    parents: set[str] = field(default_factory=set)
    children: set[str] = field(default_factory=set)
    cf: Optional[CfDefinition] = None
    slots: dict[str, list[SlotEntry]] = field(default_factory=dict)

    @property
    def is_defined(self) -> bool:
        return self.cf is not None


class OntologyError(Exception):
    def __init__(self, message: str, path: Optional[list[str]] = None):
        if path:
            message = f"{message} (path: {' -> '.join(path)})"
        super().__init__(message)
        self.path = path or []


CfLike = Union[str, CfDefinition]


class Ontology:
    """The long-term memory store."""

    def __init__(self):
        self.concepts: dict[str, Concept] = {ROOT: Concept(ROOT, names={ROOT})}
        self.relations: set[str] = set()
        self.astructs: dict[str, "AStructure"] = {}
        self.objects: set[str] = set()
        self._next_x = 1
        self._next_a = 1

    # ---------------------------------------------------------------- ids

    def new_concept_id(self) -> str:
        while f"@X{self._next_x}" in self.concepts:
            self._next_x += 1
        cid = f"@X{self._next_x}"
        self._next_x += 1
        return cid

    def new_astruct_id(self) -> str:
        while f"@A{self._next_a}" in self.astructs:
            self._next_a += 1
        aid = f"@A{self._next_a}"
        self._next_a += 1
        return aid

    # ---------------------------------------------------- relations, names

    def declare_relation(self, name: str) -> None:
        self.relations.add(name)

    def relation_declared(self, relation: str) -> bool:
        return relation.removesuffix("%by") in self.relations

    def add_name(self, cid: str, name: str) -> None:
        self.concept(cid).names.add(name)

    def by_name(self, name: str) -> Optional[str]:
        """Find a concept carrying `name`; the id itself counts as a name."""
        if name in self.concepts:
            return name
        hits = [c.id for c in self.concepts.values() if name in c.names]
        if not hits:
            return None
        return min(hits, key=sort_key)

    # ------------------------------------------------------------ concepts

    def concept(self, cid: str) -> Concept:
        try:
            return self.concepts[cid]
        except KeyError:
            raise OntologyError(f"no such concept: {cid}") from None

    def __contains__(self, cid: str) -> bool:
        return cid in self.concepts

    def add_concept(
        self,
        cid: Optional[str] = None,
        names: Iterable[str] = (),
        parents: Iterable[str] = (ROOT,),
        cf: Optional[CfDefinition] = None,
    ) -> str:
        """Insert a concept.  Defined concepts come in under their genus and
        should be positioned with classify() afterwards."""
        if cid is None:
            cid = self.new_concept_id()
        if cid in self.concepts:
            raise OntologyError(f"concept already exists: {cid}")
        if cf is not None:
            self._validate_cf(cf)
            parent_ids = {cf.genus}
        else:
            parent_ids = set(parents)
        for p in parent_ids:
            if p not in self.concepts:
                raise OntologyError(f"unknown parent {p} for {cid}")
        concept = Concept(cid, names=set(names) | {cid}, parents=parent_ids, cf=cf)
        self.concepts[cid] = concept
        for p in parent_ids:
            self.concepts[p].children.add(cid)
        return cid

    def _validate_cf(self, cf: CfDefinition) -> None:
        if cf.genus not in self.concepts:
            raise OntologyError(f"unknown genus: {cf.genus}")
        if cf.genus == ROOT and not cf.restrictions:
            raise OntologyError("definition must restrict something")
        for r in cf.restrictions:
            if not self.relation_declared(r.relation):
                raise OntologyError(f"undeclared relation: {r.relation}")
            if r.filler not in self.concepts:
                raise OntologyError(f"unknown filler: {r.filler}")

    def add_parent(self, cid: str, parent: str) -> None:
        c = self.concept(cid)
        p = self.concept(parent)
        if cid == parent or self.is_subclass(parent, cid):
            raise OntologyError(
                f"link {cid} -> {parent} would create a cycle",
                path=self._path_up(parent, cid) + [parent],
            )
        c.parents.add(parent)
        p.children.add(cid)

    def _unlink(self, cid: str, parent: str) -> None:
        self.concepts[cid].parents.discard(parent)
        self.concepts[parent].children.discard(cid)

    def _path_up(self, frm: str, to: str) -> list[str]:
        """One parent-path from `frm` up to `to`, for cycle error messages."""
        seen = set()
        path: list[str] = []

        def walk(c: str) -> bool:
            if c == to:
                path.append(c)
                return True
            if c in seen:
                return False
            seen.add(c)
            for p in sorted(self.concepts[c].parents):
                if walk(p):
                    path.append(c)
                    return True
            return False

        walk(frm)
        return list(reversed(path))

    # --------------------------------------------------------- subsumption

    def ancestors(self, cid: str) -> set[str]:
        out: set[str] = set()
        stack = list(self.concept(cid).parents)
        while stack:
            p = stack.pop()
            if p not in out:
                out.add(p)
                stack.extend(self.concepts[p].parents)
        return out

    def descendants(self, cid: str) -> set[str]:
        out: set[str] = set()
        stack = list(self.concept(cid).children)
        while stack:
            c = stack.pop()
            if c not in out:
                out.add(c)
                stack.extend(self.concepts[c].children)
        return out

    def is_subclass(self, a: str, b: str) -> bool:
        """Reflexive, transitive reachability through parent links."""
        if a == b:
            return True
        return b in self.ancestors(a)

    def normal_form(self, x: CfLike) -> tuple[str, tuple[RelationRestriction, ...]]:
        """Primitive genus plus the union of restrictions along the genus
        chain.  Subsumption compares normal forms so that towers of defined
        concepts behave like their expansions."""
        if isinstance(x, str):
            c = self.concept(x)
            if c.cf is None:
                return (x, ())
            x = c.cf
        restrictions: list[RelationRestriction] = list(x.restrictions)
        genus = x.genus
        seen: set[str] = set()
        while True:
            c = self.concept(genus)
            if c.cf is None:
                break
            if genus in seen:
                raise OntologyError(f"definition cycle through {genus}")
            seen.add(genus)
            restrictions.extend(c.cf.restrictions)
            genus = c.cf.genus
        canon = tuple(sorted(set(restrictions), key=RelationRestriction.key))
        return (genus, canon)

    def subsumes(self, a: CfLike, b: CfLike) -> bool:
        """True when everything described by `b` falls under `a`."""
        genus_a, restr_a = self.normal_form(a)
        genus_b, restr_b = self.normal_form(b)
        if not self.is_subclass(genus_b, genus_a):
            return False
        for ra in restr_a:
            if not any(
                rb.relation == ra.relation
                and self.is_subclass(rb.filler, ra.filler)
                and ra.quant.matches(rb.quant)
                for rb in restr_b
            ):
                return False
        return True

    def equivalent(self, a: CfLike, b: CfLike) -> bool:
        return self.subsumes(a, b) and self.subsumes(b, a)

    def recognize(self, cf: CfDefinition) -> Optional[str]:
        """Find an existing defined concept equivalent to `cf`, if any."""
        for cid in sorted(self.concepts, key=sort_key):
            c = self.concepts[cid]
            if c.cf is not None and self.equivalent(cf, c.cf):
                return cid
        return None

    def classify(self, cid: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Position a defined concept: parents become the most specific
        subsumers, the most general subsumees become children, and direct
        links the new concept displaces are removed.  Idempotent."""
        c = self.concept(cid)
        if c.cf is None:
            raise OntologyError(f"classify needs a defined concept: {cid}")
        others = [d for d in self.concepts if d != cid]
        subsumers = [d for d in others if self.subsumes(d, cid)]
        subsumees = [
            d for d in others if self.subsumes(cid, d) and not self.subsumes(d, cid)
        ]
        mss = sorted(
            (
                d
                for d in subsumers
                if not any(
                    d2 != d and self.subsumes(d, d2) and not self.subsumes(d2, d)
                    for d2 in subsumers
                )
            ),
            key=sort_key,
        )
        mgs = sorted(
            (
                d
                for d in subsumees
                if not any(
                    d2 != d and self.subsumes(d2, d) and not self.subsumes(d, d2)
                    for d2 in subsumees
                )
            ),
            key=sort_key,
        )
        for p in list(c.parents):
            self._unlink(cid, p)
        for p in mss:
            c.parents.add(p)
            self.concepts[p].children.add(cid)
        for g in mgs:
            for p in mss:
                if p in self.concepts[g].parents:
                    self._unlink(g, p)
            self.concepts[g].parents.add(cid)
            c.children.add(g)
        return (tuple(mss), tuple(mgs))

    # ---------------------------------------------------------------- slots

    def install_slot(
        self, cid: str, relation: str, filler: str, quant: Quantifier, astr_id: str
    ) -> str:
        """Record `cid relation filler` with a supporting a-structure.

        Returns "created", "merged" (support added), or "strengthened"
        (same filler seen again with a stronger quantifier).
        """
        entries = self.concept(cid).slots.setdefault(relation, [])
        for e in entries:
            if e.filler == filler:
                e.more.add(astr_id)
                if quant.rank() > e.quant.rank():
                    e.quant = quant
                    return "strengthened"
                return "merged"
        entries.append(SlotEntry(filler, quant, {astr_id}))
        return "created"

    def slot_entries(self, cid: str, relation: str) -> list[SlotEntry]:
        return self.concept(cid).slots.get(relation, [])

    def mark_object(self, cid: str) -> int:
        """Mark `cid` as an object; a defined concept pulls in its genus and
        restriction fillers too.  Returns how many were newly marked."""
        if cid in self.objects or cid not in self.concepts:
            return 0
        self.objects.add(cid)
        n = 1
        c = self.concepts[cid]
        if c.cf is not None:
            n += self.mark_object(c.cf.genus)
            for r in c.cf.restrictions:
                n += self.mark_object(r.filler)
        return n

    # ---------------------------------------------------------------- check

    def check(self) -> list[str]:
        """Verify store invariants; returns a list of problems (empty = ok)."""
        problems: list[str] = []
        if ROOT not in self.concepts:
            return [f"missing root concept {ROOT}"]
        for cid, c in self.concepts.items():
            for p in c.parents:
                if p not in self.concepts:
                    problems.append(f"{cid}: unknown parent {p}")
                elif cid not in self.concepts[p].children:
                    problems.append(f"{cid}: parent {p} lacks child backlink")
            for ch in c.children:
                if ch not in self.concepts:
                    problems.append(f"{cid}: unknown child {ch}")
                elif cid not in self.concepts[ch].parents:
                    problems.append(f"{cid}: child {ch} lacks parent backlink")
            if cid != ROOT and not c.parents:
                problems.append(f"{cid}: unreachable (no parents)")
            if c.cf is not None:
                try:
                    self._validate_cf(c.cf)
                except OntologyError as e:
                    problems.append(f"{cid}: bad definition: {e}")
            for rel, entries in c.slots.items():
                if not self.relation_declared(rel):
                    problems.append(f"{cid}: slot uses undeclared relation {rel}")
                for e in entries:
                    if e.filler not in self.concepts:
                        problems.append(f"{cid}: slot {rel} filler {e.filler} missing")
                    for aid in e.more:
                        if aid not in self.astructs:
                            problems.append(f"{cid}: slot {rel} cites missing {aid}")
        problems.extend(self._check_acyclic())
        problems.extend(self._check_no_equivalent_defined())
        problems.extend(self._check_astructs())
        for obj in self.objects:
            if obj not in self.concepts:
                problems.append(f"object {obj} is not a concept")
        return problems

    def _check_acyclic(self) -> list[str]:
        color: dict[str, int] = {}  # 0 in-progress, 1 done

        def visit(c: str, trail: list[str]) -> Optional[list[str]]:
            state = color.get(c)
            if state == 1:
                return None
            if state == 0:
                return trail[trail.index(c):] + [c]
            color[c] = 0
            for p in self.concepts[c].parents:
                if p in self.concepts:
                    bad = visit(p, trail + [c])
                    if bad:
                        return bad
            color[c] = 1
            return None

        for cid in self.concepts:
            cycle = visit(cid, [])
            if cycle:
                return [f"cycle: {' -> '.join(cycle)}"]
        return []

    def _check_no_equivalent_defined(self) -> list[str]:
        defined = [c for c in self.concepts.values() if c.cf is not None]
        problems = []
        for i, a in enumerate(defined):
            for b in defined[i + 1:]:
                if self.equivalent(a.id, b.id):
                    problems.append(f"equivalent defined concepts: {a.id}, {b.id}")
        return problems

    def embedded_astructs(self) -> set[str]:
        """Instances that only exist as modifier values of other instances
        (purpose, manner, time... links).  They are stored but carry no
        slots of their own."""
        return {
            value
            for a in self.astructs.values()
            for value in a.modifiers.values()
            if value.startswith("@A")
        }

    def slot_relation(self, role: str, relation: str) -> str:
        """Forward slot relation for one binding: the role itself when it is
        a declared relation (at-loc, ...), the instance relation otherwise."""
        return role if self.relation_declared(role) else relation

    def _check_astructs(self) -> list[str]:
        problems = []
        embedded = self.embedded_astructs()
        for aid, a in self.astructs.items():
            for role, concept, _quant in a.bindings:
                if concept not in self.concepts:
                    problems.append(f"{aid}: binding {role} -> missing {concept}")
            for key, value in a.modifiers.items():
                if value.startswith("@A") and value not in self.astructs:
                    problems.append(f"{aid}: modifier {key} cites missing {value}")
            if aid not in embedded:
                problems.extend(self._check_astruct_slots(aid, a))
        return problems

    def _check_astruct_slots(self, aid: str, a: "AStructure") -> list[str]:
        anchor = a.anchor()
        if anchor is None:
            return []
        problems = []
        _, anchor_concept, _ = anchor
        others = [b for b in a.bindings if b is not anchor]
        # a one-participant instance has no pair to index; nothing to check
        if not others:
            return problems
        for role, concept, _ in others:
            rel = self.slot_relation(role, a.relation)
            fwd = self.slot_entries(anchor_concept, rel)
            if not any(e.filler == concept and aid in e.more for e in fwd):
                problems.append(
                    f"{aid}: missing forward slot {anchor_concept} {rel} {concept}"
                )
            back = self.slot_entries(concept, rel + "%by")
            if not any(e.filler == anchor_concept and aid in e.more for e in back):
                problems.append(
                    f"{aid}: missing inverse slot {concept} {rel}%by {anchor_concept}"
                )
        return problems
