"""Compound nominals: turning a run of item words into one concept.

Pairs of items get meanings from a small schema table over a-priori
categories (habitat x animate -> live-in, and so on).  Items that pair with
nothing fold into the head as a hyphenated primitive subclass; the rest
parameterize the head into a defined concept.  When several modifier
attachments are possible, every combination becomes a candidate and the one
with the most adjacent pairings is preferred.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Optional

from .ontology import CfDefinition, Ontology, Quantifier, RelationRestriction


@dataclass(frozen=True)
class PairSchema:
    cat1: str
    cat2: str
    relation: str
    holder: str  # "second": later item holds the relation; "first": earlier


@dataclass(frozen=True)
class PairMeaning:
    relation: str
    holder: str


class NounGroupError(Exception):
    pass


class PairTable:
    def __init__(self, schemas: Optional[list[PairSchema]] = None):
        self.schemas = schemas or []

    @classmethod
    def load(cls, path: str | Path, onto: Ontology) -> "PairTable":
        schemas = []
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 5 or parts[0] != "pairschema":
                raise NounGroupError(f"{path}:{lineno}: bad schema line")
            _, cat1, cat2, relation, holder = parts
            for cat in (cat1, cat2):
                if cat not in onto:
                    raise NounGroupError(f"{path}:{lineno}: unknown category {cat}")
            if holder not in ("first", "second"):
                raise NounGroupError(f"{path}:{lineno}: bad holder {holder}")
            schemas.append(PairSchema(cat1, cat2, relation, holder))
        return cls(schemas)

    def pair_meaning(self, c1: str, c2: str, onto: Ontology) -> Optional[PairMeaning]:
        """Meaning of modifier c1 against later item c2, first schema wins."""
        for s in self.schemas:
            if onto.is_subclass(c1, s.cat1) and onto.is_subclass(c2, s.cat2):
                return PairMeaning(s.relation, s.holder)
        return None


@dataclass
class NGItem:
    surface: str  # lemma form
    concept: Optional[str]  # None when the word has no sense of its own


def specialize(
    onto: Ontology,
    genus: str,
    restrictions: list[tuple[str, str, Quantifier]],
) -> str:
    """Defined concept for genus + restrictions, reusing an equivalent one."""
    cf = CfDefinition(
        genus,
        tuple(RelationRestriction(r, f, q) for r, f, q in restrictions),
    )
    existing = onto.recognize(cf)
    if existing is not None:
        return existing
    cid = onto.add_concept(cf=cf)
    onto.classify(cid)
    return cid


def hyphenate(onto: Ontology, modifier_surface: str, head_concept: str) -> str:
    """Primitive subclass of the head named by the joined surface forms."""
    cid = f"{modifier_surface}-{head_concept}"
    if cid in onto:
        return cid
    onto.add_concept(cid, parents=[head_concept])
    return cid


def proper_name_concept(onto: Ontology, items: list[NGItem], head: NGItem) -> str:
    """Capitalized or quoted multiword names bypass pairing entirely."""
    cid = "-".join(i.surface for i in items)
    if cid in onto:
        return cid
    parent = head.concept if head.concept else "entity"
    onto.add_concept(cid, parents=[parent])
    return cid


def interpret_noun_group(
    items: list[NGItem],
    onto: Ontology,
    table: PairTable,
    proper: bool = False,
) -> list[str]:
    """Candidate concepts for the item run, best first.

    The head is the last item.  Non-head items either pair with a later item
    (several targets fork the candidate set) or fold into the head as a
    hyphenated subclass.
    """
    if not items:
        raise NounGroupError("empty noun group")
    items = list(items)
    head = items[-1]
    if proper and len(items) > 1:
        return [proper_name_concept(onto, items, head)]
    if head.concept is None:
        raise NounGroupError(f"head word has no sense: {head.surface}")
    if len(items) == 1:
        return [head.concept]

    # two known concepts where one already specializes the other collapse
    # to the specific one (polar bears, once polar-bear exists)
    if len(items) == 2 and items[0].concept is not None:
        a, b = items[0].concept, items[1].concept
        if onto.is_subclass(a, b):
            return [a]
        if onto.is_subclass(b, a):
            return [b]

    # a defined head binds its modifier into the matching restriction:
    # "insect eaters" narrows what eaters ingest to insects
    if (
        len(items) == 2
        and items[0].concept is not None
        and head.concept is not None
        and onto.concept(head.concept).cf is not None
    ):
        bound = genitive_specialize(onto, [head.concept], items[0].concept)
        if bound is not None:
            onto.add_name(bound, "-".join(i.surface for i in items))
            return [bound]

    # fold unpairable modifiers into the next item, rightmost first
    changed = True
    while changed and len(items) > 1:
        changed = False
        for i in range(len(items) - 2, -1, -1):
            c = items[i].concept
            if c is not None and any(
                items[j].concept is not None
                and table.pair_meaning(c, items[j].concept, onto)
                for j in range(i + 1, len(items))
            ):
                continue
            nxt = items[i + 1]
            if nxt.concept is None:
                raise NounGroupError(f"no sense for noun-group item: {nxt.surface}")
            merged = hyphenate(onto, items[i].surface, nxt.concept)
            items[i + 1] = NGItem(f"{items[i].surface}-{nxt.surface}", merged)
            del items[i]
            changed = True
            break

    if len(items) == 1:
        return [items[0].concept]

    # enumerate attachment combinations for the remaining modifiers
    target_lists = []
    for i in range(len(items) - 1):
        targets = [
            j
            for j in range(i + 1, len(items))
            if table.pair_meaning(items[i].concept, items[j].concept, onto)
        ]
        target_lists.append(targets)

    candidates: list[tuple[int, str]] = []
    for combo in product(*target_lists):
        adjacency = sum(1 for i, j in enumerate(combo) if j == i + 1)
        candidates.append((adjacency, _build(items, combo, onto, table)))
    candidates.sort(key=lambda c: -c[0])

    out = []
    for _, cid in candidates:
        if cid not in out:
            out.append(cid)
    if out:
        onto.add_name(out[0], "-".join(i.surface for i in items))
    return out


def _build(
    items: list[NGItem],
    combo: tuple[int, ...],
    onto: Ontology,
    table: PairTable,
) -> str:
    mods_of: dict[int, list[int]] = {}
    for i, j in enumerate(combo):
        mods_of.setdefault(j, []).append(i)

    def resolve(j: int) -> str:
        base = items[j].concept
        assert base is not None
        mods = mods_of.get(j, [])
        if not mods:
            return base
        restrictions = []
        for i in mods:
            meaning = table.pair_meaning(items[i].concept, base, onto)
            assert meaning is not None
            relation = meaning.relation
            if meaning.holder == "first":
                relation += "%by"
            restrictions.append((relation, resolve(i), Quantifier.existential()))
        return specialize(onto, base, restrictions)

    return resolve(len(items) - 1)


def genitive_specialize(
    onto: Ontology,
    head_senses: list[str],
    of_concept: str,
    quant: Optional[Quantifier] = None,
) -> Optional[str]:
    """Specialize a relational head noun by its of-object: the first sense
    with a restriction the object can fill wins, and that restriction's
    filler narrows to the object."""
    for sense in head_senses:
        if sense not in onto:
            continue
        cf = onto.concept(sense).cf
        if cf is None:
            continue
        bound = None
        for r in cf.restrictions:
            if onto.is_subclass(of_concept, r.filler):
                bound = r
                break
        if bound is None:
            continue
        restrictions = [
            (
                r.relation,
                of_concept if r is bound else r.filler,
                quant if (r is bound and quant) else r.quant,
            )
            for r in cf.restrictions
        ]
        return specialize(onto, cf.genus, restrictions)
    return None
