"""Knowledge-base file format: canonical dump and load.

One fact per UTF-8 line, ``#`` starts a comment.  Sections appear in a
fixed order and every section is sorted (machine ids numerically first,
then names), so a dump is byte-stable and diffs cleanly:

    relation <name>
    concept <id> isa <parent>[,<parent>...]
    defined <id> genus <g> [rel <relation> <filler> <quant>]...
    name <id> <extra-name>...
    slot <concept> <relation> <filler> <quant> [astruct <id>...]
    astruct <id> <relation> <role>=<concept>:<quant>...
            [mod <key>=<value>]... [derived-by <rule> from <id>]

The root concept is implicit.  Defined concepts store only their genus and
restrictions; their parents and children are rebuilt by re-running the
classifier at load time.  The same grammar serves both seed ontologies
(which use only the first four line kinds) and full KB dumps.
"""

from __future__ import annotations

from pathlib import Path

from .ontology import (
    ROOT,
    AStructure,
    Binding,
    CfDefinition,
    Ontology,
    OntologyError,
    Quantifier,
    RelationRestriction,
    SlotEntry,
    sort_key,
)


class KBFormatError(Exception):
    def __init__(self, message: str, lineno: int = 0):
        if lineno:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


# ------------------------------------------------------------------- dump


def dumps(onto: Ontology) -> str:
    lines: list[str] = []
    for rel in sorted(onto.relations):
        lines.append(f"relation {rel}")
    ordered = sorted(onto.concepts, key=sort_key)
    for cid in ordered:
        c = onto.concepts[cid]
        if c.cf is not None:
            parts = [f"defined {cid} genus {c.cf.genus}"]
            for r in c.cf.restrictions:
                parts.append(f"rel {r.relation} {r.filler} {r.quant.token()}")
            lines.append(" ".join(parts))
        elif cid != ROOT:
            parents = ",".join(sorted(c.parents, key=sort_key))
            lines.append(f"concept {cid} isa {parents}")
    for cid in ordered:
        extra = sorted(onto.concepts[cid].names - {cid})
        if extra:
            lines.append(f"name {cid} {' '.join(extra)}")
    for cid in ordered:
        c = onto.concepts[cid]
        for rel in sorted(c.slots):
            entries = sorted(c.slots[rel], key=lambda e: sort_key(e.filler))
            for e in entries:
                line = f"slot {cid} {rel} {e.filler} {e.quant.token()}"
                if e.more:
                    line += " astruct " + " ".join(sorted(e.more, key=sort_key))
                lines.append(line)
    for aid in sorted(onto.astructs, key=sort_key):
        lines.append(_astruct_line(onto.astructs[aid]))
    return "\n".join(lines) + "\n"


def _astruct_line(a: AStructure) -> str:
    parts = [f"astruct {a.id} {a.relation}"]
    for b in a.bindings:
        parts.append(f"{b.role}={b.concept}:{b.quant.token()}")
    for key in sorted(a.modifiers):
        parts.append(f"mod {key}={a.modifiers[key]}")
    if a.derived_by:
        parts.append(f"derived-by {a.derived_by} from {a.derived_from}")
    return " ".join(parts)


def dump(onto: Ontology, path: str | Path) -> None:
    Path(path).write_text(dumps(onto), encoding="utf-8")


# ------------------------------------------------------------------- load


def loads(text: str, onto: Ontology | None = None) -> Ontology:
    onto = onto if onto is not None else Ontology()
    primitives: list[tuple[int, str, list[str]]] = []
    defined: list[tuple[int, str, CfDefinition]] = []
    names: list[tuple[int, str, list[str]]] = []
    slots: list[tuple[int, list[str]]] = []
    astructs: list[tuple[int, list[str]]] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "relation" and len(tok) == 2:
            onto.declare_relation(tok[1])
        elif kind == "concept" and len(tok) == 4 and tok[2] == "isa":
            primitives.append((lineno, tok[1], tok[3].split(",")))
        elif kind == "defined":
            defined.append((lineno, tok[1], _parse_cf(tok, lineno)))
        elif kind == "name" and len(tok) >= 3:
            names.append((lineno, tok[1], tok[2:]))
        elif kind == "slot":
            slots.append((lineno, tok))
        elif kind == "astruct":
            astructs.append((lineno, tok))
        else:
            raise KBFormatError(f"unrecognized line: {line}", lineno)

    _create_primitives(onto, primitives)
    _create_defined(onto, defined)
    for lineno, cid, extra in names:
        if cid not in onto:
            raise KBFormatError(f"name for unknown concept {cid}", lineno)
        for n in extra:
            onto.add_name(cid, n)
    for lineno, tok in slots:
        _load_slot(onto, tok, lineno)
    for lineno, tok in astructs:
        a = _parse_astruct(tok, lineno)
        onto.astructs[a.id] = a
    recompute_objects(onto)
    return onto


def load(path: str | Path, onto: Ontology | None = None) -> Ontology:
    return loads(Path(path).read_text(encoding="utf-8"), onto)


def _parse_cf(tok: list[str], lineno: int) -> CfDefinition:
    # defined <id> genus <g> [rel <relation> <filler> <quant>]...
    if len(tok) < 4 or tok[2] != "genus" or (len(tok) - 4) % 4 != 0:
        raise KBFormatError("malformed defined line", lineno)
    restrictions = []
    for i in range(4, len(tok), 4):
        if tok[i] != "rel":
            raise KBFormatError("expected rel keyword", lineno)
        rel, filler, quant = tok[i + 1], tok[i + 2], tok[i + 3]
        restrictions.append(
            RelationRestriction(rel, filler, Quantifier.from_token(quant))
        )
    return CfDefinition(tok[3], tuple(restrictions))


def _create_primitives(
    onto: Ontology, primitives: list[tuple[int, str, list[str]]]
) -> None:
    pending = list(primitives)
    while pending:
        progressed = False
        still = []
        for lineno, cid, parents in pending:
            if all(p in onto for p in parents):
                try:
                    onto.add_concept(cid, parents=parents)
                except OntologyError as e:
                    raise KBFormatError(f"concept {cid}: {e}", lineno) from e
                progressed = True
            else:
                still.append((lineno, cid, parents))
        if not progressed:
            lineno, cid, parents = still[0]
            missing = [p for p in parents if p not in onto]
            raise KBFormatError(
                f"concept {cid}: unknown parent {missing[0]}", lineno
            )
        pending = still


def _create_defined(
    onto: Ontology, defined: list[tuple[int, str, CfDefinition]]
) -> None:
    """Add definitions (fixpoint: genus or fillers may be later defined
    ids), then let the classifier rebuild every definition's position."""
    pending = list(defined)
    while pending:
        progressed = False
        still = []
        for lineno, cid, cf in pending:
            refs = [cf.genus] + [r.filler for r in cf.restrictions]
            if all(r in onto for r in refs):
                try:
                    onto.add_concept(cid, cf=cf)
                except OntologyError as e:
                    raise KBFormatError(f"defined {cid}: {e}", lineno) from e
                progressed = True
            else:
                still.append((lineno, cid, cf))
        if not progressed:
            lineno, cid, cf = still[0]
            missing = [r for r in [cf.genus] + [r.filler for r in cf.restrictions]
                       if r not in onto]
            raise KBFormatError(f"defined {cid}: unknown concept {missing[0]}", lineno)
        pending = still
    for _, cid, _ in defined:
        onto.classify(cid)


def _load_slot(onto: Ontology, tok: list[str], lineno: int) -> None:
    # slot <concept> <relation> <filler> <quant> [astruct <id>...]
    if len(tok) < 5:
        raise KBFormatError("malformed slot line", lineno)
    cid, rel, filler, quant = tok[1], tok[2], tok[3], tok[4]
    more = tok[6:] if len(tok) > 5 and tok[5] == "astruct" else []
    if len(tok) > 5 and tok[5] != "astruct":
        raise KBFormatError("expected astruct keyword", lineno)
    if cid not in onto:
        raise KBFormatError(f"slot on unknown concept {cid}", lineno)
    if filler not in onto:
        raise KBFormatError(f"slot filler unknown: {filler}", lineno)
    entry = SlotEntry(filler, Quantifier.from_token(quant), set(more))
    onto.concepts[cid].slots.setdefault(rel, []).append(entry)


def _parse_astruct(tok: list[str], lineno: int) -> AStructure:
    if len(tok) < 3:
        raise KBFormatError("malformed astruct line", lineno)
    aid, relation = tok[1], tok[2]
    bindings: list[Binding] = []
    modifiers: dict[str, str] = {}
    derived_by = ""
    derived_from = ""
    i = 3
    while i < len(tok):
        t = tok[i]
        if t == "mod":
            key, _, value = tok[i + 1].partition("=")
            modifiers[key] = value
            i += 2
        elif t == "derived-by":
            if i + 3 > len(tok) or tok[i + 2] != "from":
                raise KBFormatError("malformed derived-by suffix", lineno)
            derived_by, derived_from = tok[i + 1], tok[i + 3]
            i += 4
        elif "=" in t:
            role, _, rest = t.partition("=")
            concept, _, quant = rest.partition(":")
            bindings.append(
                Binding(role, concept, Quantifier.from_token(quant))
            )
            i += 1
        else:
            raise KBFormatError(f"unexpected token {t}", lineno)
    return AStructure(aid, relation, tuple(bindings), modifiers, derived_by, derived_from)


# ---------------------------------------------------------------- objects


def recompute_objects(onto: Ontology) -> None:
    """Objects are the concepts a-structures touch: every binding and every
    concept-valued modifier (mark_object folds in the genus and restriction
    fillers of defined participants)."""
    onto.objects.clear()
    for a in onto.astructs.values():
        for _, concept, _ in a.bindings:
            onto.mark_object(concept)
        for value in a.modifiers.values():
            if not value.startswith("@A") and value in onto:
                onto.mark_object(value)
