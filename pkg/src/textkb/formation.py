"""Building relation instances from clause meanings.

A clause meaning with several members in a role (coordination, enumeration)
expands into one relation instance per member combination.  Linked events in
modifier position (purpose, manner, time, causality) form a single instance
each — the link is one token — carrying all members as extra bindings.  The
linking instance always takes its id before the instances it links to, so
identifiers read top-down.

Nothing here is registered; integration decides what enters the store.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .interpreter import Interpretation, IsaStatement, SentenceMeaning
from .ontology import AStructure, Binding, Ontology


@dataclass
class FormationResult:
    astructs: list[AStructure] = field(default_factory=list)
    statements: list[IsaStatement] = field(default_factory=list)


def form_sentence(onto: Ontology, meaning: SentenceMeaning) -> FormationResult:
    out = FormationResult()
    for clause in meaning.clauses:
        if isinstance(clause, IsaStatement):
            out.statements.append(clause)
        else:
            _form_event(onto, clause, out.astructs)
    return out


def _form_event(
    onto: Ontology, itp: Interpretation, out: list[AStructure], linked: bool = False
) -> list[str]:
    """Form instances for one event; returns the ids of its main instances."""
    roles = list(itp.roles.items())
    if linked:
        bindings = tuple(
            Binding(role, member, filler.quant)
            for role, filler in roles
            for member in filler.members
        )
        combos = [bindings]
    else:
        combos = [
            tuple(
                Binding(role, member, filler.quant)
                for (role, filler), member in zip(roles, picks)
            )
            for picks in product(*(filler.members for _, filler in roles))
        ]

    mains = [
        AStructure(onto.new_astruct_id(), itp.relation, bindings, vc=itp.vc)
        for bindings in combos
    ]
    out.extend(mains)

    modifiers: dict[str, str] = {}
    for key, value in itp.modifiers.items():
        if isinstance(value, Interpretation):
            modifiers[key] = _form_event(onto, value, out, linked=True)[0]
        else:
            modifiers[key] = value
    for main in mains:
        main.modifiers = dict(modifiers)

    for companion in itp.companions:
        _form_event(onto, companion, out)
    return [main.id for main in mains]
