"""Forward inference: addition rules attached to verbal concepts.

After a sentence's instances are in the store, every rule inherited by the
verbal concept that produced each instance is tried against that instance's
bindings.  A firing rule mints a new instance for the derived relation,
carrying over the argument quantifiers and the plain-valued modifiers
(frequency, quantity, time, location) of its source, and stamped with the
rule and source ids.  Derivation is single-step: derived instances do not
feed the rules again.
"""

from __future__ import annotations

from itertools import product

from .ontology import AStructure, Binding, Ontology
from .verbal_concepts import AdditionRule, VerbalConcepts

_CARRIED_MODIFIERS = ("frequency", "quantity", "time", "location")


def infer(
    onto: Ontology, vcs: VerbalConcepts, astructs: list[AStructure]
) -> list[AStructure]:
    """Derived instances for one sentence's worth of stored instances."""
    derived: list[AStructure] = []
    for astr in astructs:
        if astr.vc is None or astr.derived_by:
            continue
        for rule in vcs.inherited_addition_rules(astr.vc):
            derived.extend(_apply_rule(onto, rule, astr))
    return derived


def _apply_rule(
    onto: Ontology, rule: AdditionRule, astr: AStructure
) -> list[AStructure]:
    candidates: list[list[Binding]] = []
    for role, minimum in rule.antecedent:
        matching = [
            b
            for b in astr.bindings
            if b.role == role and onto.is_subclass(b.concept, minimum)
        ]
        if not matching:
            return []
        candidates.append(matching)

    out = []
    for combo in product(*candidates):
        chosen = {binding.role: binding for binding in combo}
        if _blocked(onto, rule, astr, chosen):
            continue
        bindings = tuple(
            Binding(role, chosen[role].concept, chosen[role].quant)
            for role in rule.args
        )
        modifiers = {
            key: value
            for key, value in astr.modifiers.items()
            if key in _CARRIED_MODIFIERS and not value.startswith("@A")
        }
        out.append(
            AStructure(
                onto.new_astruct_id(),
                rule.relation,
                bindings,
                modifiers,
                derived_by=rule.id,
                derived_from=astr.id,
            )
        )
    return out


def _blocked(
    onto: Ontology,
    rule: AdditionRule,
    astr: AStructure,
    chosen: dict[str, Binding],
) -> bool:
    """An 'unless' guard suppresses the rule, except when the 'override'
    condition holds as well (hunting for food still implies eating)."""
    if rule.guard is None:
        return False
    role, minimum = rule.guard
    if not _role_is(onto, astr, chosen, role, minimum):
        return False
    if rule.override is not None:
        over_role, over_min = rule.override
        if _role_is(onto, astr, chosen, over_role, over_min):
            return False
    return True


def _role_is(
    onto: Ontology,
    astr: AStructure,
    chosen: dict[str, Binding],
    role: str,
    minimum: str,
) -> bool:
    if role in chosen:
        return onto.is_subclass(chosen[role].concept, minimum)
    for binding in astr.bindings:
        if binding.role == role and onto.is_subclass(binding.concept, minimum):
            return True
    value = astr.modifiers.get(role, "")
    return (
        bool(value)
        and not value.startswith("@A")
        and value in onto
        and onto.is_subclass(value, minimum)
    )
