"""Admitting formed instances into long-term memory.

Instances integrate children-first so that an instance linked from a
modifier is settled (kept or folded into an equivalent older one) before
anything referring to it; duplicate detection then works on final link
targets, which keeps re-reading the same text from growing the store.

Only instances that stand on their own get slot entries.  An instance that
exists as the value of another instance's modifier ("to dig out ground
squirrels") describes a linked circumstance, not an asserted fact about its
participants, so it is stored and explains chains but never enters the
slot index that extension queries read.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .interpreter import IsaStatement
from .ontology import AStructure, Ontology


@dataclass
class IntegrationReport:
    kept: list[AStructure] = field(default_factory=list)  # live instances
    created: list[str] = field(default_factory=list)
    merged: list[tuple[str, str]] = field(default_factory=list)  # dropped, kept
    slot_actions: dict[str, int] = field(
        default_factory=lambda: {"created": 0, "merged": 0, "strengthened": 0}
    )
    subclassed: list[tuple[str, str]] = field(default_factory=list)


def integrate(
    onto: Ontology,
    formed: list[AStructure],
    statements: list[IsaStatement] = (),
) -> IntegrationReport:
    report = IntegrationReport()
    linked = {
        value
        for astr in formed
        for value in astr.modifiers.values()
        if value.startswith("@A")
    }
    remap: dict[str, str] = {}
    for astr in reversed(formed):
        astr.modifiers = {
            key: remap.get(value, value) for key, value in astr.modifiers.items()
        }
        existing = _find_duplicate(onto, astr)
        if existing is not None:
            remap[astr.id] = existing.id
            report.merged.append((astr.id, existing.id))
            report.kept.append(existing)
            continue
        onto.astructs[astr.id] = astr
        report.created.append(astr.id)
        report.kept.append(astr)
        _mark_objects(onto, astr)
        if astr.id not in linked:
            _install_slots(onto, astr, report)
    report.kept.reverse()

    for statement in statements:
        _apply_isa(onto, statement, report)
    return report


def _find_duplicate(onto: Ontology, astr: AStructure) -> AStructure | None:
    key = astr.content_key()
    for other in onto.astructs.values():
        if other.content_key() == key:
            return other
    return None


def _mark_objects(onto: Ontology, astr: AStructure) -> None:
    for binding in astr.bindings:
        onto.mark_object(binding.concept)
    for value in astr.modifiers.values():
        if not value.startswith("@A") and value in onto:
            onto.mark_object(value)


def _install_slots(
    onto: Ontology, astr: AStructure, report: IntegrationReport
) -> None:
    anchor = astr.anchor()
    if anchor is None:
        return
    for binding in astr.bindings:
        if binding is anchor:
            continue
        relation = onto.slot_relation(binding.role, astr.relation)
        action = onto.install_slot(
            anchor.concept, relation, binding.concept, binding.quant, astr.id
        )
        report.slot_actions[action] += 1
        action = onto.install_slot(
            binding.concept, relation + "%by", anchor.concept, anchor.quant, astr.id
        )
        report.slot_actions[action] += 1


def _apply_isa(
    onto: Ontology, statement: IsaStatement, report: IntegrationReport
) -> None:
    """Copular class membership: link the subject under the class."""
    parent = statement.parent
    for subject in statement.subjects:
        if subject == parent or onto.is_subclass(subject, parent):
            continue
        onto.concept(subject).parents.add(parent)
        onto.concept(parent).children.add(subject)
        report.subclassed.append((subject, parent))
