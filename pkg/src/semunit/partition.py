"""Statement-unit creation: schema minting and raw-graph partitioning.

Partitioning guarantees the unit law: every input triple ends up in
exactly one statement unit's data graph. Schemas are matched greedily
in specificity order (slot count descending, then class IRI); whatever
no schema claims becomes a single-triple generic unit keyed by its
predicate, so the layer stays fully typed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional
from urllib.parse import quote

from . import vocab
from .errors import NotFoundError, UnitTypeError, ValidationError
from .schemas import (
    PathNode,
    SchemaRegistry,
    StatementSchema,
    Slot,
    build_path_tree,
    validate_instance,
)
from .store import GraphStore
from .terms import (
    Iri,
    Literal,
    NUMERIC_DATATYPES,
    RDF_TYPE,
    Term,
    Triple,
    term_sort_key,
)
from .units import (
    IdMinter,
    ResourceKind,
    SemanticUnit,
    StatementCategory,
    UnitKind,
    UnitMetadata,
    UnitRegistry,
    default_metadata,
)

GENERIC_CLASS_PREFIX = "urn:x-semunit:generic-class:"


def generic_unit_class(predicate: Iri) -> Iri:
    return Iri(GENERIC_CLASS_PREFIX + quote(str(predicate), safe=""))


@dataclass
class SlotBindings:
    """Values for one schema instantiation: subject plus slot terms."""

    subject: Iri
    values: dict[str, list[Term]] = field(default_factory=dict)

    def for_slot(self, name: str) -> list[Term]:
        return self.values.get(name, [])


@dataclass
class PartitionReport:
    units_created: dict[str, int] = field(default_factory=dict)
    generic_units: int = 0
    triples_total: int = 0
    triples_claimed: int = 0
    unmatched_predicates: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "units_created": dict(sorted(self.units_created.items())),
            "generic_units": self.generic_units,
            "triples_total": self.triples_total,
            "triples_claimed": self.triples_claimed,
            "unmatched_predicates": list(self.unmatched_predicates),
        }

    def to_text(self) -> str:
        lines = [
            f"triples: {self.triples_claimed}/{self.triples_total} claimed",
            f"generic units: {self.generic_units}",
        ]
        for cls, count in sorted(self.units_created.items()):
            lines.append(f"  {cls}: {count}")
        if self.unmatched_predicates:
            lines.append("predicates falling back to generic units:")
            for p in self.unmatched_predicates:
                lines.append(f"  {p}")
        return "\n".join(lines)


# -- classification -------------------------------------------------------------

_CATEGORY_BY_KIND = {
    ResourceKind.NAMED_INDIVIDUAL: StatementCategory.ASSERTIONAL,
    ResourceKind.SOME_INSTANCE: StatementCategory.CONTINGENT,
    ResourceKind.MOST_INSTANCES: StatementCategory.PROTOTYPICAL,
    ResourceKind.EVERY_INSTANCE: StatementCategory.UNIVERSAL,
    ResourceKind.ONTOLOGY_CLASS: StatementCategory.UNIVERSAL,
    # statements about units or relations read as plain assertions
    ResourceKind.SEMANTIC_UNIT: StatementCategory.ASSERTIONAL,
    ResourceKind.RELATION: StatementCategory.ASSERTIONAL,
}


def category_for(
    reg: UnitRegistry, subject: Iri, schema: Optional[StatementSchema]
) -> StatementCategory:
    if schema is not None and schema.lexical:
        return StatementCategory.LEXICAL
    return _CATEGORY_BY_KIND[reg.resource_kind(subject)]


def classify_statement(
    reg: UnitRegistry, unit: SemanticUnit, schemas: Optional[SchemaRegistry] = None
) -> StatementCategory:
    """Category per the subject's resource kind; lexical schemas short-circuit."""
    if unit.kind != UnitKind.STATEMENT:
        raise UnitTypeError(f"{unit.gupri} is not a statement unit")
    schema = None
    if schemas is not None and unit.unit_class in schemas:
        schema = schemas.get(unit.unit_class)
    if unit.subject is None:
        raise ValidationError(f"{unit.gupri} has no subject to classify by")
    return category_for(reg, unit.subject, schema)


# -- minting ----------------------------------------------------------------------


def build_instance_triples(
    schema: StatementSchema, bindings: SlotBindings, minter: IdMinter
) -> list[Triple]:
    """Triples for one schema instance; intermediate nodes freshly minted.

    Slots sharing a path prefix share the minted intermediate node, so
    the weight pattern yields one hub carrying value, unit, and kind.
    """
    triples: list[Triple] = []

    def descend(node: PathNode, source: Iri) -> None:
        for predicate in sorted(node.children):
            child = node.children[predicate]
            if child.children:
                hub = minter.mint()
                triples.append(Triple(source, predicate, hub))
                descend(child, hub)
            else:
                for slot in child.slots:
                    for value in bindings.for_slot(slot.name):
                        triples.append(Triple(source, predicate, value))

    descend(build_path_tree(schema.slots), bindings.subject)
    return triples


def check_bindings(
    store: GraphStore,
    reg: UnitRegistry,
    schema: StatementSchema,
    bindings: SlotBindings,
) -> list[str]:
    """Constraint check before any write; returns human-readable problems."""
    problems: list[str] = []
    kind = reg.resource_kind(bindings.subject)
    if schema.subject_kinds and kind not in schema.subject_kinds:
        problems.append(
            f"subject kind {kind.value} not accepted by schema {schema.unit_class}"
        )
    if schema.subject_class is not None:
        typed = store.match(
            subject=bindings.subject, predicate=Iri(RDF_TYPE), object=schema.subject_class
        )
        if not typed:
            problems.append(
                f"subject {bindings.subject} lacks type {schema.subject_class}"
            )
    known = {s.name for s in schema.slots}
    for name in bindings.values:
        if name not in known:
            problems.append(f"unknown slot {name!r}")
    for slot in schema.slots:
        values = bindings.for_slot(slot.name)
        if not slot.cardinality.admits(len(values)):
            limit = "unbounded" if slot.cardinality.max is None else slot.cardinality.max
            problems.append(
                f"slot {slot.name!r} bound {len(values)} time(s), "
                f"expects [{slot.cardinality.min}, {limit}]"
            )
        for value in values:
            problems.extend(_value_problems(store, slot, value))
    return problems


def _value_problems(store: GraphStore, slot: Slot, value: Term) -> list[str]:
    problems = []
    if slot.value_kind == "resource":
        if not isinstance(value, Iri):
            problems.append(f"slot {slot.name!r} expects a resource")
            return problems
        if slot.class_constraint is not None:
            typed = store.match(
                subject=value, predicate=Iri(RDF_TYPE), object=slot.class_constraint
            )
            if not typed:
                problems.append(
                    f"slot {slot.name!r}: {value} lacks type {slot.class_constraint}"
                )
        return problems
    if not isinstance(value, Literal):
        problems.append(f"slot {slot.name!r} expects a literal")
        return problems
    if slot.datatype is not None and value.datatype != slot.datatype:
        problems.append(
            f"slot {slot.name!r} expects datatype {slot.datatype}, got {value.datatype}"
        )
        return problems
    if slot.numeric_range is not None:
        number = value.decimal_value()
        lo, hi = slot.numeric_range
        if number is None or not (lo <= number <= hi):
            problems.append(
                f"slot {slot.name!r}: value {value.lexical!r} outside [{lo}, {hi}]"
            )
    if slot.pattern is not None and re.fullmatch(slot.pattern, value.lexical) is None:
        problems.append(
            f"slot {slot.name!r}: value {value.lexical!r} fails /{slot.pattern}/"
        )
    return problems


def mint_statement_unit(
    store: GraphStore,
    reg: UnitRegistry,
    schema: StatementSchema,
    bindings: SlotBindings,
    negated: bool = False,
    metadata: Optional[UnitMetadata] = None,
    revises: Optional[Iri] = None,
) -> SemanticUnit:
    """Write a fresh statement unit; rejected bindings leave no partial state."""
    if negated and not schema.negatable:
        raise ValidationError(
            f"schema {schema.unit_class} declares no negated label template"
        )
    problems = check_bindings(store, reg, schema, bindings)
    if problems:
        raise ValidationError(
            f"bindings rejected for schema {schema.unit_class}", details=problems
        )
    gupri = reg.minter.mint()
    triples = build_instance_triples(schema, bindings, reg.minter)
    unit = SemanticUnit(
        gupri=gupri,
        unit_class=schema.unit_class,
        kind=UnitKind.STATEMENT,
        metadata=metadata or default_metadata(clock=reg.clock),
        data_graph=gupri,
        subject=bindings.subject,
        schema_ref=schema.gupri,
        logic_framework=schema.logic_framework,
        category=category_for(reg, bindings.subject, schema),
        negated=negated,
    )
    store.add_graph(gupri)
    store.insert_triples(gupri, triples)
    reg.register(unit, revises=revises)
    return unit


def statement_about_unit(
    store: GraphStore,
    reg: UnitRegistry,
    schema: StatementSchema,
    subject_unit: Iri,
    bindings_values: dict[str, list[Term]],
    negated: bool = False,
    metadata: Optional[UnitMetadata] = None,
) -> SemanticUnit:
    """A statement whose subject is another unit's GUPRI."""
    if subject_unit not in reg:
        raise NotFoundError(f"subject unit not registered: {subject_unit}")
    if ResourceKind.SEMANTIC_UNIT not in schema.subject_kinds:
        raise ValidationError(
            f"schema {schema.unit_class} does not accept semantic-unit subjects"
        )
    bindings = SlotBindings(subject=subject_unit, values=bindings_values)
    return mint_statement_unit(store, reg, schema, bindings, negated, metadata)


def mint_generic_unit(
    store: GraphStore,
    reg: UnitRegistry,
    triple: Triple,
    metadata: Optional[UnitMetadata] = None,
) -> SemanticUnit:
    """Single-triple statement unit for data no schema claims."""
    gupri = reg.minter.mint()
    unit = SemanticUnit(
        gupri=gupri,
        unit_class=generic_unit_class(triple.predicate),
        kind=UnitKind.STATEMENT,
        metadata=metadata or default_metadata(clock=reg.clock),
        data_graph=gupri,
        subject=triple.subject,
        category=category_for(reg, triple.subject, None),
        negated=False,
    )
    store.add_graph(gupri)
    store.insert_triples(gupri, [triple])
    reg.register(unit)
    return unit


# -- partitioning -----------------------------------------------------------------


@dataclass
class UnitDraft:
    """A planned statement unit: the triples one schema match claimed."""

    subject: Iri
    triples: frozenset[Triple]
    schema: Optional[StatementSchema] = None
    predicate: Optional[Iri] = None  # generic drafts only

    @property
    def unit_class(self) -> Iri:
        if self.schema is not None:
            return self.schema.unit_class
        return generic_unit_class(self.predicate)


class _Available:
    """Mutable index over the not-yet-claimed triples."""

    def __init__(self, triples):
        self.triples: set[Triple] = set(triples)
        self.by_sp: dict[tuple[Iri, Iri], list[Term]] = {}
        self.by_predicate: dict[Iri, set[Iri]] = {}
        for t in self.triples:
            self.by_sp.setdefault((t.subject, t.predicate), []).append(t.object)
            self.by_predicate.setdefault(t.predicate, set()).add(t.subject)
        for values in self.by_sp.values():
            values.sort(key=term_sort_key)

    def objects(self, subject: Iri, predicate: Iri) -> list[Term]:
        return [
            o
            for o in self.by_sp.get((subject, predicate), [])
            if Triple(subject, predicate, o) in self.triples
        ]

    def claim(self, triples) -> None:
        self.triples -= set(triples)


def _slot_value_ok(slot: Slot, value: Term, raw_types: dict[Iri, set[Iri]]) -> bool:
    if slot.value_kind == "resource":
        if not isinstance(value, Iri):
            return False
        if slot.class_constraint is not None:
            return slot.class_constraint in raw_types.get(value, ())
        return True
    if not isinstance(value, Literal):
        return False
    if slot.datatype is not None and value.datatype != slot.datatype:
        return False
    if slot.numeric_range is not None:
        number = value.decimal_value()
        lo, hi = slot.numeric_range
        if number is None or not (lo <= number <= hi):
            return False
    if slot.pattern is not None and re.fullmatch(slot.pattern, value.lexical) is None:
        return False
    return True


def _try_match(
    schema: StatementSchema,
    subject: Iri,
    avail: _Available,
    raw_types: dict[Iri, set[Iri]],
) -> Optional[set[Triple]]:
    """First complete slot-path assignment for this subject, if any."""
    tree = build_path_tree(schema.slots)

    def solve(node: PathNode, source: Iri) -> Optional[set[Triple]]:
        claimed: set[Triple] = set()
        for predicate in sorted(node.children):
            child = node.children[predicate]
            candidates = avail.objects(source, predicate)
            if child.children:
                # internal edge: first hub node that completes the subtree wins
                chosen = None
                for candidate in candidates:
                    if not isinstance(candidate, Iri):
                        continue
                    sub = solve(child, candidate)
                    if sub is not None:
                        chosen = (candidate, sub)
                        break
                if chosen is None:
                    required = any(s.cardinality.min > 0 for s in _subtree_slots(child))
                    if required:
                        return None
                    continue
                hub, sub = chosen
                claimed.add(Triple(source, predicate, hub))
                claimed |= sub
            else:
                values = [
                    v
                    for v in candidates
                    if all(_slot_value_ok(s, v, raw_types) for s in child.slots)
                ]
                card_min = max((s.cardinality.min for s in child.slots), default=0)
                card_max_values = [
                    s.cardinality.max for s in child.slots if s.cardinality.max is not None
                ]
                card_max = min(card_max_values) if card_max_values else None
                if len(values) < card_min:
                    return None
                take = values if card_max is None else values[:card_max]
                for v in take:
                    claimed.add(Triple(source, predicate, v))
        return claimed

    if schema.subject_class is not None and schema.subject_class not in raw_types.get(
        subject, ()
    ):
        return None
    claimed = solve(tree, subject)
    if claimed is None or not claimed:
        return None
    # a match must bind every required slot
    for slot in schema.slots:
        if _count_slot_values(slot, subject, claimed) < slot.cardinality.min:
            return None
    return claimed


def _subtree_slots(node: PathNode) -> list[Slot]:
    out = list(node.slots)
    for child in node.children.values():
        out.extend(_subtree_slots(child))
    return out


def _count_slot_values(slot: Slot, subject: Iri, claimed: set[Triple]) -> int:
    sources = [subject]
    for predicate in slot.path[:-1]:
        nxt = []
        for s in sources:
            for t in claimed:
                if t.subject == s and t.predicate == predicate and isinstance(t.object, Iri):
                    nxt.append(t.object)
        sources = nxt
    count = 0
    for s in sources:
        for t in claimed:
            if t.subject == s and t.predicate == slot.path[-1]:
                count += 1
    return count


def partition_graph(
    raw, schemas: SchemaRegistry
) -> tuple[list[UnitDraft], PartitionReport]:
    """Split a raw triple set into statement-unit drafts covering it exactly."""
    raw = set(raw)
    report = PartitionReport(triples_total=len(raw))
    avail = _Available(raw)
    raw_types: dict[Iri, set[Iri]] = {}
    for t in raw:
        if t.predicate == Iri(RDF_TYPE) and isinstance(t.object, Iri):
            raw_types.setdefault(t.subject, set()).add(t.object)

    drafts: list[UnitDraft] = []
    for schema in schemas.specificity_order():
        first_predicates = {s.path[0] for s in schema.slots}
        subjects = sorted(
            {
                s
                for p in first_predicates
                for s in avail.by_predicate.get(p, ())
            }
        )
        for subject in subjects:
            while True:
                claimed = _try_match(schema, subject, avail, raw_types)
                if claimed is None:
                    break
                avail.claim(claimed)
                drafts.append(
                    UnitDraft(subject=subject, triples=frozenset(claimed), schema=schema)
                )
                report.units_created[str(schema.unit_class)] = (
                    report.units_created.get(str(schema.unit_class), 0) + 1
                )

    leftover_predicates = sorted({t.predicate for t in avail.triples})
    for t in sorted(avail.triples, key=Triple.sort_key):
        drafts.append(
            UnitDraft(subject=t.subject, triples=frozenset([t]), predicate=t.predicate)
        )
        report.generic_units += 1
    report.unmatched_predicates = [str(p) for p in leftover_predicates]
    report.triples_claimed = sum(len(d.triples) for d in drafts)
    return drafts, report


def materialize_partition(
    store: GraphStore,
    reg: UnitRegistry,
    drafts: list[UnitDraft],
    metadata: Optional[UnitMetadata] = None,
) -> list[SemanticUnit]:
    """Register one statement unit per draft; data graphs hold the claimed triples."""
    units = []
    for draft in drafts:
        gupri = reg.minter.mint()
        schema = draft.schema
        unit = SemanticUnit(
            gupri=gupri,
            unit_class=draft.unit_class,
            kind=UnitKind.STATEMENT,
            metadata=metadata or default_metadata(clock=reg.clock),
            data_graph=gupri,
            subject=draft.subject,
            schema_ref=schema.gupri if schema else None,
            logic_framework=schema.logic_framework if schema else None,
            category=category_for(reg, draft.subject, schema),
            negated=False,
        )
        store.add_graph(gupri)
        store.insert_triples(gupri, sorted(draft.triples, key=Triple.sort_key))
        reg.register(unit)
        units.append(unit)
    return units
