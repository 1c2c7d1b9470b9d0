"""Derives compound units from the registered statement-unit layer.

All builders are idempotent: derived units take content-addressed
GUPRIs keyed by their defining anchor (item: subject; tree: relation
class plus root; group/context: smallest contained anchor), so a
rebuild after edits updates membership instead of minting duplicates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import vocab
from .errors import IntegrityError, NotFoundError, UnitTypeError, ValidationError
from .schemas import SchemaRegistry, StandardInformationDefinition
from .store import GraphStore
from .terms import Iri, Quad, RDF_TYPE, Triple
from .units import (
    IdMinter,
    ResourceKind,
    SemanticUnit,
    UnitKind,
    UnitMetadata,
    UnitRegistry,
    default_metadata,
)


def _register_or_update(
    reg: UnitRegistry, unit: SemanticUnit
) -> SemanticUnit:
    existing = reg.maybe(unit.gupri)
    if existing is None:
        return reg.register(unit)
    return reg.update_members(unit.gupri, unit.members)


def _metadata(reg: UnitRegistry, metadata: Optional[UnitMetadata]) -> UnitMetadata:
    return metadata or default_metadata(clock=reg.clock)


# -- item units -------------------------------------------------------------------


def build_item_units(
    reg: UnitRegistry, metadata: Optional[UnitMetadata] = None
) -> list[SemanticUnit]:
    """One item unit per distinct subject resource with statement units.

    Statements about other semantic units stay out: their subjects are
    units, not domain resources.
    """
    groups: dict[Iri, list[Iri]] = {}
    for unit in reg.by_kind(UnitKind.STATEMENT):
        if unit.subject is None:
            continue
        if reg.resource_kind(unit.subject) == ResourceKind.SEMANTIC_UNIT:
            continue
        groups.setdefault(unit.subject, []).append(unit.gupri)
    out = []
    for subject in sorted(groups):
        members = sorted(groups[subject])
        gupri = IdMinter.stable("item", str(subject))
        unit = SemanticUnit(
            gupri=gupri,
            unit_class=vocab.ITEM_UNIT,
            kind=UnitKind.ITEM,
            metadata=_metadata(reg, metadata),
            members=members,
            subject=subject,
        )
        out.append(_register_or_update(reg, unit))
    return out


# -- item groups ------------------------------------------------------------------


def item_link_edges(reg: UnitRegistry) -> dict[tuple[Iri, Iri], list[Iri]]:
    """Directed item-to-item edges via linking statement units.

    Edge (A, B) when a statement unit of item A has B's subject among
    the object resources of its data graph; values are the linking units.
    """
    items = reg.by_kind(UnitKind.ITEM)
    by_subject = {item.subject: item for item in items}
    edges: dict[tuple[Iri, Iri], list[Iri]] = {}
    for item in items:
        for member in item.members:
            statement = reg.get(member)
            if statement.data_graph is None:
                continue
            for triple in reg.store.graph_triples(statement.data_graph):
                obj = triple.object
                if not isinstance(obj, Iri) or obj == item.subject:
                    continue
                target = by_subject.get(obj)
                if target is not None and target.gupri != item.gupri:
                    edges.setdefault((item.gupri, target.gupri), []).append(member)
    return {k: sorted(set(v)) for k, v in edges.items()}


def build_item_group_units(
    reg: UnitRegistry, metadata: Optional[UnitMetadata] = None
) -> list[SemanticUnit]:
    """Weakly-connected components of the item linkage graph, size >= 2."""
    items = [u.gupri for u in reg.by_kind(UnitKind.ITEM)]
    neighbors: dict[Iri, set[Iri]] = {g: set() for g in items}
    for (a, b) in item_link_edges(reg):
        neighbors[a].add(b)
        neighbors[b].add(a)
    seen: set[Iri] = set()
    out = []
    for start in sorted(items):
        if start in seen:
            continue
        component = _flood(start, neighbors)
        seen |= component
        if len(component) < 2:
            continue
        members = sorted(component)
        anchor = min(str(reg.get(g).subject) for g in component)
        unit = SemanticUnit(
            gupri=IdMinter.stable("item-group", anchor),
            unit_class=vocab.ITEM_GROUP_UNIT,
            kind=UnitKind.ITEM_GROUP,
            metadata=_metadata(reg, metadata),
            members=members,
        )
        out.append(_register_or_update(reg, unit))
    return out


def _flood(start: Iri, neighbors: dict[Iri, set[Iri]]) -> set[Iri]:
    component = {start}
    frontier = [start]
    while frontier:
        current = frontier.pop()
        for nxt in neighbors.get(current, ()):
            if nxt not in component:
                component.add(nxt)
                frontier.append(nxt)
    return component


# -- granularity trees ------------------------------------------------------------


@dataclass
class TreeDiagnostic:
    units: list[Iri]
    reason: str  # "cycle" | "multiple parents" | "multiple roots" | "too small"


@dataclass
class TreeBuildResult:
    units: list[SemanticUnit] = field(default_factory=list)
    diagnostics: list[TreeDiagnostic] = field(default_factory=list)


def relation_edges(reg: UnitRegistry, relation_class: Iri) -> dict[Iri, tuple[Iri, Iri]]:
    """statement unit -> (subject, object) for non-negated units of the class."""
    edges = {}
    for unit in reg.by_class(relation_class):
        if unit.negated or unit.data_graph is None or unit.subject is None:
            continue
        objects = sorted(
            {
                t.object
                for t in reg.store.graph_triples(unit.data_graph)
                if isinstance(t.object, Iri) and t.object != unit.subject
            }
        )
        if len(objects) == 1:
            edges[unit.gupri] = (unit.subject, objects[0])
    return edges


def build_granularity_tree_units(
    reg: UnitRegistry,
    perspective,
    metadata: Optional[UnitMetadata] = None,
) -> TreeBuildResult:
    """Tree units for each interlinked set of partial-order statements.

    Components that are not trees (cycles, shared children, several
    roots) are skipped and reported in the diagnostics, as are single
    statements: a tree needs at least two.
    """
    edges = relation_edges(reg, perspective.relation_class)
    # connect statement units sharing a resource endpoint
    touch: dict[Iri, set[Iri]] = {}
    for gupri, (s, o) in edges.items():
        touch.setdefault(s, set()).add(gupri)
        touch.setdefault(o, set()).add(gupri)
    neighbors: dict[Iri, set[Iri]] = {g: set() for g in edges}
    for units in touch.values():
        for a in units:
            neighbors[a] |= units - {a}
    result = TreeBuildResult()
    seen: set[Iri] = set()
    for start in sorted(edges):
        if start in seen:
            continue
        component = _flood(start, neighbors)
        seen |= component
        members = sorted(component)
        if len(members) < 2:
            result.diagnostics.append(TreeDiagnostic(members, "too small"))
            continue
        reason = _tree_violation({g: edges[g] for g in members})
        if reason is not None:
            result.diagnostics.append(TreeDiagnostic(members, reason))
            continue
        parents = {o for (_, o) in (edges[g] for g in members)}
        subjects = {s for (s, _) in (edges[g] for g in members)}
        root = sorted(subjects - parents)[0]
        unit = SemanticUnit(
            gupri=IdMinter.stable(
                "gtree", f"{perspective.relation_class}|{root}"
            ),
            unit_class=vocab.GRANULARITY_TREE_UNIT,
            kind=UnitKind.GRANULARITY_TREE,
            metadata=_metadata(reg, metadata),
            members=members,
            subject=root,
        )
        result.units.append(_register_or_update(reg, unit))
    return result


def _tree_violation(edges: dict[Iri, tuple[Iri, Iri]]) -> Optional[str]:
    children: dict[Iri, set[Iri]] = {}
    parent_count: dict[Iri, int] = {}
    nodes: set[Iri] = set()
    for (s, o) in edges.values():
        children.setdefault(s, set()).add(o)
        parent_count[o] = parent_count.get(o, 0) + 1
        nodes.add(s)
        nodes.add(o)
    if any(count > 1 for count in parent_count.values()):
        return "multiple parents"
    roots = [n for n in nodes if n not in parent_count]
    if not roots:
        return "cycle"
    if len(roots) > 1:
        return "multiple roots"
    # acyclicity: walk down from the root; a revisit is a cycle
    seen = set()
    stack = [roots[0]]
    while stack:
        current = stack.pop()
        if current in seen:
            return "cycle"
        seen.add(current)
        stack.extend(children.get(current, ()))
    if seen != nodes:
        return "cycle"
    return None


def tree_resources(reg: UnitRegistry, tree_unit: SemanticUnit) -> list[Iri]:
    resources: set[Iri] = set()
    for member in tree_unit.members:
        unit = reg.get(member)
        if unit.subject is not None:
            resources.add(unit.subject)
        for t in reg.store.graph_triples(unit.data_graph):
            if isinstance(t.object, Iri):
                resources.add(t.object)
    return sorted(resources)


@dataclass
class GranularGroupResult:
    unit: SemanticUnit
    missing_items: list[Iri] = field(default_factory=list)


def build_granular_item_group(
    reg: UnitRegistry,
    tree_gupri: Iri,
    metadata: Optional[UnitMetadata] = None,
) -> GranularGroupResult:
    """Tree unit plus the item units of every resource the tree spans."""
    tree = reg.get(tree_gupri)
    if tree.kind != UnitKind.GRANULARITY_TREE:
        raise UnitTypeError(f"{tree_gupri} is not a granularity tree unit")
    items_by_subject = {
        u.subject: u.gupri for u in reg.by_kind(UnitKind.ITEM) if u.subject
    }
    members = [tree.gupri]
    missing = []
    for resource in tree_resources(reg, tree):
        item = items_by_subject.get(resource)
        if item is None:
            missing.append(resource)
        else:
            members.append(item)
    unit = SemanticUnit(
        gupri=IdMinter.stable("gig", str(tree.gupri)),
        unit_class=vocab.GRANULAR_ITEM_GROUP_UNIT,
        kind=UnitKind.GRANULAR_ITEM_GROUP,
        metadata=_metadata(reg, metadata),
        members=members,
        subject=tree.subject,
    )
    return GranularGroupResult(
        unit=_register_or_update(reg, unit), missing_items=missing
    )


# -- context units ----------------------------------------------------------------


def is_about_unit(unit: SemanticUnit, schemas: Optional[SchemaRegistry]) -> bool:
    """True for statements whose schema or predicate is the aboutness relation."""
    if unit.kind != UnitKind.STATEMENT:
        return False
    if schemas is not None and unit.unit_class in schemas:
        schema = schemas.get(unit.unit_class)
        return any(vocab.IS_ABOUT in slot.path for slot in schema.slots)
    if str(unit.unit_class).startswith("urn:x-semunit:generic-class:"):
        from urllib.parse import unquote

        predicate = unquote(str(unit.unit_class).rsplit(":", 1)[1])
        return predicate == str(vocab.IS_ABOUT)
    return False


def build_context_units(
    reg: UnitRegistry,
    schemas: Optional[SchemaRegistry] = None,
    metadata: Optional[UnitMetadata] = None,
) -> list[SemanticUnit]:
    """Connected components of the data graph after dropping aboutness units.

    Connectivity runs over instance-level resources: predicates,
    literals, class objects of instance-of triples, and resources
    declared as class-like kinds do not join frames of reference.
    """
    class_kinds = {
        ResourceKind.ONTOLOGY_CLASS,
        ResourceKind.EVERY_INSTANCE,
        ResourceKind.MOST_INSTANCES,
    }

    def eligible(resource: Iri, type_objects: set[Iri]) -> bool:
        if resource in type_objects:
            return False
        return reg.resource_kind(resource) not in class_kinds

    parent: dict[Iri, Iri] = {}

    def find(x: Iri) -> Iri:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: Iri, b: Iri) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    unit_nodes: dict[Iri, list[Iri]] = {}
    for unit in reg.by_kind(UnitKind.STATEMENT):
        if is_about_unit(unit, schemas):
            continue
        triples = reg.store.graph_triples(unit.data_graph)
        type_objects = {
            t.object
            for t in triples
            if t.predicate == Iri(RDF_TYPE) and isinstance(t.object, Iri)
        }
        nodes = []
        for t in triples:
            for r in (t.subject,) + (
                (t.object,) if isinstance(t.object, Iri) else ()
            ):
                if eligible(r, type_objects):
                    nodes.append(r)
        for n in nodes:
            parent.setdefault(n, n)
        for a, b in zip(nodes, nodes[1:]):
            union(a, b)
        unit_nodes[unit.gupri] = nodes

    components: dict[Iri, list[Iri]] = {}
    isolated: list[Iri] = []
    for gupri, nodes in unit_nodes.items():
        if not nodes:
            isolated.append(gupri)
            continue
        components.setdefault(find(nodes[0]), []).append(gupri)

    out = []
    for root in sorted(components):
        members = sorted(components[root])
        anchor = min(str(n) for g in members for n in unit_nodes[g])
        unit = SemanticUnit(
            gupri=IdMinter.stable("context", anchor),
            unit_class=vocab.CONTEXT_UNIT,
            kind=UnitKind.CONTEXT,
            metadata=_metadata(reg, metadata),
            members=members,
        )
        out.append(_register_or_update(reg, unit))
    for gupri in sorted(isolated):
        unit = SemanticUnit(
            gupri=IdMinter.stable("context", str(gupri)),
            unit_class=vocab.CONTEXT_UNIT,
            kind=UnitKind.CONTEXT,
            metadata=_metadata(reg, metadata),
            members=[gupri],
        )
        out.append(_register_or_update(reg, unit))
    return out


# -- standard information ----------------------------------------------------------


def statement_class_counts(reg: UnitRegistry, members: Iterable[Iri]) -> dict[Iri, int]:
    """Statement units per class over the full membership closure."""
    counts: dict[Iri, int] = {}
    seen: set[Iri] = set()
    stack = list(members)
    while stack:
        gupri = stack.pop()
        if gupri in seen:
            continue
        seen.add(gupri)
        unit = reg.get(gupri)
        if unit.kind == UnitKind.STATEMENT:
            counts[unit.unit_class] = counts.get(unit.unit_class, 0) + 1
        stack.extend(unit.members)
    return counts


def make_standard_information_unit(
    reg: UnitRegistry,
    definition: StandardInformationDefinition,
    members: list[Iri],
    metadata: Optional[UnitMetadata] = None,
) -> SemanticUnit:
    """Register iff the members satisfy every required class min-count."""
    counts = statement_class_counts(reg, members)
    gaps = []
    for cls, minimum in sorted(definition.required_statement_classes.items()):
        have = counts.get(cls, 0)
        if have < minimum:
            gaps.append(f"{cls}: need {minimum}, have {have}")
    if gaps:
        raise ValidationError(
            f"members do not complete {definition.label or definition.gupri}",
            details=gaps,
        )
    unit = SemanticUnit(
        gupri=reg.minter.mint(),
        unit_class=definition.gupri,
        kind=UnitKind.STANDARD_INFORMATION,
        metadata=_metadata(reg, metadata),
        members=list(members),
    )
    return reg.register(unit)


# -- logical arguments ---------------------------------------------------------------

ARGUMENT_CLASSES = {
    "deduction": vocab.DEDUCTION_UNIT,
    "induction": vocab.INDUCTION_UNIT,
    "abduction": vocab.ABDUCTION_UNIT,
}


def make_logical_argument_unit(
    reg: UnitRegistry,
    premise1: Iri,
    premise2: Iri,
    conclusion: Iri,
    kind: str,
    metadata: Optional[UnitMetadata] = None,
) -> SemanticUnit:
    """Two premises and a conclusion; roles recorded in the layer."""
    if kind not in ARGUMENT_CLASSES:
        raise ValidationError(
            f"argument kind must be one of {sorted(ARGUMENT_CLASSES)}, got {kind!r}"
        )
    for gupri in (premise1, premise2, conclusion):
        member = reg.get(gupri)
        if member.kind != UnitKind.STATEMENT:
            raise UnitTypeError(f"argument member {gupri} is not a statement unit")
    unit = SemanticUnit(
        gupri=reg.minter.mint(),
        unit_class=ARGUMENT_CLASSES[kind],
        kind=UnitKind.LOGICAL_ARGUMENT,
        metadata=_metadata(reg, metadata),
        members=[premise1, premise2, conclusion],
    )
    registered = reg.register(unit)
    layer = vocab.LAYER_GRAPH
    reg.store.insert(Quad(Triple(unit.gupri, vocab.HAS_PREMISE, premise1), layer))
    reg.store.insert(Quad(Triple(unit.gupri, vocab.HAS_PREMISE, premise2), layer))
    reg.store.insert(Quad(Triple(unit.gupri, vocab.HAS_CONCLUSION, conclusion), layer))
    return registered


# -- dataset units ---------------------------------------------------------------------


def make_dataset_unit(
    reg: UnitRegistry,
    ordered_members: list[Iri],
    metadata: Optional[UnitMetadata] = None,
) -> SemanticUnit:
    """User-defined ordered collection; order is preserved exactly."""
    if not ordered_members:
        raise IntegrityError("dataset unit needs at least one member")
    unit = SemanticUnit(
        gupri=reg.minter.mint(),
        unit_class=vocab.DATASET_UNIT,
        kind=UnitKind.DATASET,
        metadata=_metadata(reg, metadata),
        members=list(ordered_members),
    )
    return reg.register(unit)
