"""Read-side services: profiling, navigation trees, zoom, facets,
hot-spots, and tabular projection.

Everything here is a snapshot read; every count these functions surface
is checked against brute-force recounts in the test suite.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from decimal import Decimal
from enum import Enum
from typing import Optional

from . import vocab
from .errors import NotFoundError, UnitTypeError
from .schemas import (
    SchemaRegistry,
    StatementSchema,
    display_label,
    generic_label,
    render_label,
    walk_instance,
)
from .store import GraphStore
from .terms import Iri, Literal, RDF_TYPE, Triple
from .units import SemanticUnit, UnitKind, UnitRegistry

TIME_BUCKETS = {
    "7d": 7,
    "30d": 30,
    "365d": 365,
    "3650d": 3650,
    "all": None,
}


# -- unit labels -------------------------------------------------------------------


def unit_label(
    reg: UnitRegistry, store: GraphStore, schemas: SchemaRegistry, gupri: Iri
) -> str:
    """The one labeling path for every unit kind."""
    unit = reg.get(gupri)
    if unit.kind == UnitKind.STATEMENT:
        schema = schemas.maybe(unit.unit_class)
        if schema is not None:
            return render_label(schema, unit, store)
        return generic_label(unit, store)
    if unit.kind == UnitKind.QUESTION:
        classes = sorted(
            {s["schema_class"].rsplit("/", 1)[-1] for s in (unit.question or {}).get("sources", [])}
        )
        return f"question over {', '.join(classes)}" if classes else "question"
    if unit.subject is not None:
        return f"{display_label(store, unit.subject)} [{unit.kind.value}]"
    return f"[{unit.kind.value}] {len(unit.members)} member(s)"


# -- profiling ---------------------------------------------------------------------


@dataclass
class NumericDistribution:
    count: int
    minimum: Decimal
    maximum: Decimal
    mean: Decimal

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "min": str(self.minimum),
            "max": str(self.maximum),
            "mean": str(self.mean),
        }


@dataclass
class FrequencyDistribution:
    top: list[tuple[str, int]]

    def to_dict(self) -> dict:
        return {"top": [{"value": v, "count": c} for v, c in self.top]}


@dataclass
class ProfileSummary:
    class_instance_counts: dict[Iri, int]
    unit_class_counts: dict[Iri, int]
    slot_distributions: dict[tuple[Iri, str], object]
    label_frequencies: list[tuple[str, int]]

    def to_dict(self) -> dict:
        return {
            "class_instances": {str(k): v for k, v in sorted(self.class_instance_counts.items())},
            "unit_classes": {str(k): v for k, v in sorted(self.unit_class_counts.items())},
            "slots": {
                f"{cls}::{slot}": dist.to_dict()
                for (cls, slot), dist in sorted(self.slot_distributions.items())
            },
            "label_frequencies": [
                {"label": label, "count": count} for label, count in self.label_frequencies
            ],
        }


def data_graph_quads(store: GraphStore):
    return [q for q in store.all_quads() if q.graph != vocab.LAYER_GRAPH]


def profile(
    store: GraphStore,
    reg: UnitRegistry,
    schemas: SchemaRegistry,
    top_k: int = 25,
) -> ProfileSummary:
    """Content summary: instances per class, units per class, slot stats."""
    instances: dict[Iri, set[Iri]] = {}
    mention_counts: dict[Iri, int] = {}
    for quad in data_graph_quads(store):
        t = quad.triple
        if t.predicate == Iri(RDF_TYPE) and isinstance(t.object, Iri):
            instances.setdefault(t.object, set()).add(t.subject)
        mention_counts[t.subject] = mention_counts.get(t.subject, 0) + 1
        if isinstance(t.object, Iri):
            mention_counts[t.object] = mention_counts.get(t.object, 0) + 1

    unit_class_counts: dict[Iri, int] = {}
    for unit in reg.all_units():
        unit_class_counts[unit.unit_class] = unit_class_counts.get(unit.unit_class, 0) + 1

    slot_distributions: dict[tuple[Iri, str], object] = {}
    for schema in schemas.all_schemas():
        units = [
            u for u in reg.by_class(schema.unit_class) if u.kind == UnitKind.STATEMENT
        ]
        if not units:
            continue
        for slot in schema.slots:
            values = []
            for unit in units:
                walk = walk_instance(
                    schema, unit.subject, store.graph_triples(unit.data_graph)
                )
                values.extend(walk.bindings.get(slot.name, []))
            if not values:
                continue
            numbers = [
                v.decimal_value()
                for v in values
                if isinstance(v, Literal) and v.decimal_value() is not None
            ]
            if slot.value_kind == "literal" and numbers and len(numbers) == len(values):
                slot_distributions[(schema.unit_class, slot.name)] = NumericDistribution(
                    count=len(numbers),
                    minimum=min(numbers),
                    maximum=max(numbers),
                    mean=sum(numbers) / Decimal(len(numbers)),
                )
            else:
                counts: dict[str, int] = {}
                for v in values:
                    key = display_label(store, v)
                    counts[key] = counts.get(key, 0) + 1
                top = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_k]
                slot_distributions[(schema.unit_class, slot.name)] = FrequencyDistribution(top)

    label_counts: dict[str, int] = {}
    for resource, count in mention_counts.items():
        label = display_label(store, resource)
        label_counts[label] = label_counts.get(label, 0) + count
    label_frequencies = sorted(label_counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_k]

    return ProfileSummary(
        class_instance_counts={cls: len(subjects) for cls, subjects in instances.items()},
        unit_class_counts=unit_class_counts,
        slot_distributions=slot_distributions,
        label_frequencies=label_frequencies,
    )


# -- navigation tree ----------------------------------------------------------------


@dataclass
class NavNode:
    gupri: Iri
    label: str
    kind: str
    revisit: bool = False
    children: list["NavNode"] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "gupri": str(self.gupri),
            "label": self.label,
            "kind": self.kind,
            "revisit": self.revisit,
            "children": [c.to_dict() for c in self.children],
        }


@dataclass
class NavTree:
    root: NavNode

    def to_dict(self) -> dict:
        return self.root.to_dict()


def navigation_tree(
    reg: UnitRegistry,
    store: GraphStore,
    schemas: SchemaRegistry,
    root_gupri: Iri,
    link_filter: Optional[set[Iri]] = None,
    include_statements: bool = False,
) -> NavTree:
    """Folder-style expansion of a (granular) item group unit.

    Children follow directed linking statement units inside the group;
    shared children repeat under each parent; a cycle is cut at the
    revisited node and marked.
    """
    from .compound import item_link_edges

    group = reg.get(root_gupri)
    if group.kind not in (UnitKind.ITEM_GROUP, UnitKind.GRANULAR_ITEM_GROUP):
        raise UnitTypeError(
            f"navigation root must be an item group or granular item group, "
            f"got {group.kind.value}"
        )
    items = [g for g in group.members if reg.get(g).kind == UnitKind.ITEM]
    item_set = set(items)
    edges = item_link_edges(reg)
    children: dict[Iri, list[tuple[Iri, Iri]]] = {g: [] for g in items}
    has_parent: set[Iri] = set()
    for (a, b), linking in edges.items():
        if a in item_set and b in item_set:
            kept = [
                link
                for link in linking
                if link_filter is None or reg.get(link).unit_class in link_filter
            ]
            if kept:
                children[a].append((b, kept[0]))
                has_parent.add(b)

    def label_of(gupri: Iri) -> str:
        return unit_label(reg, store, schemas, gupri)

    def expand(item: Iri, path: frozenset[Iri]) -> NavNode:
        node = NavNode(gupri=item, label=label_of(item), kind="item")
        if item in path:
            node.revisit = True
            return node
        next_path = path | {item}
        for child, _link in sorted(children.get(item, []), key=lambda x: str(x[0])):
            node.children.append(expand(child, next_path))
        if include_statements:
            for member in reg.get(item).members:
                statement = reg.get(member)
                if link_filter is not None and statement.unit_class not in link_filter:
                    continue
                node.children.append(
                    NavNode(gupri=member, label=label_of(member), kind="statement")
                )
        return node

    roots = sorted(g for g in items if g not in has_parent) or sorted(items)[:1]
    root_node = NavNode(gupri=group.gupri, label=label_of(group.gupri), kind=group.kind.value)
    for item in roots:
        root_node.children.append(expand(item, frozenset()))
    return NavTree(root=root_node)


# -- zoom --------------------------------------------------------------------------


class ZoomLevel(str, Enum):
    TRIPLES = "triples"
    STATEMENTS = "statements"
    ITEMS = "items"
    ITEM_GROUPS = "item-groups"
    WHOLE_GRAPH = "whole-graph"


_LEVEL_INDEX = {
    ZoomLevel.TRIPLES: 0,
    ZoomLevel.STATEMENTS: 1,
    ZoomLevel.ITEMS: 2,
    ZoomLevel.ITEM_GROUPS: 3,
    ZoomLevel.WHOLE_GRAPH: 4,
}

KIND_LEVELS = {
    UnitKind.STATEMENT: ZoomLevel.STATEMENTS,
    UnitKind.QUESTION: ZoomLevel.STATEMENTS,
    UnitKind.ITEM: ZoomLevel.ITEMS,
    UnitKind.GRANULARITY_TREE: ZoomLevel.ITEMS,
    UnitKind.ITEM_GROUP: ZoomLevel.ITEM_GROUPS,
    UnitKind.GRANULAR_ITEM_GROUP: ZoomLevel.ITEM_GROUPS,
    UnitKind.CONTEXT: ZoomLevel.ITEM_GROUPS,
    UnitKind.STANDARD_INFORMATION: ZoomLevel.ITEM_GROUPS,
    UnitKind.LOGICAL_ARGUMENT: ZoomLevel.ITEM_GROUPS,
    UnitKind.DATASET: ZoomLevel.ITEM_GROUPS,
}


def unit_level(unit: SemanticUnit) -> ZoomLevel:
    return KIND_LEVELS[unit.kind]


def _descendants(reg: UnitRegistry, gupri: Iri) -> set[Iri]:
    out: set[Iri] = set()
    stack = [gupri]
    while stack:
        current = stack.pop()
        for member in reg.get(current).members:
            if member not in out:
                out.add(member)
                stack.append(member)
    return out


def _ancestors(reg: UnitRegistry, gupri: Iri) -> set[Iri]:
    out: set[Iri] = set()
    stack = [gupri]
    while stack:
        current = stack.pop()
        for container in reg.containers_of(current):
            if container not in out:
                out.add(container)
                stack.append(container)
    return out


def zoom(
    reg: UnitRegistry,
    store: GraphStore,
    gupri: Iri,
    target: ZoomLevel,
):
    """Constituents (zoom in) or containers (zoom out) at the target level."""
    if target == ZoomLevel.WHOLE_GRAPH:
        return [vocab.STORE_IRI]
    if gupri == vocab.STORE_IRI:
        # zooming in from the top: everything at the target level
        if target == ZoomLevel.TRIPLES:
            return sorted(
                {q.triple for q in store.all_quads() if q.graph != vocab.LAYER_GRAPH},
                key=Triple.sort_key,
            )
        return sorted(
            u.gupri
            for u in reg.all_units()
            if u.kind != UnitKind.QUESTION and unit_level(u) == target
        )
    unit = reg.maybe(gupri)
    if unit is None:
        return _zoom_resource(reg, store, gupri, target)
    current = _LEVEL_INDEX[unit_level(unit)]
    wanted = _LEVEL_INDEX[target]
    if wanted == current:
        return [gupri]
    if target == ZoomLevel.TRIPLES:
        return sorted(reg.merged_data_graph(gupri), key=Triple.sort_key)
    if wanted < current:
        pool = _descendants(reg, gupri)
    else:
        pool = _ancestors(reg, gupri)
    return sorted(
        g for g in pool if _LEVEL_INDEX[unit_level(reg.get(g))] == wanted
    )


def _zoom_resource(reg: UnitRegistry, store: GraphStore, resource: Iri, target: ZoomLevel):
    containing = reg.units_containing(resource)
    if target == ZoomLevel.TRIPLES:
        quads = [q for q in store.match(subject=resource) if q.graph != vocab.LAYER_GRAPH]
        quads += [
            q
            for q in store.match(object=resource)
            if q.graph != vocab.LAYER_GRAPH
        ]
        triples = {q.triple for q in quads}
        if not triples and not containing:
            raise NotFoundError(f"unknown unit or resource: {resource}")
        return sorted(triples, key=Triple.sort_key)
    out = []
    for kind, gupris in containing.items():
        if KIND_LEVELS.get(kind) == target:
            out.extend(gupris)
    if not out and not containing:
        raise NotFoundError(f"unknown unit or resource: {resource}")
    return sorted(out)


# -- facets -------------------------------------------------------------------------


@dataclass
class FacetSummary:
    unit_classes: dict[str, int] = field(default_factory=dict)
    categories: dict[str, int] = field(default_factory=dict)
    negated: dict[str, int] = field(default_factory=dict)
    created: dict[str, int] = field(default_factory=dict)
    slot_ranges: dict[str, dict] = field(default_factory=dict)
    slot_classes: dict[str, dict[str, int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "unit_classes": self.unit_classes,
            "categories": self.categories,
            "negated": self.negated,
            "created": self.created,
            "slot_ranges": self.slot_ranges,
            "slot_classes": self.slot_classes,
        }


def _bucket_for(created: str, now: datetime) -> list[str]:
    stamp = datetime.fromisoformat(created)
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    age = now - stamp
    buckets = ["all"]
    for name, days in TIME_BUCKETS.items():
        if days is not None and age <= timedelta(days=days):
            buckets.append(name)
    return buckets


def facet_options(
    reg: UnitRegistry,
    store: GraphStore,
    schemas: SchemaRegistry,
    units: list[Iri],
    now: Optional[datetime] = None,
) -> FacetSummary:
    """Composable filter menu for a unit list, with counts."""
    now = now or datetime.now(timezone.utc)
    summary = FacetSummary()
    for gupri in units:
        unit = reg.get(gupri)
        cls = str(unit.unit_class)
        summary.unit_classes[cls] = summary.unit_classes.get(cls, 0) + 1
        if unit.category is not None:
            cat = unit.category.value
            summary.categories[cat] = summary.categories.get(cat, 0) + 1
        if unit.kind == UnitKind.STATEMENT:
            flag = "true" if unit.negated else "false"
            summary.negated[flag] = summary.negated.get(flag, 0) + 1
        for bucket in _bucket_for(unit.metadata.created, now):
            summary.created[bucket] = summary.created.get(bucket, 0) + 1
        schema = schemas.maybe(unit.unit_class)
        if schema is None or unit.kind != UnitKind.STATEMENT:
            continue
        walk = walk_instance(schema, unit.subject, store.graph_triples(unit.data_graph))
        for slot in schema.slots:
            if not slot.display:
                continue
            key = f"{unit.unit_class}::{slot.name}"
            for value in walk.bindings.get(slot.name, []):
                if isinstance(value, Literal):
                    number = value.decimal_value()
                    if number is None:
                        continue
                    entry = summary.slot_ranges.setdefault(
                        key, {"min": str(number), "max": str(number)}
                    )
                    entry["min"] = str(min(Decimal(entry["min"]), number))
                    entry["max"] = str(max(Decimal(entry["max"]), number))
                else:
                    classes = [
                        q.object
                        for q in store.match(subject=value, predicate=Iri(RDF_TYPE))
                        if isinstance(q.object, Iri)
                    ]
                    for cls_iri in classes:
                        bucket = summary.slot_classes.setdefault(key, {})
                        bucket[str(cls_iri)] = bucket.get(str(cls_iri), 0) + 1
    return summary


@dataclass(frozen=True)
class FacetFilter:
    facet: str  # unit_class | category | negated | created | slot_range | slot_class
    value: object
    slot_key: Optional[str] = None


def apply_facets(
    reg: UnitRegistry,
    store: GraphStore,
    schemas: SchemaRegistry,
    units: list[Iri],
    filters: list[FacetFilter],
    now: Optional[datetime] = None,
) -> list[Iri]:
    """Filters compose; the result is independent of application order."""
    now = now or datetime.now(timezone.utc)
    out = list(units)
    for flt in filters:
        out = [g for g in out if _facet_match(reg, store, schemas, g, flt, now)]
    return out


def _facet_match(
    reg: UnitRegistry,
    store: GraphStore,
    schemas: SchemaRegistry,
    gupri: Iri,
    flt: FacetFilter,
    now: datetime,
) -> bool:
    unit = reg.get(gupri)
    if flt.facet == "unit_class":
        return str(unit.unit_class) == str(flt.value)
    if flt.facet == "category":
        return unit.category is not None and unit.category.value == flt.value
    if flt.facet == "negated":
        return unit.kind == UnitKind.STATEMENT and unit.negated == bool(flt.value)
    if flt.facet == "created":
        return flt.value in _bucket_for(unit.metadata.created, now)
    schema = schemas.maybe(unit.unit_class)
    if schema is None or unit.kind != UnitKind.STATEMENT:
        return False
    slot_name = flt.slot_key.split("::", 1)[1] if flt.slot_key else None
    if slot_name is None:
        return False
    walk = walk_instance(schema, unit.subject, store.graph_triples(unit.data_graph))
    values = walk.bindings.get(slot_name, [])
    if flt.facet == "slot_range":
        lo, hi = Decimal(str(flt.value[0])), Decimal(str(flt.value[1]))
        for value in values:
            if isinstance(value, Literal):
                number = value.decimal_value()
                if number is not None and lo <= number <= hi:
                    return True
        return False
    if flt.facet == "slot_class":
        for value in values:
            if isinstance(value, Iri) and store.match(
                subject=value, predicate=Iri(RDF_TYPE), object=Iri(str(flt.value))
            ):
                return True
        return False
    return False


# -- hot spots ----------------------------------------------------------------------


def hotspots(
    reg: UnitRegistry,
    store: GraphStore,
    window: str = "all",
    now: Optional[datetime] = None,
) -> list[tuple[Iri, int]]:
    """Classes ranked by units touched in the window that mention an instance.

    A unit counts for class C when its merged data graph mentions a
    resource typed C anywhere in the data layer; ties break by IRI.
    """
    now = now or datetime.now(timezone.utc)
    days = TIME_BUCKETS.get(window)
    if window not in TIME_BUCKETS:
        raise NotFoundError(f"unknown time window {window!r}; use {sorted(TIME_BUCKETS)}")

    types: dict[Iri, set[Iri]] = {}
    for quad in data_graph_quads(store):
        t = quad.triple
        if t.predicate == Iri(RDF_TYPE) and isinstance(t.object, Iri):
            types.setdefault(t.subject, set()).add(t.object)

    counts: dict[Iri, int] = {}
    for unit in reg.all_units():
        if unit.kind == UnitKind.QUESTION:
            continue
        if days is not None:
            touched = max(unit.metadata.created, unit.metadata.last_updated)
            stamp = datetime.fromisoformat(touched)
            if stamp.tzinfo is None:
                stamp = stamp.replace(tzinfo=timezone.utc)
            if now - stamp > timedelta(days=days):
                continue
        mentioned: set[Iri] = set()
        for triple in reg.merged_data_graph(unit.gupri):
            for r in triple.resources():
                mentioned.add(r)
        classes = set()
        for resource in mentioned:
            classes |= types.get(resource, set())
        for cls in classes:
            counts[cls] = counts.get(cls, 0) + 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], str(kv[0])))


# -- tables -------------------------------------------------------------------------


@dataclass
class Table:
    columns: list[str]
    rows: list[list[str]]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buffer.getvalue()

    def to_dict(self) -> dict:
        return {"columns": self.columns, "rows": self.rows}


def tabulate_statements(
    reg: UnitRegistry,
    store: GraphStore,
    schemas: SchemaRegistry,
    units: list[Iri],
) -> Table:
    """Statement units of one class: subject plus display slots as columns."""
    if not units:
        return Table(columns=["subject"], rows=[])
    resolved = [reg.get(g) for g in units]
    classes = {u.unit_class for u in resolved}
    if len(classes) > 1:
        raise UnitTypeError(
            f"statement table needs a single unit class, got {sorted(map(str, classes))}"
        )
    schema = schemas.maybe(resolved[0].unit_class)
    if schema is None:
        raise UnitTypeError(
            f"no schema registered for {resolved[0].unit_class}; cannot tabulate"
        )
    display_slots = [s.name for s in schema.slots if s.display]
    columns = ["subject"] + display_slots
    rows = []
    for unit in sorted(resolved, key=lambda u: (str(u.subject), str(u.gupri))):
        if unit.kind != UnitKind.STATEMENT:
            raise UnitTypeError(f"{unit.gupri} is not a statement unit")
        walk = walk_instance(schema, unit.subject, store.graph_triples(unit.data_graph))
        row = [display_label(store, unit.subject)]
        for name in display_slots:
            values = walk.bindings.get(name, [])
            row.append(", ".join(display_label(store, v) for v in values))
        rows.append(row)
    return Table(columns=columns, rows=rows)


def tabulate_items(
    reg: UnitRegistry,
    store: GraphStore,
    schemas: SchemaRegistry,
    items: list[Iri],
) -> Table:
    """Item units aligned: statement classes as rows, items as columns."""
    resolved = [reg.get(g) for g in items]
    for unit in resolved:
        if unit.kind != UnitKind.ITEM:
            raise UnitTypeError(f"{unit.gupri} is not an item unit")
    subject_classes = set()
    for unit in resolved:
        classes = {
            q.object
            for q in store.match(subject=unit.subject, predicate=Iri(RDF_TYPE))
            if isinstance(q.object, Iri) and q.graph != vocab.LAYER_GRAPH
        }
        subject_classes.add(frozenset(classes))
    if len(subject_classes) > 1:
        raise UnitTypeError("item table needs items sharing the subject class")
    ordered = sorted(resolved, key=lambda u: str(u.subject))
    statement_classes = sorted(
        {str(reg.get(m).unit_class) for u in ordered for m in u.members}
    )
    columns = ["statement class"] + [display_label(store, u.subject) for u in ordered]
    rows = []
    for cls in statement_classes:
        row = [cls]
        for unit in ordered:
            cells = []
            for member in unit.members:
                statement = reg.get(member)
                if str(statement.unit_class) == cls:
                    schema = schemas.maybe(statement.unit_class)
                    if schema is not None:
                        cells.append(render_label(schema, statement, store))
                    else:
                        cells.append(generic_label(statement, store))
            row.append("; ".join(sorted(cells)))
        rows.append(row)
    return Table(columns=columns, rows=rows)
