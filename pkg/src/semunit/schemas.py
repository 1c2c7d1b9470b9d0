"""Statement-unit class definitions: shapes, validation, and display.

A schema fixes, for one statement-unit class, the subject constraints,
the slot paths that make up an instance's data graph, and the two
display templates (dynamic text label, mind-map pattern) that decouple
what users see from what the store holds. Schemas are immutable after
registration and load from a YAML key-value tree (see data/schemas/).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Callable, Optional

import yaml

from . import vocab
from .errors import FormatError, NotFoundError, ValidationError
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
from .units import ResourceKind, SemanticUnit, UnitKind

_PLACEHOLDER = re.compile(r"\$\{([^}]+)\}")
SUBJECT_SLOT = "subject"


@dataclass(frozen=True)
class Cardinality:
    min: int = 1
    max: Optional[int] = 1  # None = unbounded

    def __post_init__(self) -> None:
        if self.min < 0:
            raise FormatError("cardinality min must be >= 0")
        if self.max is not None and self.max < self.min:
            raise FormatError("cardinality min exceeds max")

    def admits(self, count: int) -> bool:
        if count < self.min:
            return False
        return self.max is None or count <= self.max


@dataclass(frozen=True)
class Slot:
    name: str
    path: tuple[Iri, ...]
    value_kind: str  # "resource" | "literal"
    class_constraint: Optional[Iri] = None
    datatype: Optional[Iri] = None
    numeric_range: Optional[tuple[Decimal, Decimal]] = None
    pattern: Optional[str] = None
    cardinality: Cardinality = field(default_factory=Cardinality)
    display: bool = True

    def __post_init__(self) -> None:
        if not self.path:
            raise FormatError(f"slot {self.name!r} has an empty path")
        if self.value_kind not in ("resource", "literal"):
            raise FormatError(f"slot {self.name!r}: kind must be resource or literal")
        if self.value_kind == "literal" and self.class_constraint is not None:
            raise FormatError(f"slot {self.name!r}: literal slots take no class constraint")
        if self.numeric_range is not None:
            if self.value_kind != "literal":
                raise FormatError(f"slot {self.name!r}: range applies to literal slots only")
            if self.datatype is None or str(self.datatype) not in NUMERIC_DATATYPES:
                raise FormatError(f"slot {self.name!r}: range requires a numeric datatype")
            lo, hi = self.numeric_range
            if lo > hi:
                raise FormatError(f"slot {self.name!r}: malformed range [{lo}, {hi}]")
        if self.pattern is not None:
            try:
                re.compile(self.pattern)
            except re.error as exc:
                raise FormatError(f"slot {self.name!r}: bad pattern: {exc}") from exc


@dataclass(frozen=True)
class DisplayEdge:
    source: str  # slot name or "subject"
    label: str
    target: str


@dataclass
class StatementSchema:
    gupri: Iri
    unit_class: Iri
    description: str
    slots: list[Slot]
    label_template: str
    subject_kinds: frozenset[ResourceKind] = frozenset({ResourceKind.NAMED_INDIVIDUAL})
    subject_class: Optional[Iri] = None
    negated_label_template: Optional[str] = None
    mindmap_template: list[DisplayEdge] = field(default_factory=list)
    lexical: bool = False
    logic_framework: Optional[str] = None

    @property
    def negatable(self) -> bool:
        return self.negated_label_template is not None

    def slot(self, name: str) -> Slot:
        for s in self.slots:
            if s.name == name:
                return s
        raise NotFoundError(f"schema {self.unit_class} has no slot {name!r}")

    def slot_names(self) -> list[str]:
        return [s.name for s in self.slots]

    def validate_templates(self) -> None:
        for a in self.slots:
            for b in self.slots:
                if a is not b and len(a.path) < len(b.path) and b.path[: len(a.path)] == a.path:
                    raise FormatError(
                        f"slot {a.name!r} path is a prefix of slot {b.name!r} path; "
                        f"bind the shared node through separate slots instead "
                        f"(schema {self.unit_class})"
                    )
        display = {s.name for s in self.slots if s.display}
        declared = {s.name for s in self.slots}
        for template in filter(None, (self.label_template, self.negated_label_template)):
            for ref in _PLACEHOLDER.findall(template):
                if ref == SUBJECT_SLOT:
                    continue
                if ref not in declared:
                    raise FormatError(
                        f"template references undeclared slot {ref!r} "
                        f"(schema {self.unit_class})"
                    )
                if ref not in display:
                    raise FormatError(
                        f"template references non-display slot {ref!r} "
                        f"(schema {self.unit_class})"
                    )
        for edge in self.mindmap_template:
            for endpoint in (edge.source, edge.target):
                if endpoint == SUBJECT_SLOT:
                    continue
                if endpoint not in declared:
                    raise FormatError(
                        f"mind-map references undeclared slot {endpoint!r} "
                        f"(schema {self.unit_class})"
                    )
                if endpoint not in display:
                    raise FormatError(
                        f"mind-map references non-display slot {endpoint!r} "
                        f"(schema {self.unit_class})"
                    )
        templated = set()
        for template in filter(None, (self.label_template, self.negated_label_template)):
            templated.update(_PLACEHOLDER.findall(template))
        for edge in self.mindmap_template:
            templated.update((edge.source, edge.target))
        missing = display - templated
        if missing:
            raise FormatError(
                f"display slots absent from every template: {sorted(missing)} "
                f"(schema {self.unit_class})"
            )


# -- path tree -----------------------------------------------------------------


@dataclass
class PathNode:
    children: dict[Iri, "PathNode"] = field(default_factory=dict)
    slots: list[Slot] = field(default_factory=list)


def build_path_tree(slots: list[Slot]) -> PathNode:
    """Prefix tree over slot paths; slots sharing a prefix share nodes."""
    root = PathNode()
    for slot in slots:
        node = root
        for predicate in slot.path[:-1]:
            node = node.children.setdefault(predicate, PathNode())
        leaf = node.children.setdefault(slot.path[-1], PathNode())
        leaf.slots.append(slot)
    return root


@dataclass
class GraphWalk:
    """Result of walking a schema's path tree over one data graph."""

    bindings: dict[str, list[Term]]
    visited: set[Triple]
    intermediates: dict[tuple[Iri, ...], list[Iri]]  # path prefix -> nodes


def walk_instance(schema: StatementSchema, subject: Iri, triples: set[Triple]) -> GraphWalk:
    by_sp: dict[tuple[Iri, Iri], list[Term]] = {}
    for t in triples:
        by_sp.setdefault((t.subject, t.predicate), []).append(t.object)
    for values in by_sp.values():
        values.sort(key=term_sort_key)

    bindings: dict[str, list[Term]] = {s.name: [] for s in schema.slots}
    visited: set[Triple] = set()
    intermediates: dict[tuple[Iri, ...], list[Iri]] = {}

    def descend(node: PathNode, sources: list[Iri], prefix: tuple[Iri, ...]) -> None:
        for predicate, child in node.children.items():
            next_sources: list[Iri] = []
            for src in sources:
                for obj in by_sp.get((src, predicate), []):
                    visited.add(Triple(src, predicate, obj))
                    for slot in child.slots:
                        bindings[slot.name].append(obj)
                    if child.children:
                        if isinstance(obj, Iri):
                            next_sources.append(obj)
            if child.children:
                key = prefix + (predicate,)
                intermediates.setdefault(key, []).extend(next_sources)
                descend(child, next_sources, key)

    descend(build_path_tree(schema.slots), [subject], ())
    return GraphWalk(bindings=bindings, visited=visited, intermediates=intermediates)


# -- validation ------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    slot: Optional[str]
    kind: str  # missing-slot | cardinality | class | datatype | range | pattern | kind | stray | subject
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, slot: Optional[str], kind: str, message: str) -> None:
        self.violations.append(Violation(slot, kind, message))

    def summary(self) -> list[str]:
        return [f"{v.kind}: {v.message}" for v in self.violations]


def validate_instance(
    store: GraphStore,
    schema: StatementSchema,
    unit: SemanticUnit,
    resource_kind: Optional[Callable[[Iri], ResourceKind]] = None,
) -> ValidationReport:
    """Check one statement unit against its schema; violations, not errors."""
    report = ValidationReport()
    if unit.kind != UnitKind.STATEMENT or unit.data_graph is None:
        report.add(None, "subject", "unit is not a statement unit with a data graph")
        return report
    if unit.subject is None:
        report.add(None, "subject", "statement unit has no subject")
        return report
    triples = store.graph_triples(unit.data_graph)
    if resource_kind is not None and schema.subject_kinds:
        kind = resource_kind(unit.subject)
        if kind not in schema.subject_kinds:
            report.add(
                SUBJECT_SLOT,
                "kind",
                f"subject kind {kind.value} not accepted "
                f"(expects {sorted(k.value for k in schema.subject_kinds)})",
            )
    if schema.subject_class is not None:
        if not _has_type(store, unit.subject, schema.subject_class):
            report.add(
                SUBJECT_SLOT,
                "class",
                f"subject {unit.subject} lacks type {schema.subject_class}",
            )
    walk = walk_instance(schema, unit.subject, triples)
    for slot in schema.slots:
        values = walk.bindings[slot.name]
        if not slot.cardinality.admits(len(values)):
            limit = "unbounded" if slot.cardinality.max is None else slot.cardinality.max
            report.add(
                slot.name,
                "cardinality" if values else "missing-slot",
                f"slot {slot.name!r} bound {len(values)} time(s), "
                f"expects [{slot.cardinality.min}, {limit}]",
            )
        for value in values:
            _check_value(store, slot, value, report)
    stray = triples - walk.visited
    for t in sorted(stray, key=Triple.sort_key):
        report.add(
            None,
            "stray",
            f"triple not covered by any slot path: "
            f"{t.subject} {t.predicate} {t.object}",
        )
    return report


def _check_value(store: GraphStore, slot: Slot, value: Term, report: ValidationReport) -> None:
    if slot.value_kind == "resource":
        if not isinstance(value, Iri):
            report.add(slot.name, "kind", f"slot {slot.name!r} expects a resource")
            return
        if slot.class_constraint is not None and not _has_type(
            store, value, slot.class_constraint
        ):
            report.add(
                slot.name,
                "class",
                f"value {value} lacks required type {slot.class_constraint}",
            )
        return
    if not isinstance(value, Literal):
        report.add(slot.name, "kind", f"slot {slot.name!r} expects a literal")
        return
    if slot.datatype is not None and value.datatype != slot.datatype:
        report.add(
            slot.name,
            "datatype",
            f"slot {slot.name!r} expects datatype {slot.datatype}, got {value.datatype}",
        )
        return
    if slot.datatype is not None and str(slot.datatype) in NUMERIC_DATATYPES:
        number = value.decimal_value()
        if number is None:
            report.add(
                slot.name, "datatype", f"value {value.lexical!r} is not numeric"
            )
            return
        if slot.numeric_range is not None:
            lo, hi = slot.numeric_range
            if not (lo <= number <= hi):
                report.add(
                    slot.name,
                    "range",
                    f"value {value.lexical} outside [{lo}, {hi}]",
                )
    if slot.pattern is not None and re.fullmatch(slot.pattern, value.lexical) is None:
        report.add(
            slot.name,
            "pattern",
            f"value {value.lexical!r} does not match /{slot.pattern}/",
        )


def _has_type(store: GraphStore, resource: Iri, cls: Iri) -> bool:
    return bool(store.match(subject=resource, predicate=Iri(RDF_TYPE), object=cls))


# -- display ---------------------------------------------------------------------


def display_label(store: GraphStore, term: Term) -> str:
    """Human label: name annotation, else preferred label, else local name."""
    if isinstance(term, Literal):
        return term.lexical
    for predicate in (vocab.NAME_ANNOTATION, vocab.PREF_LABEL):
        quads = store.match(subject=term, predicate=predicate)
        literals = sorted(
            (q.object.lexical for q in quads if isinstance(q.object, Literal))
        )
        if literals:
            return literals[0]
    return term.local_name


class RenderError(ValidationError):
    pass


def render_label(
    schema: StatementSchema, unit: SemanticUnit, store: GraphStore
) -> str:
    """Fill the dynamic-label template from the unit's data graph."""
    template = schema.label_template
    if unit.negated:
        if schema.negated_label_template is None:
            raise RenderError(
                f"schema {schema.unit_class} has no negated label template"
            )
        template = schema.negated_label_template
    walk = walk_instance(schema, unit.subject, store.graph_triples(unit.data_graph))

    def substitute(match: re.Match) -> str:
        ref = match.group(1)
        if ref == SUBJECT_SLOT:
            return display_label(store, unit.subject)
        values = walk.bindings.get(ref)
        if values is None:
            raise RenderError(f"template names unknown slot {ref!r}")
        if not values:
            raise RenderError(f"no value bound for slot {ref!r}")
        return ", ".join(display_label(store, v) for v in values)

    return _PLACEHOLDER.sub(substitute, template)


@dataclass
class MindMapNode:
    id: str
    display_label: str
    resource: Optional[Iri] = None


@dataclass
class MindMapEdge:
    source: str
    target: str
    label: str


@dataclass
class MindMapGraph:
    nodes: list[MindMapNode] = field(default_factory=list)
    edges: list[MindMapEdge] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "id": n.id,
                    "label": n.display_label,
                    "resource": str(n.resource) if n.resource else None,
                }
                for n in self.nodes
            ],
            "edges": [
                {"from": e.source, "to": e.target, "label": e.label} for e in self.edges
            ],
        }


def render_mindmap(
    schema: StatementSchema, unit: SemanticUnit, store: GraphStore
) -> MindMapGraph:
    """Mind-map render: display-bound values only, machine triples omitted."""
    walk = walk_instance(schema, unit.subject, store.graph_triples(unit.data_graph))
    graph = MindMapGraph()
    node_ids: dict[str, list[str]] = {}

    def ensure_nodes(ref: str) -> list[str]:
        if ref in node_ids:
            return node_ids[ref]
        if ref == SUBJECT_SLOT:
            graph.nodes.append(
                MindMapNode(
                    id=SUBJECT_SLOT,
                    display_label=display_label(store, unit.subject),
                    resource=unit.subject,
                )
            )
            node_ids[ref] = [SUBJECT_SLOT]
            return node_ids[ref]
        values = walk.bindings.get(ref)
        if values is None:
            raise RenderError(f"mind-map names unknown slot {ref!r}")
        if not values:
            raise RenderError(f"no value bound for slot {ref!r}")
        ids = []
        for i, value in enumerate(values):
            node_id = ref if len(values) == 1 else f"{ref}:{i}"
            graph.nodes.append(
                MindMapNode(
                    id=node_id,
                    display_label=display_label(store, value),
                    resource=value if isinstance(value, Iri) else None,
                )
            )
            ids.append(node_id)
        node_ids[ref] = ids
        return ids

    for edge in schema.mindmap_template:
        label = edge.label
        if unit.negated:
            label = f"not: {label}"
        for src in ensure_nodes(edge.source):
            for dst in ensure_nodes(edge.target):
                graph.edges.append(MindMapEdge(source=src, target=dst, label=label))
    return graph


def generic_label(unit: SemanticUnit, store: GraphStore) -> str:
    """Fallback for schema-less units: subject, predicate local name, object."""
    triples = sorted(store.graph_triples(unit.data_graph), key=Triple.sort_key)
    parts = []
    for t in triples:
        parts.append(
            f"{display_label(store, t.subject)} "
            f"{t.predicate.local_name} "
            f"{display_label(store, t.object)}"
        )
    return "; ".join(parts)


# -- schema registry ---------------------------------------------------------------


class SchemaRegistry:
    """Immutable-after-load lookup of schemas plus builder configuration."""

    def __init__(self) -> None:
        self._by_class: dict[Iri, StatementSchema] = {}
        self.perspectives: dict[Iri, "GranularityPerspective"] = {}
        self.standard_definitions: dict[Iri, "StandardInformationDefinition"] = {}

    def add(self, schema: StatementSchema) -> None:
        if schema.unit_class in self._by_class:
            raise FormatError(f"duplicate schema class {schema.unit_class}")
        schema.validate_templates()
        self._by_class[schema.unit_class] = schema

    def get(self, unit_class: Iri) -> StatementSchema:
        try:
            return self._by_class[unit_class]
        except KeyError:
            raise NotFoundError(f"no schema registered for class {unit_class}") from None

    def maybe(self, unit_class: Iri) -> Optional[StatementSchema]:
        return self._by_class.get(unit_class)

    def __contains__(self, unit_class: Iri) -> bool:
        return unit_class in self._by_class

    def __iter__(self):
        return iter(self._by_class.values())

    def all_schemas(self) -> list[StatementSchema]:
        return [self._by_class[c] for c in sorted(self._by_class)]

    def specificity_order(self) -> list[StatementSchema]:
        """Partition matching order: slot count desc, then class lexicographic."""
        return sorted(
            self._by_class.values(), key=lambda s: (-len(s.slots), str(s.unit_class))
        )

    def load_path(self, path) -> list[StatementSchema]:
        from pathlib import Path

        p = Path(path)
        files = sorted(p.glob("*.yaml")) if p.is_dir() else [p]
        loaded: list[StatementSchema] = []
        for f in files:
            schemas, perspectives, defs = load_definition_file(f)
            for schema in schemas:
                self.add(schema)
                loaded.append(schema)
            for persp in perspectives:
                self.perspectives[persp.relation_class] = persp
            for d in defs:
                self.standard_definitions[d.gupri] = d
        return loaded


@dataclass(frozen=True)
class GranularityPerspective:
    relation_class: Iri  # statement-unit class whose relation is a partial order
    label: str


@dataclass(frozen=True)
class StandardInformationDefinition:
    gupri: Iri
    label: str
    required_statement_classes: dict[Iri, int]  # class -> min count

    def __post_init__(self) -> None:
        if not self.required_statement_classes:
            raise FormatError(
                f"standard-information definition {self.gupri} requires "
                "a non-empty requirement set"
            )


# -- schema file loading -------------------------------------------------------------


def schema_gupri(unit_class: Iri) -> Iri:
    return Iri(str(unit_class) + "#shape")


def load_schema_file(path) -> list[StatementSchema]:
    """Parse one schema definition file; see data/schemas for the format."""
    schemas, _, _ = load_definition_file(path)
    return schemas


def load_definition_file(path):
    from pathlib import Path

    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = (mark.line + 1) if mark else 0
        raise FormatError(f"{path}: parse error at line {line}: {exc}") from exc
    if doc is None:
        return [], [], []
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: expected a key-value tree at top level")
    schemas = [
        _schema_from_dict(entry, path) for entry in doc.get("schemas", []) or []
    ]
    perspectives = [
        GranularityPerspective(
            relation_class=_iri(entry, "relation_class", path),
            label=str(entry.get("label", "")),
        )
        for entry in doc.get("perspectives", []) or []
    ]
    definitions = []
    for entry in doc.get("standard_information", []) or []:
        requires = entry.get("requires") or {}
        definitions.append(
            StandardInformationDefinition(
                gupri=_iri(entry, "class", path),
                label=str(entry.get("label", "")),
                required_statement_classes={
                    Iri(k): int(v) for k, v in requires.items()
                },
            )
        )
    return schemas, perspectives, definitions


def _iri(entry: dict, key: str, path) -> Iri:
    value = entry.get(key)
    if not value:
        raise FormatError(f"{path}: missing required field {key!r}")
    try:
        return Iri(str(value))
    except ValueError as exc:
        raise FormatError(f"{path}: field {key!r}: {exc}") from exc


def _schema_from_dict(entry: dict, path) -> StatementSchema:
    unit_class = _iri(entry, "class", path)
    subject = entry.get("subject") or {}
    kinds = subject.get("kinds") or ["named-individual"]
    try:
        subject_kinds = frozenset(ResourceKind(k) for k in kinds)
    except ValueError as exc:
        raise FormatError(f"{path}: schema {unit_class}: bad subject kind: {exc}") from exc
    slots = []
    for slot_entry in entry.get("slots", []) or []:
        name = slot_entry.get("name")
        if not name:
            raise FormatError(f"{path}: schema {unit_class}: slot without a name")
        rng = slot_entry.get("range")
        numeric_range = None
        if rng is not None:
            if not isinstance(rng, (list, tuple)) or len(rng) != 2:
                raise FormatError(
                    f"{path}: schema {unit_class}: slot {name!r}: "
                    f"range must be [min, max]"
                )
            try:
                numeric_range = (Decimal(str(rng[0])), Decimal(str(rng[1])))
            except Exception as exc:
                raise FormatError(
                    f"{path}: schema {unit_class}: slot {name!r}: malformed range"
                ) from exc
        card = slot_entry.get("cardinality") or {}
        max_raw = card.get("max", 1)
        slots.append(
            Slot(
                name=str(name),
                path=tuple(Iri(str(p)) for p in slot_entry.get("path", [])),
                value_kind=str(slot_entry.get("kind", "resource")),
                class_constraint=(
                    Iri(str(slot_entry["constraint"]))
                    if slot_entry.get("constraint")
                    else None
                ),
                datatype=(
                    Iri(str(slot_entry["datatype"]))
                    if slot_entry.get("datatype")
                    else None
                ),
                numeric_range=numeric_range,
                pattern=slot_entry.get("pattern"),
                cardinality=Cardinality(
                    min=int(card.get("min", 1)),
                    max=None if max_raw in ("unbounded", None) else int(max_raw),
                ),
                display=bool(slot_entry.get("display", True)),
            )
        )
    label = entry.get("label")
    if not label:
        raise FormatError(f"{path}: schema {unit_class}: missing label template")
    mindmap = [
        DisplayEdge(
            source=str(e.get("from", SUBJECT_SLOT)),
            label=str(e.get("label", "")),
            target=str(e.get("to", "")),
        )
        for e in entry.get("mindmap", []) or []
    ]
    schema = StatementSchema(
        gupri=schema_gupri(unit_class),
        unit_class=unit_class,
        description=str(entry.get("description", "")),
        subject_kinds=subject_kinds,
        subject_class=Iri(str(subject["class"])) if subject.get("class") else None,
        slots=slots,
        label_template=str(label),
        negated_label_template=(
            str(entry["negated_label"]) if entry.get("negated_label") else None
        ),
        mindmap_template=mindmap,
        lexical=bool(entry.get("lexical", False)),
        logic_framework=entry.get("logic"),
    )
    schema.validate_templates()
    return schema
