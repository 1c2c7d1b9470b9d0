"""Semantic units, their taxonomy, and the GUPRI registry.

A semantic unit is a GUPRI-identified descriptor of a subgraph. A
statement unit owns a named data graph whose IRI equals the unit's
GUPRI; compound units hold their data graph only indirectly, as the
recursive merge of their members' graphs. Registering a unit mirrors
it into the store's unit-description layer graph as instance-of,
membership, subject, and metadata triples.
"""

from __future__ import annotations

import hashlib
import json
import random
import threading
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Optional

from . import vocab
from .errors import ConflictError, IntegrityError, NotFoundError, ValidationError
from .store import GraphStore
from .terms import Iri, Literal, Quad, Triple, XSD_BOOLEAN, XSD_DATETIME


class UnitKind(str, Enum):
    STATEMENT = "statement"
    ITEM = "item"
    ITEM_GROUP = "item-group"
    GRANULARITY_TREE = "granularity-tree"
    GRANULAR_ITEM_GROUP = "granular-item-group"
    CONTEXT = "context"
    STANDARD_INFORMATION = "standard-information"
    LOGICAL_ARGUMENT = "logical-argument"
    DATASET = "dataset"
    QUESTION = "question"


COMPOUND_KINDS = frozenset(
    {
        UnitKind.ITEM,
        UnitKind.ITEM_GROUP,
        UnitKind.GRANULARITY_TREE,
        UnitKind.GRANULAR_ITEM_GROUP,
        UnitKind.CONTEXT,
        UnitKind.STANDARD_INFORMATION,
        UnitKind.LOGICAL_ARGUMENT,
        UnitKind.DATASET,
    }
)

KIND_CLASSES = {
    UnitKind.STATEMENT: vocab.STATEMENT_UNIT,
    UnitKind.ITEM: vocab.ITEM_UNIT,
    UnitKind.ITEM_GROUP: vocab.ITEM_GROUP_UNIT,
    UnitKind.GRANULARITY_TREE: vocab.GRANULARITY_TREE_UNIT,
    UnitKind.GRANULAR_ITEM_GROUP: vocab.GRANULAR_ITEM_GROUP_UNIT,
    UnitKind.CONTEXT: vocab.CONTEXT_UNIT,
    UnitKind.STANDARD_INFORMATION: vocab.STANDARD_INFORMATION_UNIT,
    UnitKind.LOGICAL_ARGUMENT: vocab.LOGICAL_ARGUMENT_UNIT,
    UnitKind.DATASET: vocab.DATASET_UNIT,
    UnitKind.QUESTION: vocab.QUESTION_UNIT,
}


class ResourceKind(str, Enum):
    NAMED_INDIVIDUAL = "named-individual"
    SOME_INSTANCE = "some-instance"
    MOST_INSTANCES = "most-instances"
    EVERY_INSTANCE = "every-instance"
    ONTOLOGY_CLASS = "ontology-class"
    SEMANTIC_UNIT = "semantic-unit"
    RELATION = "relation"


RESOURCE_KIND_CLASSES = {
    ResourceKind.NAMED_INDIVIDUAL: vocab.KIND_NAMED_INDIVIDUAL,
    ResourceKind.SOME_INSTANCE: vocab.KIND_SOME_INSTANCE,
    ResourceKind.MOST_INSTANCES: vocab.KIND_MOST_INSTANCES,
    ResourceKind.EVERY_INSTANCE: vocab.KIND_EVERY_INSTANCE,
    ResourceKind.ONTOLOGY_CLASS: vocab.KIND_ONTOLOGY_CLASS,
    ResourceKind.SEMANTIC_UNIT: vocab.KIND_SEMANTIC_UNIT,
    ResourceKind.RELATION: vocab.KIND_RELATION,
}


class StatementCategory(str, Enum):
    LEXICAL = "lexical"
    ASSERTIONAL = "assertional"
    CONTINGENT = "contingent"
    PROTOTYPICAL = "prototypical"
    UNIVERSAL = "universal"


CATEGORY_CLASSES = {
    StatementCategory.LEXICAL: vocab.LEXICAL_STATEMENT,
    StatementCategory.ASSERTIONAL: vocab.ASSERTIONAL_STATEMENT,
    StatementCategory.CONTINGENT: vocab.CONTINGENT_STATEMENT,
    StatementCategory.PROTOTYPICAL: vocab.PROTOTYPICAL_STATEMENT,
    StatementCategory.UNIVERSAL: vocab.UNIVERSAL_STATEMENT,
}


def now_utc() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


@dataclass(frozen=True)
class UnitMetadata:
    """Who made the unit record, who authored its content, and when."""

    creator: Iri
    created: str
    last_updated: str
    contributor: Optional[Iri] = None
    author: Optional[Iri] = None
    license: Iri = field(default_factory=lambda: Iri("https://creativecommons.org/licenses/by/4.0/"))

    def __post_init__(self) -> None:
        if self.last_updated < self.created:
            raise ValidationError("last_updated precedes created")

    def to_dict(self) -> dict:
        return {
            "creator": str(self.creator),
            "created": self.created,
            "last_updated": self.last_updated,
            "contributor": str(self.contributor) if self.contributor else None,
            "author": str(self.author) if self.author else None,
            "license": str(self.license),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "UnitMetadata":
        return cls(
            creator=Iri(data["creator"]),
            created=data["created"],
            last_updated=data["last_updated"],
            contributor=Iri(data["contributor"]) if data.get("contributor") else None,
            author=Iri(data["author"]) if data.get("author") else None,
            license=Iri(data["license"]),
        )


@dataclass
class SemanticUnit:
    gupri: Iri
    unit_class: Iri
    kind: UnitKind
    metadata: UnitMetadata
    data_graph: Optional[Iri] = None
    members: list[Iri] = field(default_factory=list)
    subject: Optional[Iri] = None
    schema_ref: Optional[Iri] = None
    logic_framework: Optional[str] = None
    category: Optional[StatementCategory] = None
    negated: bool = False
    question: Optional[dict] = None  # serialized question payload, kind=question only

    def is_statement(self) -> bool:
        return self.kind == UnitKind.STATEMENT

    def is_compound(self) -> bool:
        return self.kind in COMPOUND_KINDS

    def to_dict(self) -> dict:
        return {
            "gupri": str(self.gupri),
            "unit_class": str(self.unit_class),
            "kind": self.kind.value,
            "data_graph": str(self.data_graph) if self.data_graph else None,
            "members": [str(m) for m in self.members],
            "subject": str(self.subject) if self.subject else None,
            "schema_ref": str(self.schema_ref) if self.schema_ref else None,
            "logic_framework": self.logic_framework,
            "category": self.category.value if self.category else None,
            "negated": self.negated,
            "metadata": self.metadata.to_dict(),
            "question": self.question,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SemanticUnit":
        return cls(
            gupri=Iri(data["gupri"]),
            unit_class=Iri(data["unit_class"]),
            kind=UnitKind(data["kind"]),
            metadata=UnitMetadata.from_dict(data["metadata"]),
            data_graph=Iri(data["data_graph"]) if data.get("data_graph") else None,
            members=[Iri(m) for m in data.get("members", [])],
            subject=Iri(data["subject"]) if data.get("subject") else None,
            schema_ref=Iri(data["schema_ref"]) if data.get("schema_ref") else None,
            logic_framework=data.get("logic_framework"),
            category=StatementCategory(data["category"]) if data.get("category") else None,
            negated=bool(data.get("negated")),
            question=data.get("question"),
        )


class IdMinter:
    """GUPRI mint: urn:uuid UUIDv4 by default, seedable for reproducible runs.

    ``stable`` derives content-addressed GUPRIs for units rebuilt from a
    defining anchor, so re-running a builder updates instead of duplicating.
    """

    def __init__(self, prefix: str = "urn:uuid:", seed: Optional[int] = None):
        self.prefix = prefix
        self._rng = random.Random(seed) if seed is not None else None

    def mint(self) -> Iri:
        if self._rng is not None:
            u = uuid.UUID(int=self._rng.getrandbits(128), version=4)
        else:
            u = uuid.uuid4()
        return Iri(self.prefix + str(u))

    @staticmethod
    def stable(kind: str, key: str) -> Iri:
        digest = hashlib.sha256(f"{kind}|{key}".encode("utf-8")).hexdigest()[:24]
        return Iri(f"urn:x-semunit:{kind}:{digest}")


def default_metadata(
    creator: Optional[Iri] = None, clock: Callable[[], str] = now_utc
) -> UnitMetadata:
    stamp = clock()
    return UnitMetadata(
        creator=creator or Iri("urn:x-semunit:agent:system"),
        created=stamp,
        last_updated=stamp,
    )


class UnitRegistry:
    """Maps GUPRIs to semantic units and maintains the layer graph.

    Reverse indexes: by unit class, by kind, by subject, by member
    (direct containers of a unit), and by resource mention (statement
    units whose data graph mentions an IRI in any position).
    """

    def __init__(
        self,
        store: GraphStore,
        journal_path: Optional[Path] = None,
        minter: Optional[IdMinter] = None,
        clock: Callable[[], str] = now_utc,
    ):
        self.store = store
        self.minter = minter or IdMinter()
        self.clock = clock
        self._units: dict[Iri, SemanticUnit] = {}
        self._by_class: dict[Iri, set[Iri]] = {}
        self._by_kind: dict[UnitKind, set[Iri]] = {k: set() for k in UnitKind}
        self._by_subject: dict[Iri, set[Iri]] = {}
        self._containers: dict[Iri, set[Iri]] = {}
        self._mentions: dict[Iri, set[Iri]] = {}
        self._resource_kinds: dict[Iri, ResourceKind] = {}
        self._lock = threading.RLock()
        self._journal_path = Path(journal_path) if journal_path else None
        self._journal_handle = None
        store.add_graph(vocab.LAYER_GRAPH)
        if self._journal_path is not None:
            self._replay_journal()
            self._journal_handle = open(self._journal_path, "a", encoding="utf-8")

    # -- lookups -------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._units)

    def __contains__(self, gupri: Iri) -> bool:
        return gupri in self._units

    def get(self, gupri: Iri) -> SemanticUnit:
        try:
            return self._units[gupri]
        except KeyError:
            raise NotFoundError(f"no semantic unit registered for {gupri}") from None

    def maybe(self, gupri: Iri) -> Optional[SemanticUnit]:
        return self._units.get(gupri)

    def all_units(self) -> list[SemanticUnit]:
        return [self._units[g] for g in sorted(self._units)]

    def by_class(self, unit_class: Iri) -> list[SemanticUnit]:
        return [self._units[g] for g in sorted(self._by_class.get(unit_class, ()))]

    def by_kind(self, kind: UnitKind) -> list[SemanticUnit]:
        return [self._units[g] for g in sorted(self._by_kind.get(kind, ()))]

    def by_subject(self, subject: Iri) -> list[SemanticUnit]:
        return [self._units[g] for g in sorted(self._by_subject.get(subject, ()))]

    def containers_of(self, gupri: Iri) -> list[Iri]:
        """Compound units that directly list ``gupri`` as a member."""
        return sorted(self._containers.get(gupri, ()))

    def unit_classes(self) -> list[Iri]:
        return sorted(self._by_class)

    # -- resource kinds --------------------------------------------------------

    def declare_resource_kind(self, resource: Iri, kind: ResourceKind) -> None:
        with self._lock:
            existing = self._resource_kinds.get(resource)
            if existing is not None and existing != kind:
                raise ConflictError(
                    f"{resource} already declared as {existing.value}, not {kind.value}"
                )
            if existing == kind:
                return
            self._resource_kinds[resource] = kind
            self._layer_add(
                Triple(resource, vocab.RESOURCE_KIND, RESOURCE_KIND_CLASSES[kind])
            )
            self._journal({"event": "resource-kind", "resource": str(resource), "kind": kind.value})

    def resource_kind(self, resource: Iri) -> ResourceKind:
        kind = self._resource_kinds.get(resource)
        if kind is not None:
            return kind
        if resource in self._units:
            return ResourceKind.SEMANTIC_UNIT
        return ResourceKind.NAMED_INDIVIDUAL

    # -- registration ----------------------------------------------------------

    def register(self, unit: SemanticUnit, revises: Optional[Iri] = None) -> SemanticUnit:
        with self._lock:
            self._validate_new(unit)
            if revises is not None and revises not in self._units:
                raise NotFoundError(f"revised unit not registered: {revises}")
            self._index(unit)
            self._write_layer(unit, revises)
            self._journal(
                {"event": "register", "unit": unit.to_dict(), "revises": str(revises) if revises else None}
            )
            return unit

    def update_members(self, gupri: Iri, members: list[Iri]) -> SemanticUnit:
        """Replace a compound unit's member list (used by idempotent rebuilds)."""
        with self._lock:
            unit = self.get(gupri)
            if not unit.is_compound():
                raise IntegrityError(f"{gupri} is not a compound unit")
            if not members:
                raise IntegrityError("compound unit needs at least one member")
            for m in members:
                if m not in self._units:
                    raise IntegrityError(f"dangling member reference: {m}")
            if self._would_cycle(gupri, members):
                raise IntegrityError("membership update would create a cycle")
            if members == unit.members:
                return unit
            old = set(unit.members)
            new = set(members)
            for m in old - new:
                self._containers[m].discard(gupri)
                self.store.retract(
                    Quad(Triple(gupri, vocab.HAS_MEMBER, m), vocab.LAYER_GRAPH)
                )
            for m in new - old:
                self._containers.setdefault(m, set()).add(gupri)
                self._layer_add(Triple(gupri, vocab.HAS_MEMBER, m))
            updated = replace(
                unit,
                members=list(members),
                metadata=replace(unit.metadata, last_updated=self.clock()),
            )
            self._units[gupri] = updated
            self._journal({"event": "members", "unit": str(gupri), "members": [str(m) for m in members]})
            return updated

    def _validate_new(self, unit: SemanticUnit) -> None:
        if unit.gupri in self._units:
            raise ConflictError(f"gupri already registered: {unit.gupri}")
        if unit.kind == UnitKind.STATEMENT:
            if unit.data_graph is None:
                raise ValidationError("statement unit requires a data graph")
            if unit.members:
                raise ValidationError("statement unit must not list members")
            if not self.store.has_graph(unit.data_graph):
                raise IntegrityError(f"data graph not present in store: {unit.data_graph}")
        elif unit.kind in COMPOUND_KINDS:
            if unit.data_graph is not None:
                raise ValidationError("compound unit must not own a data graph")
            if not unit.members:
                raise IntegrityError("compound unit needs at least one member")
            for m in unit.members:
                if m not in self._units:
                    raise IntegrityError(f"dangling member reference: {m}")
            if unit.gupri in unit.members:
                raise IntegrityError("unit cannot contain itself")
        elif unit.kind == UnitKind.QUESTION:
            if unit.data_graph is not None or unit.members:
                raise ValidationError("question unit carries neither data graph nor members")

    def _would_cycle(self, gupri: Iri, members: Iterable[Iri]) -> bool:
        # DFS from the new members through existing membership edges
        stack = list(members)
        seen = set()
        while stack:
            current = stack.pop()
            if current == gupri:
                return True
            if current in seen:
                continue
            seen.add(current)
            unit = self._units.get(current)
            if unit is not None:
                stack.extend(unit.members)
        return False

    def _index(self, unit: SemanticUnit) -> None:
        self._units[unit.gupri] = unit
        self._by_class.setdefault(unit.unit_class, set()).add(unit.gupri)
        self._by_kind[unit.kind].add(unit.gupri)
        if unit.subject is not None:
            self._by_subject.setdefault(unit.subject, set()).add(unit.gupri)
        for m in unit.members:
            self._containers.setdefault(m, set()).add(unit.gupri)
        if unit.kind == UnitKind.STATEMENT:
            for triple in self.store.graph_triples(unit.data_graph):
                for r in triple.resources():
                    self._mentions.setdefault(r, set()).add(unit.gupri)

    def _write_layer(self, unit: SemanticUnit, revises: Optional[Iri]) -> None:
        g = unit.gupri
        self._layer_add(Triple(g, vocab.INSTANCE_OF, unit.unit_class))
        kind_class = KIND_CLASSES[unit.kind]
        if kind_class != unit.unit_class:
            self._layer_add(Triple(g, vocab.INSTANCE_OF, kind_class))
        if unit.category is not None:
            self._layer_add(Triple(g, vocab.INSTANCE_OF, CATEGORY_CLASSES[unit.category]))
        if unit.kind == UnitKind.STATEMENT:
            if unit.negated:
                self._layer_add(Triple(g, vocab.INSTANCE_OF, vocab.NEGATION_UNIT))
            self._layer_add(
                Triple(
                    g,
                    vocab.NEGATED,
                    Literal("true" if unit.negated else "false", Iri(XSD_BOOLEAN)),
                )
            )
        if unit.subject is not None:
            self._layer_add(Triple(g, vocab.HAS_SUBJECT, unit.subject))
        if unit.schema_ref is not None:
            self._layer_add(Triple(g, vocab.HAS_SCHEMA, unit.schema_ref))
        if unit.logic_framework:
            self._layer_add(Triple(g, vocab.LOGIC_FRAMEWORK, Literal(unit.logic_framework)))
        for m in unit.members:
            self._layer_add(Triple(g, vocab.HAS_MEMBER, m))
        if revises is not None:
            self._layer_add(Triple(g, vocab.REVISES, revises))
        md = unit.metadata
        self._layer_add(Triple(g, vocab.CREATED_BY, md.creator))
        self._layer_add(Triple(g, vocab.CREATED, Literal(md.created, Iri(XSD_DATETIME))))
        self._layer_add(Triple(g, vocab.MODIFIED, Literal(md.last_updated, Iri(XSD_DATETIME))))
        if md.contributor is not None:
            self._layer_add(Triple(g, vocab.CONTRIBUTOR, md.contributor))
        if md.author is not None:
            self._layer_add(Triple(g, vocab.AUTHORED_BY, md.author))
        self._layer_add(Triple(g, vocab.LICENSE, md.license))

    def _layer_add(self, triple: Triple) -> None:
        self.store.insert(Quad(triple, vocab.LAYER_GRAPH))

    def layer_insert(self, triple: Triple) -> None:
        """Add an extra descriptive triple about a unit to the layer graph."""
        with self._lock:
            self._layer_add(triple)

    # -- derived views -----------------------------------------------------------

    def merged_data_graph(self, gupri: Iri) -> set[Triple]:
        """Union of the unit's own and (recursively) members' data graphs."""
        unit = self.get(gupri)
        out: set[Triple] = set()
        stack = [unit]
        seen: set[Iri] = set()
        while stack:
            current = stack.pop()
            if current.gupri in seen:
                continue
            seen.add(current.gupri)
            if current.data_graph is not None:
                out |= self.store.graph_triples(current.data_graph)
            for m in current.members:
                stack.append(self.get(m))
        return out

    def units_containing(self, resource: Iri) -> dict[UnitKind, list[Iri]]:
        """Per kind, units whose merged data graph mentions the resource."""
        statements = set(self._mentions.get(resource, ()))
        reached: set[Iri] = set(statements)
        frontier = list(statements)
        while frontier:
            current = frontier.pop()
            for container in self._containers.get(current, ()):
                if container not in reached:
                    reached.add(container)
                    frontier.append(container)
        out: dict[UnitKind, list[Iri]] = {}
        for g in reached:
            out.setdefault(self._units[g].kind, []).append(g)
        return {k: sorted(v) for k, v in sorted(out.items(), key=lambda kv: kv[0].value)}

    def revisions_of(self, gupri: Iri) -> list[Iri]:
        """Units that declare they revise ``gupri``."""
        quads = self.store.match(
            predicate=vocab.REVISES, object=gupri, graph=vocab.LAYER_GRAPH
        )
        return sorted(q.subject for q in quads)

    # -- persistence ---------------------------------------------------------------

    def _journal(self, record: dict) -> None:
        if self._journal_handle is not None:
            self._journal_handle.write(json.dumps(record, sort_keys=True) + "\n")
            self._journal_handle.flush()

    def _replay_journal(self) -> None:
        if not self._journal_path.exists():
            return
        with open(self._journal_path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                if record["event"] == "register":
                    unit = SemanticUnit.from_dict(record["unit"])
                    self._index(unit)
                elif record["event"] == "members":
                    gupri = Iri(record["unit"])
                    unit = self._units[gupri]
                    for m in unit.members:
                        self._containers.get(m, set()).discard(gupri)
                    unit.members = [Iri(m) for m in record["members"]]
                    for m in unit.members:
                        self._containers.setdefault(m, set()).add(gupri)
                elif record["event"] == "resource-kind":
                    self._resource_kinds[Iri(record["resource"])] = ResourceKind(
                        record["kind"]
                    )

    def close(self) -> None:
        if self._journal_handle is not None:
            self._journal_handle.close()
            self._journal_handle = None
