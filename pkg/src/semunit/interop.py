"""Packaging: nanopublications (TriG), container archives, raw RDF ingest.

A statement unit exports as a four-graph nanopublication whose
assertion graph is its data graph verbatim; compound units export as a
zip archive holding a manifest plus member nanopubs. Imports invert
both, preserving GUPRIs, so a re-export is byte-identical.
"""

from __future__ import annotations

import io
import logging
import zipfile
from pathlib import Path
from typing import Optional

import yaml

from . import vocab
from .errors import ConflictError, FormatError, NotFoundError, UnitTypeError, ValidationError
from .partition import PartitionReport, materialize_partition, partition_graph
from .rdfio import parse_trig, parse_turtle, serialize_trig
from .schemas import SchemaRegistry, generic_label, render_label, validate_instance
from .store import GraphStore
from .terms import Iri, Literal, Triple, XSD_BOOLEAN, XSD_DATETIME
from .units import (
    RESOURCE_KIND_CLASSES,
    ResourceKind,
    SemanticUnit,
    StatementCategory,
    UnitKind,
    UnitMetadata,
    UnitRegistry,
)

log = logging.getLogger(__name__)


def _part_iri(gupri: Iri, part: str) -> Iri:
    separator = "." if "#" in str(gupri) else "#"
    return Iri(f"{gupri}{separator}{part}")


# -- nanopublications ---------------------------------------------------------------


def export_nanopub(
    reg: UnitRegistry,
    store: GraphStore,
    schemas: SchemaRegistry,
    gupri: Iri,
) -> str:
    """Serialize one statement unit as a four-graph nanopublication."""
    unit = reg.get(gupri)
    if unit.kind != UnitKind.STATEMENT:
        raise UnitTypeError(f"{gupri} is not a statement unit")
    np = unit.gupri
    head_g = _part_iri(np, "head")
    assertion_g = _part_iri(np, "assertion")
    provenance_g = _part_iri(np, "provenance")
    pubinfo_g = _part_iri(np, "pubinfo")

    head = [
        Triple(np, vocab.INSTANCE_OF, vocab.NP_NANOPUBLICATION),
        Triple(np, vocab.NP_HAS_ASSERTION, assertion_g),
        Triple(np, vocab.NP_HAS_PROVENANCE, provenance_g),
        Triple(np, vocab.NP_HAS_PUBINFO, pubinfo_g),
    ]
    assertion = sorted(store.graph_triples(unit.data_graph), key=Triple.sort_key)
    md = unit.metadata
    provenance = [
        Triple(assertion_g, vocab.PROV_ATTRIBUTED_TO, md.author or md.creator),
        Triple(
            assertion_g,
            vocab.PROV_GENERATED_AT,
            Literal(md.created, Iri(XSD_DATETIME)),
        ),
    ]
    schema = schemas.maybe(unit.unit_class)
    label = (
        render_label(schema, unit, store)
        if schema is not None
        else generic_label(unit, store)
    )
    pubinfo = [
        Triple(np, vocab.INSTANCE_OF, unit.unit_class),
        Triple(np, vocab.NEGATED, Literal("true" if unit.negated else "false", Iri(XSD_BOOLEAN))),
        Triple(np, vocab.HAS_LABEL, Literal(label)),
        Triple(np, vocab.CREATED_BY, md.creator),
        Triple(np, vocab.CREATED, Literal(md.created, Iri(XSD_DATETIME))),
        Triple(np, vocab.MODIFIED, Literal(md.last_updated, Iri(XSD_DATETIME))),
        Triple(np, vocab.LICENSE, md.license),
    ]
    if unit.subject is not None:
        pubinfo.append(Triple(np, vocab.HAS_SUBJECT, unit.subject))
    if unit.schema_ref is not None:
        pubinfo.append(Triple(np, vocab.HAS_SCHEMA, unit.schema_ref))
    if unit.category is not None:
        pubinfo.append(Triple(np, vocab.HAS_CATEGORY, Literal(unit.category.value)))
    if unit.logic_framework:
        pubinfo.append(Triple(np, vocab.LOGIC_FRAMEWORK, Literal(unit.logic_framework)))
    if md.contributor is not None:
        pubinfo.append(Triple(np, vocab.CONTRIBUTOR, md.contributor))
    if md.author is not None:
        pubinfo.append(Triple(np, vocab.AUTHORED_BY, md.author))
    kind = reg.resource_kind(unit.subject) if unit.subject is not None else None
    if kind is not None and kind not in (ResourceKind.NAMED_INDIVIDUAL, ResourceKind.SEMANTIC_UNIT):
        pubinfo.append(
            Triple(np, vocab.RESOURCE_KIND, RESOURCE_KIND_CLASSES[kind])
        )

    return serialize_trig(
        [
            (head_g, head),
            (assertion_g, assertion),
            (provenance_g, provenance),
            (pubinfo_g, pubinfo),
        ],
        prefixes=vocab.TRIG_PREFIXES,
    )


def import_nanopub(
    store: GraphStore,
    reg: UnitRegistry,
    schemas: SchemaRegistry,
    text: str,
) -> SemanticUnit:
    """Re-register a nanopublication exported by this engine (or shaped like one)."""
    graphs = parse_trig(text)
    head_graph = None
    np = None
    for graph_iri, triples in graphs.items():
        for t in triples:
            if t.predicate == vocab.NP_HAS_ASSERTION:
                head_graph = graph_iri
                np = t.subject
    if head_graph is None or np is None:
        raise FormatError("no head graph: nothing links an assertion graph")
    head = {t.predicate: t.object for t in graphs[head_graph] if t.subject == np}
    for required in (vocab.NP_HAS_ASSERTION, vocab.NP_HAS_PROVENANCE, vocab.NP_HAS_PUBINFO):
        if required not in head:
            raise FormatError(f"head graph lacks {required.local_name}")
    assertion_g = head[vocab.NP_HAS_ASSERTION]
    pubinfo_g = head[vocab.NP_HAS_PUBINFO]
    for part in (assertion_g, pubinfo_g, head[vocab.NP_HAS_PROVENANCE]):
        if part not in graphs:
            raise FormatError(f"named graph {part} referenced but not present")

    info: dict[Iri, list] = {}
    for t in graphs[pubinfo_g]:
        if t.subject == np:
            info.setdefault(t.predicate, []).append(t.object)

    def one(predicate: Iri):
        values = info.get(predicate, [])
        return values[0] if values else None

    classes = [v for v in info.get(vocab.INSTANCE_OF, []) if isinstance(v, Iri)]
    unit_class = classes[0] if classes else vocab.STATEMENT_UNIT
    negated_term = one(vocab.NEGATED)
    negated = isinstance(negated_term, Literal) and negated_term.lexical == "true"
    category_term = one(vocab.HAS_CATEGORY)
    category = (
        StatementCategory(category_term.lexical)
        if isinstance(category_term, Literal)
        else None
    )
    schema_ref = one(vocab.HAS_SCHEMA)
    subject = one(vocab.HAS_SUBJECT)
    created = one(vocab.CREATED)
    modified = one(vocab.MODIFIED)
    creator = one(vocab.CREATED_BY)
    if created is None or creator is None:
        raise FormatError("pubinfo graph lacks creation metadata")
    metadata = UnitMetadata(
        creator=creator,
        created=created.lexical,
        last_updated=modified.lexical if modified else created.lexical,
        contributor=one(vocab.CONTRIBUTOR),
        author=one(vocab.AUTHORED_BY),
        license=one(vocab.LICENSE) or Iri("https://creativecommons.org/licenses/by/4.0/"),
    )
    logic_term = one(vocab.LOGIC_FRAMEWORK)

    if np in reg:
        raise ConflictError(f"unit already registered: {np}")
    kind_class = one(vocab.RESOURCE_KIND)
    if subject is not None and kind_class is not None:
        for kind, cls in RESOURCE_KIND_CLASSES.items():
            if cls == kind_class:
                reg.declare_resource_kind(subject, kind)
                break

    schema = None
    if schema_ref is not None:
        for candidate in schemas:
            if candidate.gupri == schema_ref:
                schema = candidate
                break
        if schema is None:
            log.warning(
                "unknown schema %s for imported unit %s; importing as generic",
                schema_ref,
                np,
            )
            schema_ref = None

    store.add_graph(np)
    store.insert_triples(np, graphs[assertion_g])
    unit = SemanticUnit(
        gupri=np,
        unit_class=unit_class if schema is not None else unit_class,
        kind=UnitKind.STATEMENT,
        metadata=metadata,
        data_graph=np,
        subject=subject,
        schema_ref=schema_ref,
        logic_framework=logic_term.lexical if isinstance(logic_term, Literal) else None,
        category=category,
        negated=negated,
    )
    if schema is not None:
        report = validate_instance(store, schema, unit, reg.resource_kind)
        # class-membership constraints check triples owned by other units;
        # a lone nanopub cannot carry them, so only intra-assertion
        # violations block an import
        blocking = [v for v in report.violations if v.kind != "class"]
        if blocking:
            raise ValidationError(
                f"imported assertion violates schema {schema.unit_class}",
                details=[f"{v.kind}: {v.message}" for v in blocking],
            )
    reg.register(unit)
    return unit


# -- containers ----------------------------------------------------------------------


def _nanopub_filename(gupri: Iri) -> str:
    import hashlib

    return "nanopubs/" + hashlib.sha256(str(gupri).encode()).hexdigest()[:16] + ".trig"


def _manifest_entry(
    reg: UnitRegistry,
    store: GraphStore,
    schemas: SchemaRegistry,
    gupri: Iri,
    recursive: bool,
    files: dict[str, str],
) -> dict:
    unit = reg.get(gupri)
    entry: dict = {"gupri": str(gupri), "kind": unit.kind.value, "class": str(unit.unit_class)}
    if unit.kind == UnitKind.STATEMENT:
        name = _nanopub_filename(gupri)
        if name not in files:
            files[name] = export_nanopub(reg, store, schemas, gupri)
        entry["file"] = name
    elif unit.is_compound():
        if recursive:
            entry["manifest"] = _manifest_dict(reg, store, schemas, unit, recursive, files)
        else:
            entry["reference"] = True
    else:
        entry["record"] = unit.to_dict()
    return entry


def _manifest_dict(
    reg: UnitRegistry,
    store: GraphStore,
    schemas: SchemaRegistry,
    unit: SemanticUnit,
    recursive: bool,
    files: dict[str, str],
) -> dict:
    return {
        "gupri": str(unit.gupri),
        "class": str(unit.unit_class),
        "kind": unit.kind.value,
        "subject": str(unit.subject) if unit.subject else None,
        "metadata": unit.metadata.to_dict(),
        "members": [
            _manifest_entry(reg, store, schemas, member, recursive, files)
            for member in unit.members
        ],
    }


def export_container(
    reg: UnitRegistry,
    store: GraphStore,
    schemas: SchemaRegistry,
    gupri: Iri,
    recursive: bool = True,
) -> bytes:
    """Zip archive: manifest.yaml plus one TriG file per statement member."""
    unit = reg.get(gupri)
    if not unit.is_compound():
        raise UnitTypeError(f"{gupri} is not a compound unit")
    files: dict[str, str] = {}
    manifest = _manifest_dict(reg, store, schemas, unit, recursive, files)
    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as archive:
        def add(name: str, payload: str) -> None:
            info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            archive.writestr(info, payload)

        add("manifest.yaml", yaml.safe_dump(manifest, sort_keys=True))
        for name in sorted(files):
            add(name, files[name])
    return buffer.getvalue()


def import_container(
    store: GraphStore,
    reg: UnitRegistry,
    schemas: SchemaRegistry,
    archive_bytes: bytes,
) -> SemanticUnit:
    """Rebuild a registry fragment from an exported archive."""
    with zipfile.ZipFile(io.BytesIO(archive_bytes)) as archive:
        names = set(archive.namelist())
        if "manifest.yaml" not in names:
            raise FormatError("archive has no manifest.yaml")
        manifest = yaml.safe_load(archive.read("manifest.yaml"))

        def import_member(entry: dict) -> Iri:
            gupri = Iri(entry["gupri"])
            if gupri in reg:
                return gupri
            if "file" in entry:
                if entry["file"] not in names:
                    raise FormatError(f"archive lacks member file {entry['file']}")
                text = archive.read(entry["file"]).decode("utf-8")
                return import_nanopub(store, reg, schemas, text).gupri
            if "manifest" in entry:
                return import_manifest(entry["manifest"]).gupri
            if "record" in entry:
                unit = SemanticUnit.from_dict(entry["record"])
                reg.register(unit)
                return unit.gupri
            if entry.get("reference"):
                raise NotFoundError(
                    f"archive references {gupri} but does not include it "
                    f"and it is not registered"
                )
            raise FormatError(f"unusable manifest entry for {gupri}")

        def import_manifest(data: dict) -> SemanticUnit:
            gupri = Iri(data["gupri"])
            if gupri in reg:
                return reg.get(gupri)
            members = [import_member(e) for e in data.get("members", [])]
            unit = SemanticUnit(
                gupri=gupri,
                unit_class=Iri(data["class"]),
                kind=UnitKind(data["kind"]),
                metadata=UnitMetadata.from_dict(data["metadata"]),
                members=members,
                subject=Iri(data["subject"]) if data.get("subject") else None,
            )
            return reg.register(unit)

        return import_manifest(manifest)


# -- raw RDF ingest -----------------------------------------------------------------


def ingest_rdf(
    path,
    store: GraphStore,
    reg: UnitRegistry,
    schemas: SchemaRegistry,
    metadata: Optional[UnitMetadata] = None,
) -> PartitionReport:
    """Parse, declare reserved-vocabulary kinds, partition, and register."""
    text = Path(path).read_text(encoding="utf-8")
    triples = parse_turtle(text)
    data = []
    kind_by_class = {cls: kind for kind, cls in RESOURCE_KIND_CLASSES.items()}
    for t in triples:
        if t.predicate == vocab.RESOURCE_KIND:
            if not isinstance(t.object, Iri) or t.object not in kind_by_class:
                raise FormatError(f"unknown resource kind {t.object}")
            reg.declare_resource_kind(t.subject, kind_by_class[t.object])
        else:
            data.append(t)
    drafts, report = partition_graph(data, schemas)
    materialize_partition(store, reg, drafts, metadata=metadata)
    return report
