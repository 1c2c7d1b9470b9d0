"""Question units and their compilation to executable query plans.

A question instantiates one or more statement schemas with a mix of
fixed values and variables (resource variables with optional class
constraints, literal variables with ranges or patterns). Compilation
produces a deterministic plan; execution scans candidate statement
units per source schema and joins on shared variable names. The same
plan also emits standard SPARQL text (SELECT or ASK) whose patterns
group each source's triples inside a GRAPH block, since a statement
unit's data graph IRI is the unit's own GUPRI.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Optional

from . import vocab
from .errors import NotFoundError, ValidationError
from .rdfio import term_text
from .schemas import SchemaRegistry, StatementSchema, walk_instance
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
    ResourceKind,
    SemanticUnit,
    UnitKind,
    UnitMetadata,
    UnitRegistry,
    default_metadata,
)

FIXED = "fixed"
VAR_RESOURCE = "var-resource"
VAR_LITERAL = "var-literal"
UNBOUND = "unbound"


@dataclass(frozen=True)
class Binding:
    """How one slot (or the subject) participates in a question."""

    kind: str
    term: Optional[Term] = None
    var: Optional[str] = None
    class_constraint: Optional[Iri] = None
    datatype: Optional[Iri] = None
    numeric_range: Optional[tuple[Decimal, Decimal]] = None
    pattern: Optional[str] = None
    quantifier: str = "some"  # some | every | most

    @staticmethod
    def fixed(term: Term) -> "Binding":
        return Binding(kind=FIXED, term=term)

    @staticmethod
    def var_resource(
        var: Optional[str] = None,
        class_constraint: Optional[Iri] = None,
        quantifier: str = "some",
    ) -> "Binding":
        return Binding(
            kind=VAR_RESOURCE,
            var=var,
            class_constraint=class_constraint,
            quantifier=quantifier,
        )

    @staticmethod
    def var_literal(
        var: Optional[str] = None,
        datatype: Optional[Iri] = None,
        numeric_range: Optional[tuple[Decimal, Decimal]] = None,
        pattern: Optional[str] = None,
    ) -> "Binding":
        return Binding(
            kind=VAR_LITERAL,
            var=var,
            datatype=datatype,
            numeric_range=numeric_range,
            pattern=pattern,
        )

    @staticmethod
    def unbound() -> "Binding":
        return Binding(kind=UNBOUND)

    def is_var(self) -> bool:
        return self.kind in (VAR_RESOURCE, VAR_LITERAL)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.term is not None:
            if isinstance(self.term, Literal):
                out["literal"] = {
                    "lexical": self.term.lexical,
                    "datatype": str(self.term.datatype),
                    "language": self.term.language,
                }
            else:
                out["resource"] = str(self.term)
        if self.var:
            out["var"] = self.var
        if self.class_constraint:
            out["class"] = str(self.class_constraint)
        if self.datatype:
            out["datatype"] = str(self.datatype)
        if self.numeric_range:
            out["range"] = [str(self.numeric_range[0]), str(self.numeric_range[1])]
        if self.pattern:
            out["pattern"] = self.pattern
        if self.quantifier != "some":
            out["quantifier"] = self.quantifier
        return out

    @staticmethod
    def from_dict(data: dict) -> "Binding":
        term: Optional[Term] = None
        if "resource" in data:
            term = Iri(data["resource"])
        elif "literal" in data:
            lit = data["literal"]
            term = Literal(lit["lexical"], Iri(lit["datatype"]), lit.get("language"))
        rng = None
        if data.get("range"):
            rng = (Decimal(str(data["range"][0])), Decimal(str(data["range"][1])))
        return Binding(
            kind=data["kind"],
            term=term,
            var=data.get("var"),
            class_constraint=Iri(data["class"]) if data.get("class") else None,
            datatype=Iri(data["datatype"]) if data.get("datatype") else None,
            numeric_range=rng,
            pattern=data.get("pattern"),
            quantifier=data.get("quantifier", "some"),
        )


@dataclass
class SourceBindings:
    """One source schema's subject and slot bindings."""

    schema_class: Iri
    subject: Binding = field(default_factory=Binding.unbound)
    slots: dict[str, Binding] = field(default_factory=dict)
    negated: bool = False  # target negation units instead of positive ones

    def to_dict(self) -> dict:
        return {
            "schema_class": str(self.schema_class),
            "subject": self.subject.to_dict(),
            "slots": {name: b.to_dict() for name, b in self.slots.items()},
            "negated": self.negated,
        }

    @staticmethod
    def from_dict(data: dict) -> "SourceBindings":
        return SourceBindings(
            schema_class=Iri(data["schema_class"]),
            subject=Binding.from_dict(data["subject"]),
            slots={
                name: Binding.from_dict(b) for name, b in data.get("slots", {}).items()
            },
            negated=bool(data.get("negated")),
        )


@dataclass
class QuestionUnit:
    """A registered search: sources plus bindings, itself a semantic unit."""

    gupri: Iri
    sources: list[SourceBindings]

    @property
    def boolean_mode(self) -> bool:
        if any(b.subject.is_var() for b in self.sources):
            return False
        return not any(
            binding.is_var()
            for source in self.sources
            for binding in source.slots.values()
        )

    def join_vars(self) -> list[str]:
        counts: dict[str, int] = {}
        for source in self.sources:
            names = {
                b.var
                for b in [source.subject, *source.slots.values()]
                if b.is_var() and b.var
            }
            for name in names:
                counts[name] = counts.get(name, 0) + 1
        return sorted(name for name, n in counts.items() if n >= 2)

    def to_payload(self) -> dict:
        return {"sources": [s.to_dict() for s in self.sources]}

    @staticmethod
    def from_unit(unit: SemanticUnit) -> "QuestionUnit":
        if unit.kind != UnitKind.QUESTION or not unit.question:
            raise ValidationError(f"{unit.gupri} is not a question unit")
        return QuestionUnit(
            gupri=unit.gupri,
            sources=[
                SourceBindings.from_dict(s) for s in unit.question.get("sources", [])
            ],
        )


def register_question(
    reg: UnitRegistry,
    sources: list[SourceBindings],
    metadata: Optional[UnitMetadata] = None,
) -> QuestionUnit:
    """Persist a question as a semantic unit of the question kind."""
    if not sources:
        raise ValidationError("a question needs at least one source schema")
    gupri = reg.minter.mint()
    question = QuestionUnit(gupri=gupri, sources=sources)
    unit = SemanticUnit(
        gupri=gupri,
        unit_class=vocab.QUESTION_UNIT,
        kind=UnitKind.QUESTION,
        metadata=metadata or default_metadata(clock=reg.clock),
        question=question.to_payload(),
    )
    reg.register(unit)
    for source in sources:
        reg.layer_insert(Triple(gupri, vocab.HAS_SOURCE_CLASS, source.schema_class))
    return question


# -- query plans --------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


PlanTerm = object  # Var | Iri | Literal


@dataclass(frozen=True)
class PlanTriple:
    subject: PlanTerm
    predicate: Iri
    object: PlanTerm


@dataclass(frozen=True)
class PlanFilter:
    kind: str  # "range" | "pattern"
    var: str
    low: Optional[Decimal] = None
    high: Optional[Decimal] = None
    pattern: Optional[str] = None


@dataclass
class CompiledSource:
    schema_class: Iri
    unit_var: str
    subject_term: PlanTerm
    patterns: list[PlanTriple]
    class_checks: list[tuple[PlanTerm, Iri]]  # term must have this rdf:type
    filters: list[PlanFilter]
    slot_vars: dict[str, str]  # slot name -> var name (var slots only)
    fixed_slots: dict[str, Term]
    negated: bool


@dataclass
class QueryPlan:
    sources: list[CompiledSource]
    select_vars: list[str]
    ask: bool

    def var_names(self) -> list[str]:
        return list(self.select_vars)


def _sanitize(name: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9_]", "_", name)
    if not cleaned or cleaned[0].isdigit():
        cleaned = "v_" + cleaned
    return cleaned


def compile_question(question: QuestionUnit, schemas: SchemaRegistry) -> QueryPlan:
    """Deterministic plan mirroring each source schema's subject and slot paths."""
    sources: list[CompiledSource] = []
    var_kinds: dict[str, str] = {}
    select_vars: list[str] = []

    def claim_var(name: str, kind: str) -> str:
        existing = var_kinds.get(name)
        if existing is not None and existing != kind:
            raise ValidationError(
                f"join variable {name!r} used as {existing} and as {kind}"
            )
        var_kinds[name] = kind
        if name not in select_vars:
            select_vars.append(name)
        return name

    multi = len(question.sources) > 1
    for idx, source in enumerate(question.sources):
        schema = schemas.get(source.schema_class)
        unit_var = f"su{idx}"
        patterns: list[PlanTriple] = []
        class_checks: list[tuple[PlanTerm, Iri]] = []
        filters: list[PlanFilter] = []
        slot_vars: dict[str, str] = {}
        fixed_slots: dict[str, Term] = {}

        def auto_name(base: str) -> str:
            return _sanitize(base if not multi else f"{base}_{idx}")

        subject_binding = source.subject
        if subject_binding.quantifier == "most":
            raise ValidationError(
                "most-instances resources carry no query semantics and "
                "cannot serve as question variables"
            )
        if subject_binding.kind == FIXED:
            if not isinstance(subject_binding.term, Iri):
                raise ValidationError("a fixed subject must be a resource")
            subject_term: PlanTerm = subject_binding.term
        elif subject_binding.kind == VAR_LITERAL:
            raise ValidationError("the subject position takes resources only")
        elif subject_binding.kind == UNBOUND:
            # anonymous anchor: patterns need a subject but nothing projects it
            subject_term = Var(f"{unit_var}_subject")
        else:
            name = subject_binding.var or auto_name("subject")
            subject_term = Var(claim_var(name, "resource"))
            if subject_binding.class_constraint is not None:
                class_checks.append((subject_term, subject_binding.class_constraint))

        for slot in schema.slots:
            binding = source.slots.get(slot.name, Binding.unbound())
            if binding.quantifier == "most":
                raise ValidationError(
                    "most-instances resources carry no query semantics and "
                    "cannot serve as question variables"
                )
            if binding.kind == UNBOUND:
                continue
            if binding.kind == FIXED:
                term: PlanTerm = binding.term
                fixed_slots[slot.name] = binding.term
            elif binding.kind == VAR_RESOURCE:
                if slot.value_kind != "resource":
                    raise ValidationError(
                        f"slot {slot.name!r} holds literals; use a literal variable"
                    )
                name = claim_var(binding.var or auto_name(slot.name), "resource")
                term = Var(name)
                slot_vars[slot.name] = name
                if binding.class_constraint is not None:
                    class_checks.append((term, binding.class_constraint))
            else:  # VAR_LITERAL
                if slot.value_kind != "literal":
                    raise ValidationError(
                        f"slot {slot.name!r} holds resources; use a resource variable"
                    )
                datatype = binding.datatype or slot.datatype
                if binding.numeric_range is not None:
                    if datatype is None or str(datatype) not in NUMERIC_DATATYPES:
                        raise ValidationError(
                            f"slot {slot.name!r}: ranges need a numeric datatype"
                        )
                name = claim_var(binding.var or auto_name(slot.name), "literal")
                term = Var(name)
                slot_vars[slot.name] = name
                if binding.numeric_range is not None:
                    lo, hi = binding.numeric_range
                    filters.append(PlanFilter(kind="range", var=name, low=lo, high=hi))
                if binding.pattern is not None:
                    try:
                        re.compile(binding.pattern)
                    except re.error as exc:
                        raise ValidationError(
                            f"slot {slot.name!r}: bad pattern: {exc}"
                        ) from exc
                    filters.append(
                        PlanFilter(kind="pattern", var=name, pattern=binding.pattern)
                    )

            # expand the slot path with per-source intermediate variables
            current: PlanTerm = subject_term
            for depth, predicate in enumerate(slot.path):
                last = depth == len(slot.path) - 1
                nxt: PlanTerm
                if last:
                    nxt = term
                else:
                    hub = f"{unit_var}_hub_{_sanitize('_'.join(p.local_name for p in slot.path[: depth + 1]))}"
                    nxt = Var(hub)
                patterns.append(PlanTriple(current, predicate, nxt))
                current = nxt

        sources.append(
            CompiledSource(
                schema_class=schema.unit_class,
                unit_var=unit_var,
                subject_term=subject_term,
                patterns=_dedupe(patterns),
                class_checks=class_checks,
                filters=filters,
                slot_vars=slot_vars,
                fixed_slots=fixed_slots,
                negated=source.negated,
            )
        )

    return QueryPlan(sources=sources, select_vars=select_vars, ask=not select_vars)


def _dedupe(patterns: list[PlanTriple]) -> list[PlanTriple]:
    seen = set()
    out = []
    for p in patterns:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


# -- execution ----------------------------------------------------------------------


@dataclass(frozen=True)
class Match:
    """One satisfying assignment: variable values plus the supplying units."""

    bindings: tuple[tuple[str, Term], ...]
    units: tuple[Iri, ...]


@dataclass
class Row:
    bindings: dict[str, Term]
    units: list[Iri]


@dataclass
class ResultSet:
    ask: bool
    boolean: Optional[bool] = None
    rows: list[Row] = field(default_factory=list)
    matches: list[Match] = field(default_factory=list)

    def to_dict(self) -> dict:
        if self.ask:
            return {"boolean": self.boolean}
        return {
            "rows": [
                {
                    "bindings": {
                        name: _term_json(term) for name, term in row.bindings.items()
                    },
                    "units": [str(u) for u in row.units],
                }
                for row in self.rows
            ]
        }


def _term_json(term: Term):
    if isinstance(term, Literal):
        return {
            "literal": term.lexical,
            "datatype": str(term.datatype),
            "language": term.language,
        }
    return {"resource": str(term)}


def _source_matches(
    source: CompiledSource,
    schemas: SchemaRegistry,
    store: GraphStore,
    reg: UnitRegistry,
) -> list[dict]:
    """Assignments {var: term, '@unit': gupri} for one source schema."""
    schema = schemas.get(source.schema_class)
    out: list[dict] = []
    for unit in reg.by_class(source.schema_class):
        if unit.kind != UnitKind.STATEMENT or unit.negated != source.negated:
            continue
        if unit.subject is None:
            continue
        if isinstance(source.subject_term, Iri) and unit.subject != source.subject_term:
            continue
        walk = walk_instance(schema, unit.subject, store.graph_triples(unit.data_graph))
        for name, value in source.fixed_slots.items():
            if value not in walk.bindings.get(name, []):
                break
        else:
            # enumerate variable slots over their bound values
            var_slots = sorted(source.slot_vars.items())
            value_lists = []
            for slot_name, _ in var_slots:
                values = sorted(walk.bindings.get(slot_name, []), key=term_sort_key)
                value_lists.append(values)
            if any(not values for values in value_lists):
                continue
            for combo in itertools.product(*value_lists):
                assignment: dict = {"@unit": unit.gupri}
                if isinstance(source.subject_term, Var):
                    assignment[source.subject_term.name] = unit.subject
                ok = True
                for (slot_name, var_name), value in zip(var_slots, combo):
                    if var_name in assignment and assignment[var_name] != value:
                        ok = False
                        break
                    assignment[var_name] = value
                if not ok:
                    continue
                if not _passes_checks(source, assignment, store):
                    continue
                out.append(assignment)
    return out


def _passes_checks(source: CompiledSource, assignment: dict, store: GraphStore) -> bool:
    for term, cls in source.class_checks:
        value = assignment[term.name] if isinstance(term, Var) else term
        if not isinstance(value, Iri):
            return False
        if not store.match(subject=value, predicate=Iri(RDF_TYPE), object=cls):
            return False
    for flt in source.filters:
        value = assignment.get(flt.var)
        if not isinstance(value, Literal):
            return False
        if flt.kind == "range":
            number = value.decimal_value()
            if number is None or not (flt.low <= number <= flt.high):
                return False
        else:
            if re.fullmatch(flt.pattern, value.lexical) is None:
                return False
    return True


def execute(plan: QueryPlan, store: GraphStore, reg: UnitRegistry, schemas: SchemaRegistry) -> ResultSet:
    """Evaluate the plan; rows are deterministic, subject-first lexicographic."""
    per_source = [_source_matches(s, schemas, store, reg) for s in plan.sources]
    merged: list[dict] = [{"@units": ()}]
    for source, assignments in zip(plan.sources, per_source):
        nxt: list[dict] = []
        for acc in merged:
            for assignment in assignments:
                joined = dict(acc)
                ok = True
                for key, value in assignment.items():
                    if key == "@unit":
                        continue
                    if key in joined and joined[key] != value:
                        ok = False
                        break
                    joined[key] = value
                if ok:
                    joined["@units"] = acc["@units"] + (assignment["@unit"],)
                    nxt.append(joined)
        merged = nxt

    if plan.ask:
        return ResultSet(ask=True, boolean=bool(merged))

    matches = []
    for assignment in merged:
        bindings = tuple(
            (name, assignment[name]) for name in plan.select_vars if name in assignment
        )
        matches.append(Match(bindings=bindings, units=tuple(assignment["@units"])))
    matches = sorted(
        set(matches),
        key=lambda m: tuple(term_sort_key(v) for _, v in m.bindings)
        + (tuple(str(u) for u in m.units),),
    )

    rows: dict[tuple, Row] = {}
    for match in matches:
        key = match.bindings
        row = rows.get(key)
        if row is None:
            rows[key] = Row(bindings=dict(match.bindings), units=sorted(set(match.units)))
        else:
            row.units = sorted(set(row.units) | set(match.units))
    ordered = [rows[key] for key in sorted(
        rows, key=lambda k: tuple(term_sort_key(v) for _, v in k)
    )]
    return ResultSet(ask=False, rows=ordered, matches=matches)


# -- SPARQL emission ------------------------------------------------------------------


def _sparql_term(term: PlanTerm) -> str:
    if isinstance(term, Var):
        return str(term)
    return term_text(term)


def emit_query_text(plan: QueryPlan) -> str:
    """Standard SPARQL (SELECT or ASK) equivalent to the plan.

    Each source's patterns sit inside ``GRAPH ?suN`` since the data
    graph IRI of a statement unit is its GUPRI; unit-class selection
    and the negation flag come from the layer graph. Byte-stable for
    identical plans.
    """
    lines: list[str] = []
    if plan.ask:
        lines.append("ASK {")
    else:
        projected = [f"?{name}" for name in plan.select_vars]
        projected += [f"?{source.unit_var}" for source in plan.sources]
        lines.append(f"SELECT DISTINCT {' '.join(projected)} WHERE {{")

    check_idx = 0
    for source in plan.sources:
        unit = f"?{source.unit_var}"
        lines.append(f"  GRAPH <{vocab.LAYER_GRAPH}> {{")
        lines.append(f"    {unit} <{vocab.INSTANCE_OF}> <{source.schema_class}> .")
        flag = "true" if source.negated else "false"
        lines.append(
            f'    {unit} <{vocab.NEGATED}> "{flag}"^^<http://www.w3.org/2001/XMLSchema#boolean> .'
        )
        lines.append(
            f"    {unit} <{vocab.HAS_SUBJECT}> {_sparql_term(source.subject_term)} ."
        )
        lines.append("  }")
        if source.patterns:
            lines.append(f"  GRAPH {unit} {{")
            for pattern in source.patterns:
                lines.append(
                    f"    {_sparql_term(pattern.subject)} <{pattern.predicate}> "
                    f"{_sparql_term(pattern.object)} ."
                )
            lines.append("  }")
        for term, cls in source.class_checks:
            lines.append(
                f"  GRAPH ?typecheck{check_idx} {{ {_sparql_term(term)} "
                f"<{RDF_TYPE}> <{cls}> . }}"
            )
            check_idx += 1
        for flt in source.filters:
            if flt.kind == "range":
                lines.append(
                    f"  FILTER(?{flt.var} >= {flt.low} && ?{flt.var} <= {flt.high})"
                )
            else:
                anchored = f"^(?:{flt.pattern})$"
                escaped = anchored.replace("\\", "\\\\").replace('"', '\\"')
                lines.append(f'  FILTER(REGEX(STR(?{flt.var}), "{escaped}"))')
    lines.append("}")
    return "\n".join(lines) + "\n"


def binding_from_spec(spec, slot) -> Binding:
    """Build a binding from the compact form-style notation.

    A plain string is a fixed value (resource IRI or literal lexical,
    decided by the slot's kind); a mapping selects a variable with
    optional ``var``, ``class``, ``range``, ``pattern``, ``quantifier``;
    None or {"kind": "unbound"} leaves the slot unconstrained. ``slot``
    is None for the subject position, which always holds resources.
    """
    if spec is None:
        return Binding.unbound()
    if isinstance(spec, str):
        if slot is None or slot.value_kind == "resource":
            return Binding.fixed(Iri(spec))
        return Binding.fixed(
            Literal(spec, slot.datatype or Iri("http://www.w3.org/2001/XMLSchema#string"))
        )
    if not isinstance(spec, dict):
        raise ValidationError(f"binding spec must be a string or mapping: {spec!r}")
    if "fixed" in spec:
        value = spec["fixed"]
        if slot is None or slot.value_kind == "resource":
            return Binding.fixed(Iri(str(value)))
        return Binding.fixed(
            Literal(str(value), slot.datatype or Iri("http://www.w3.org/2001/XMLSchema#string"))
        )
    if spec.get("kind") == "unbound":
        return Binding.unbound()
    rng = None
    if spec.get("range") is not None:
        rng = (Decimal(str(spec["range"][0])), Decimal(str(spec["range"][1])))
    if slot is None or slot.value_kind == "resource":
        return Binding.var_resource(
            var=spec.get("var"),
            class_constraint=Iri(spec["class"]) if spec.get("class") else None,
            quantifier=spec.get("quantifier", "some"),
        )
    return Binding.var_literal(
        var=spec.get("var"),
        datatype=slot.datatype,
        numeric_range=rng,
        pattern=spec.get("pattern"),
    )


def sources_from_spec(doc: dict, schemas: SchemaRegistry) -> list[SourceBindings]:
    """Form-style question payload (API body or .question file) to bindings."""
    sources = []
    for entry in doc.get("sources", []) or []:
        schema_class = Iri(str(entry["schema"]))
        schema = schemas.get(schema_class)
        sources.append(
            SourceBindings(
                schema_class=schema_class,
                subject=binding_from_spec(entry.get("subject"), None),
                slots={
                    name: binding_from_spec(spec, schema.slot(name))
                    for name, spec in (entry.get("slots") or {}).items()
                },
                negated=bool(entry.get("negated")),
            )
        )
    return sources


def load_question_file(path, schemas: SchemaRegistry) -> list[SourceBindings]:
    """Parse a .question YAML file into source bindings."""
    import yaml

    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh) or {}
    return sources_from_spec(doc, schemas)
