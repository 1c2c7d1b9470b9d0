"""Unit registry: registration, layer mirror, merges, mention lookups."""

from __future__ import annotations

import pytest

from semunit import vocab
from semunit.errors import ConflictError, IntegrityError, NotFoundError, ValidationError
from semunit.partition import SlotBindings, mint_statement_unit, statement_about_unit
from semunit.store import GraphStore
from semunit.terms import Iri, Literal, Quad, Triple, XSD_DECIMAL
from semunit.units import (
    IdMinter,
    SemanticUnit,
    UnitKind,
    UnitMetadata,
    UnitRegistry,
    default_metadata,
)
from semunit.workspace import Workspace

from .conftest import CERTAINTY_CLASS, WEIGHT_CLASS, fresh_workspace, mint_simple
from .oracles import mention_scan, merged_graph


def statement(reg: UnitRegistry, store: GraphStore, subject: str, obj: str) -> SemanticUnit:
    gupri = reg.minter.mint()
    store.add_graph(gupri)
    store.insert(Quad(Triple(Iri(subject), Iri("urn:p:rel"), Iri(obj)), gupri))
    unit = SemanticUnit(
        gupri=gupri,
        unit_class=Iri("urn:c:rel"),
        kind=UnitKind.STATEMENT,
        metadata=default_metadata(),
        data_graph=gupri,
        subject=Iri(subject),
    )
    return reg.register(unit)


@pytest.fixture()
def reg():
    store = GraphStore()
    return UnitRegistry(store, minter=IdMinter(seed=5))


class TestRegistration:
    def test_layer_gains_instance_of_triple(self, orchard):
        weight_units = orchard.registry.by_class(WEIGHT_CLASS)
        assert len(weight_units) == 3
        for unit in weight_units:
            assert orchard.store.match(
                subject=unit.gupri,
                predicate=vocab.INSTANCE_OF,
                object=WEIGHT_CLASS,
                graph=vocab.LAYER_GRAPH,
            )

    def test_duplicate_gupri_conflicts(self, reg):
        unit = statement(reg, reg.store, "urn:s:a", "urn:o:b")
        clone = SemanticUnit(
            gupri=unit.gupri,
            unit_class=unit.unit_class,
            kind=UnitKind.STATEMENT,
            metadata=default_metadata(),
            data_graph=unit.data_graph,
            subject=unit.subject,
        )
        with pytest.raises(ConflictError):
            reg.register(clone)

    def test_compound_with_missing_member_is_integrity_error(self, reg):
        with pytest.raises(IntegrityError):
            reg.register(
                SemanticUnit(
                    gupri=Iri("urn:cu:1"),
                    unit_class=vocab.ITEM_UNIT,
                    kind=UnitKind.ITEM,
                    metadata=default_metadata(),
                    members=[Iri("urn:missing:1")],
                )
            )

    def test_mentions_after_registering_statements_and_item(self, reg):
        apple = "urn:r:appleX"
        s1 = statement(reg, reg.store, apple, "urn:o:1")
        s2 = statement(reg, reg.store, apple, "urn:o:2")
        s3 = statement(reg, reg.store, apple, "urn:o:3")
        item = SemanticUnit(
            gupri=Iri("urn:cu:item"),
            unit_class=vocab.ITEM_UNIT,
            kind=UnitKind.ITEM,
            metadata=default_metadata(),
            members=[s1.gupri, s2.gupri, s3.gupri],
            subject=Iri(apple),
        )
        reg.register(item)
        containing = reg.units_containing(Iri(apple))
        total = sum(len(v) for v in containing.values())
        assert total == 4
        assert containing == mention_scan(reg, Iri(apple))

    def test_layer_mirror_both_directions(self, orchard):
        reg = orchard.registry
        layer_instances = {
            q.subject
            for q in orchard.store.match(
                predicate=vocab.INSTANCE_OF, graph=vocab.LAYER_GRAPH
            )
            if str(q.object).startswith("https://w3id.org/semunit/")
            or str(q.object).startswith("urn:x-semunit:generic-class:")
        }
        registered = {u.gupri for u in reg.all_units()}
        assert registered <= layer_instances
        # and conversely: every instance-of subject that is unit-classed is registered
        for gupri in layer_instances:
            assert gupri in reg


class TestMergedDataGraph:
    def test_statement_base_case(self, reg):
        unit = statement(reg, reg.store, "urn:s:a", "urn:o:b")
        assert reg.merged_data_graph(unit.gupri) == reg.store.graph_triples(unit.data_graph)

    def test_disjoint_union(self, reg):
        s1 = statement(reg, reg.store, "urn:s:a", "urn:o:1")
        s2 = statement(reg, reg.store, "urn:s:a", "urn:o:2")
        item = reg.register(
            SemanticUnit(
                gupri=Iri("urn:cu:item2"),
                unit_class=vocab.ITEM_UNIT,
                kind=UnitKind.ITEM,
                metadata=default_metadata(),
                members=[s1.gupri, s2.gupri],
                subject=Iri("urn:s:a"),
            )
        )
        merged = reg.merged_data_graph(item.gupri)
        assert merged == reg.store.graph_triples(s1.data_graph) | reg.store.graph_triples(
            s2.data_graph
        )

    def test_shared_member_counted_once(self, reg):
        s1 = statement(reg, reg.store, "urn:s:a", "urn:o:1")
        s2 = statement(reg, reg.store, "urn:s:b", "urn:o:2")
        left = reg.register(
            SemanticUnit(
                gupri=Iri("urn:cu:left"),
                unit_class=vocab.DATASET_UNIT,
                kind=UnitKind.DATASET,
                metadata=default_metadata(),
                members=[s1.gupri, s2.gupri],
            )
        )
        right = reg.register(
            SemanticUnit(
                gupri=Iri("urn:cu:right"),
                unit_class=vocab.DATASET_UNIT,
                kind=UnitKind.DATASET,
                metadata=default_metadata(),
                members=[s2.gupri],
            )
        )
        top = reg.register(
            SemanticUnit(
                gupri=Iri("urn:cu:top"),
                unit_class=vocab.DATASET_UNIT,
                kind=UnitKind.DATASET,
                metadata=default_metadata(),
                members=[left.gupri, right.gupri],
            )
        )
        assert reg.merged_data_graph(top.gupri) == merged_graph(reg, top.gupri)
        assert len(reg.merged_data_graph(top.gupri)) == 2

    def test_unknown_gupri_not_found(self, reg):
        with pytest.raises(NotFoundError):
            reg.merged_data_graph(Iri("urn:missing:x"))

    def test_pure_function_of_state(self, reg):
        s1 = statement(reg, reg.store, "urn:s:a", "urn:o:1")
        first = reg.merged_data_graph(s1.gupri)
        second = reg.merged_data_graph(s1.gupri)
        assert first == second


class TestMembershipCycles:
    def test_update_creating_cycle_rejected(self, reg):
        s1 = statement(reg, reg.store, "urn:s:a", "urn:o:1")
        inner = reg.register(
            SemanticUnit(
                gupri=Iri("urn:cu:inner"),
                unit_class=vocab.DATASET_UNIT,
                kind=UnitKind.DATASET,
                metadata=default_metadata(),
                members=[s1.gupri],
            )
        )
        outer = reg.register(
            SemanticUnit(
                gupri=Iri("urn:cu:outer"),
                unit_class=vocab.DATASET_UNIT,
                kind=UnitKind.DATASET,
                metadata=default_metadata(),
                members=[inner.gupri],
            )
        )
        with pytest.raises(IntegrityError):
            reg.update_members(inner.gupri, [s1.gupri, outer.gupri])

    def test_self_membership_rejected(self, reg):
        with pytest.raises(IntegrityError):
            reg.register(
                SemanticUnit(
                    gupri=Iri("urn:cu:self"),
                    unit_class=vocab.DATASET_UNIT,
                    kind=UnitKind.DATASET,
                    metadata=default_metadata(),
                    members=[Iri("urn:cu:self")],
                )
            )


class TestMetadata:
    def test_last_updated_must_not_precede_created(self):
        with pytest.raises(ValidationError):
            UnitMetadata(
                creator=Iri("urn:agent:x"),
                created="2024-05-02T00:00:00+00:00",
                last_updated="2024-05-01T00:00:00+00:00",
            )

    def test_creator_and_author_are_distinct_fields(self):
        md = UnitMetadata(
            creator=Iri("urn:agent:x"),
            created="2024-05-01T00:00:00+00:00",
            last_updated="2024-05-01T00:00:00+00:00",
            author=Iri("urn:agent:x"),
        )
        assert md.creator == md.author
        assert md.to_dict()["creator"] == md.to_dict()["author"]


class TestStatementsAboutStatements:
    def test_certainty_statement_about_weight_unit(self, orchard):
        weight_unit = orchard.registry.by_class(WEIGHT_CLASS)[0]
        schema = orchard.schemas.get(CERTAINTY_CLASS)
        about = statement_about_unit(
            orchard.store,
            orchard.registry,
            schema,
            weight_unit.gupri,
            {"certainty": [Literal("0.95", Iri(XSD_DECIMAL))]},
        )
        assert about.subject == weight_unit.gupri
        containing = orchard.registry.units_containing(weight_unit.gupri)
        assert about.gupri in containing[UnitKind.STATEMENT]

    def test_unknown_subject_unit(self, orchard):
        schema = orchard.schemas.get(CERTAINTY_CLASS)
        with pytest.raises(NotFoundError):
            statement_about_unit(
                orchard.store,
                orchard.registry,
                schema,
                Iri("urn:missing:unit"),
                {"certainty": [Literal("0.5", Iri(XSD_DECIMAL))]},
            )

    def test_schema_must_accept_unit_subjects(self, orchard):
        weight_unit = orchard.registry.by_class(WEIGHT_CLASS)[0]
        weight_schema = orchard.schemas.get(WEIGHT_CLASS)
        with pytest.raises(ValidationError):
            statement_about_unit(
                orchard.store,
                orchard.registry,
                weight_schema,
                weight_unit.gupri,
                {"value": [Literal("1", Iri(XSD_DECIMAL))]},
            )

    def test_two_independent_statements_about_same_unit(self, orchard):
        weight_unit = orchard.registry.by_class(WEIGHT_CLASS)[0]
        schema = orchard.schemas.get(CERTAINTY_CLASS)
        a = statement_about_unit(
            orchard.store, orchard.registry, schema, weight_unit.gupri,
            {"certainty": [Literal("0.95", Iri(XSD_DECIMAL))]},
        )
        b = statement_about_unit(
            orchard.store, orchard.registry, schema, weight_unit.gupri,
            {"certainty": [Literal("0.80", Iri(XSD_DECIMAL))]},
        )
        containing = orchard.registry.units_containing(weight_unit.gupri)
        assert {a.gupri, b.gupri} <= set(containing[UnitKind.STATEMENT])
        assert containing == mention_scan(orchard.registry, weight_unit.gupri)


class TestRevisions:
    def test_revising_links_units_in_layer(self, orchard):
        from semunit.schemas import render_label

        old = orchard.registry.by_class(WEIGHT_CLASS)[0]
        schema = orchard.schemas.get(WEIGHT_CLASS)
        from semunit.schemas import walk_instance

        walk = walk_instance(
            schema, old.subject, orchard.store.graph_triples(old.data_graph)
        )
        values = dict(walk.bindings)
        values["value"] = [Literal("210.0", Iri(XSD_DECIMAL))]
        new = mint_statement_unit(
            orchard.store,
            orchard.registry,
            schema,
            SlotBindings(subject=old.subject, values=values),
            revises=old.gupri,
        )
        assert orchard.registry.revisions_of(old.gupri) == [new.gupri]
        assert "210.0" in render_label(schema, new, orchard.store)


class TestJournalPersistence:
    def test_reopen_restores_units_and_kinds(self, tmp_path):
        ws = Workspace.open(tmp_path / "store", seed=31)
        from semunit.units import ResourceKind

        ws.registry.declare_resource_kind(Iri("urn:r:cls"), ResourceKind.ONTOLOGY_CLASS)
        unit = statement(ws.registry, ws.store, "urn:s:a", "urn:o:b")
        ws.close()

        reopened = Workspace.open(tmp_path / "store")
        assert unit.gupri in reopened.registry
        restored = reopened.registry.get(unit.gupri)
        assert restored.subject == Iri("urn:s:a")
        assert reopened.registry.resource_kind(Iri("urn:r:cls")) == ResourceKind.ONTOLOGY_CLASS
        assert reopened.store.graph_triples(unit.data_graph)
        reopened.close()
