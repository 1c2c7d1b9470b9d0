"""Compound builders against group-by, BFS, union-find, and tree oracles."""

from __future__ import annotations

import random

import pytest

from semunit import compound, vocab
from semunit.errors import IntegrityError, UnitTypeError, ValidationError
from semunit.partition import SlotBindings, mint_statement_unit
from semunit.schemas import GranularityPerspective, StandardInformationDefinition
from semunit.terms import Iri, Literal, XSD_DECIMAL
from semunit.units import UnitKind

from .conftest import (
    ADJACENCY_CLASS,
    ARTICLE_CLASS,
    HAS_LENGTH_CLASS,
    HAS_PART_CLASS,
    IS_ABOUT_CLASS,
    WEIGHT_CLASS,
    fresh_workspace,
    mint_simple,
)
from .generators import random_populated_workspace
from .oracles import bfs_item_components, items_by_subject, tree_check, union_find_contexts


class TestItemUnits:
    def test_group_by_subject_on_orchard(self, orchard):
        items = compound.build_item_units(orchard.registry)
        expected = items_by_subject(orchard.registry)
        assert {u.subject for u in items} == set(expected)
        for unit in items:
            assert unit.members == expected[unit.subject]

    def test_zero_statements_zero_items(self, ws):
        assert compound.build_item_units(ws.registry) == []

    def test_one_subject_three_statements_one_item(self, ws):
        for part in ("urn:part:a", "urn:part:b", "urn:part:c"):
            mint_simple(ws, HAS_PART_CLASS, "urn:body:1", "part", part)
        items = compound.build_item_units(ws.registry)
        assert len(items) == 1
        assert len(items[0].members) == 3

    def test_rebuild_updates_instead_of_duplicating(self, ws):
        mint_simple(ws, HAS_PART_CLASS, "urn:body:1", "part", "urn:part:a")
        first = compound.build_item_units(ws.registry)
        mint_simple(ws, HAS_PART_CLASS, "urn:body:1", "part", "urn:part:b")
        second = compound.build_item_units(ws.registry)
        assert [u.gupri for u in first] == [u.gupri for u in second]
        assert len(second[0].members) == 2
        # no duplicate item units
        assert len(ws.registry.by_kind(UnitKind.ITEM)) == 1

    def test_statements_about_units_get_no_item(self, orchard):
        from semunit.partition import statement_about_unit
        from .conftest import CERTAINTY_CLASS

        target = orchard.registry.by_class(WEIGHT_CLASS)[0]
        schema = orchard.schemas.get(CERTAINTY_CLASS)
        statement_about_unit(
            orchard.store,
            orchard.registry,
            schema,
            target.gupri,
            {"certainty": [Literal("0.9", Iri(XSD_DECIMAL))]},
        )
        items = compound.build_item_units(orchard.registry)
        assert all(u.subject != target.gupri for u in items)


class TestItemGroups:
    def test_two_unlinked_items_no_group(self, ws):
        mint_simple(ws, HAS_PART_CLASS, "urn:a:1", "part", "urn:a:2x")
        mint_simple(ws, HAS_PART_CLASS, "urn:b:1", "part", "urn:b:2x")
        compound.build_item_units(ws.registry)
        assert compound.build_item_group_units(ws.registry) == []

    def test_chain_plus_isolated(self, ws):
        # chain a -> b -> c, isolated d
        mint_simple(ws, HAS_PART_CLASS, "urn:n:a", "part", "urn:n:b")
        mint_simple(ws, HAS_PART_CLASS, "urn:n:b", "part", "urn:n:c")
        mint_simple(ws, HAS_PART_CLASS, "urn:n:c", "part", "urn:leaf:x")
        mint_simple(ws, HAS_PART_CLASS, "urn:n:d", "part", "urn:leaf:y")
        items = compound.build_item_units(ws.registry)
        groups = compound.build_item_group_units(ws.registry)
        assert len(groups) == 1
        subjects = {ws.registry.get(m).subject for m in groups[0].members}
        assert subjects == {Iri("urn:n:a"), Iri("urn:n:b"), Iri("urn:n:c")}

    def test_groups_equal_bfs_components(self, scholarly):
        workspace, world = scholarly
        groups = workspace.registry.by_kind(UnitKind.ITEM_GROUP)
        expected = {c for c in bfs_item_components(workspace.registry) if len(c) >= 2}
        assert {frozenset(g.members) for g in groups} == expected

    def test_scholarly_group_contains_publication_and_population(self, scholarly):
        workspace, world = scholarly
        groups = workspace.registry.by_kind(UnitKind.ITEM_GROUP)
        assert len(groups) == 1
        pub_item = world["item_by_subject"][world["r"]("pub1")]
        pop_item = world["item_by_subject"][world["r"]("population1")]
        assert pub_item.gupri in groups[0].members
        assert pop_item.gupri in groups[0].members


class TestGranularityTrees:
    def test_two_unit_chain_is_one_tree(self, anatomy):
        perspective = anatomy.schemas.perspectives[HAS_PART_CLASS]
        result = compound.build_granularity_tree_units(anatomy.registry, perspective)
        assert len(result.units) == 1
        chain = anatomy.key_units["chain"]
        assert set(result.units[0].members) == {c.gupri for c in chain}
        edges = compound.relation_edges(anatomy.registry, HAS_PART_CLASS)
        assert tree_check({g: edges[g] for g in result.units[0].members})

    def test_negated_units_excluded_from_trees(self, anatomy):
        edges = compound.relation_edges(anatomy.registry, HAS_PART_CLASS)
        negated = anatomy.key_units["negated"]
        assert negated.gupri not in edges

    def test_cycle_skipped_with_diagnostic(self, ws):
        mint_simple(ws, HAS_PART_CLASS, "urn:c:a", "part", "urn:c:b")
        mint_simple(ws, HAS_PART_CLASS, "urn:c:b", "part", "urn:c:a")
        perspective = ws.schemas.perspectives[HAS_PART_CLASS]
        result = compound.build_granularity_tree_units(ws.registry, perspective)
        assert result.units == []
        assert [d.reason for d in result.diagnostics] == ["cycle"]

    def test_single_unit_is_too_small(self, ws):
        mint_simple(ws, HAS_PART_CLASS, "urn:s:a", "part", "urn:s:b")
        perspective = ws.schemas.perspectives[HAS_PART_CLASS]
        result = compound.build_granularity_tree_units(ws.registry, perspective)
        assert result.units == []
        assert [d.reason for d in result.diagnostics] == ["too small"]

    def test_shared_child_skipped_as_multi_parent(self, ws):
        mint_simple(ws, HAS_PART_CLASS, "urn:m:a", "part", "urn:m:shared")
        mint_simple(ws, HAS_PART_CLASS, "urn:m:b", "part", "urn:m:shared")
        perspective = ws.schemas.perspectives[HAS_PART_CLASS]
        result = compound.build_granularity_tree_units(ws.registry, perspective)
        assert result.units == []
        assert [d.reason for d in result.diagnostics] == ["multiple parents"]


class TestGranularItemGroups:
    def test_members_are_tree_plus_items(self, ws):
        mint_simple(ws, HAS_PART_CLASS, "urn:g:a", "part", "urn:g:b")
        mint_simple(ws, HAS_PART_CLASS, "urn:g:b", "part", "urn:g:c")
        # items exist for a and b (statement subjects); c has none
        compound.build_item_units(ws.registry)
        perspective = ws.schemas.perspectives[HAS_PART_CLASS]
        tree = compound.build_granularity_tree_units(ws.registry, perspective).units[0]
        result = compound.build_granular_item_group(ws.registry, tree.gupri)
        assert result.unit.members[0] == tree.gupri
        assert len(result.unit.members) == 3  # tree + 2 items
        assert result.missing_items == [Iri("urn:g:c")]

    def test_all_items_present_makes_four_members(self, ws):
        mint_simple(ws, HAS_PART_CLASS, "urn:h:a", "part", "urn:h:b")
        mint_simple(ws, HAS_PART_CLASS, "urn:h:b", "part", "urn:h:c")
        mint_simple(ws, ADJACENCY_CLASS, "urn:h:c", "neighbor", "urn:h:a")
        compound.build_item_units(ws.registry)
        perspective = ws.schemas.perspectives[HAS_PART_CLASS]
        tree = compound.build_granularity_tree_units(ws.registry, perspective).units[0]
        result = compound.build_granular_item_group(ws.registry, tree.gupri)
        assert len(result.unit.members) == 4
        assert result.missing_items == []

    def test_non_tree_input_rejected(self, ws):
        mint_simple(ws, HAS_PART_CLASS, "urn:k:a", "part", "urn:k:b")
        items = compound.build_item_units(ws.registry)
        with pytest.raises(UnitTypeError):
            compound.build_granular_item_group(ws.registry, items[0].gupri)


class TestContextUnits:
    def test_fully_connected_no_is_about_one_context(self, orchard):
        contexts = compound.build_context_units(orchard.registry, orchard.schemas)
        assert len(contexts) == 1

    def test_two_halves_joined_by_is_about_split(self, ws):
        mint_simple(ws, HAS_PART_CLASS, "urn:left:a", "part", "urn:left:b")
        mint_simple(ws, HAS_PART_CLASS, "urn:right:a", "part", "urn:right:b")
        mint_simple(ws, IS_ABOUT_CLASS, "urn:left:a", "about", "urn:right:a")
        contexts = compound.build_context_units(ws.registry, ws.schemas)
        assert len(contexts) == 2
        is_about_units = ws.registry.by_class(IS_ABOUT_CLASS)
        for context in contexts:
            for unit in is_about_units:
                assert unit.gupri not in context.members

    def test_contexts_equal_union_find_oracle(self, scholarly):
        workspace, _ = scholarly
        contexts = workspace.registry.by_kind(UnitKind.CONTEXT)
        expected = union_find_contexts(workspace.registry, {IS_ABOUT_CLASS})
        assert {frozenset(c.members) for c in contexts} == set(expected)

    def test_empty_registry_no_contexts(self, ws):
        assert compound.build_context_units(ws.registry, ws.schemas) == []

    def test_every_non_about_statement_in_exactly_one_context(self, scholarly):
        workspace, _ = scholarly
        contexts = workspace.registry.by_kind(UnitKind.CONTEXT)
        seen: dict = {}
        for context in contexts:
            for member in context.members:
                assert member not in seen, "statement unit in two contexts"
                seen[member] = context.gupri
        for unit in workspace.registry.by_kind(UnitKind.STATEMENT):
            if compound.is_about_unit(unit, workspace.schemas):
                assert unit.gupri not in seen
            else:
                assert unit.gupri in seen


class TestStandardInformation:
    def test_scholarly_article_definition_met(self, scholarly):
        workspace, world = scholarly
        assert world["article"].unit_class == ARTICLE_CLASS

    def test_missing_requirement_is_completeness_error(self, ws):
        mint_simple(ws, HAS_PART_CLASS, "urn:sa:a", "part", "urn:sa:b")
        items = compound.build_item_units(ws.registry)
        definition = ws.schemas.standard_definitions[ARTICLE_CLASS]
        with pytest.raises(ValidationError) as err:
            compound.make_standard_information_unit(
                ws.registry, definition, [items[0].gupri]
            )
        assert any("has-length" in d for d in err.value.details)

    def test_empty_requirement_set_rejected_at_definition(self):
        with pytest.raises(Exception):
            StandardInformationDefinition(
                gupri=Iri("urn:def:empty"), label="empty", required_statement_classes={}
            )


class TestLogicalArguments:
    def test_swan_deduction(self, ws):
        from semunit.units import ResourceKind

        ws.registry.declare_resource_kind(Iri("urn:cls:swan"), ResourceKind.ONTOLOGY_CLASS)
        universal = mint_simple(ws, HAS_PART_CLASS, "urn:cls:swan", "part", "urn:cls:white-plumage")
        premise2 = mint_simple(ws, HAS_PART_CLASS, "urn:swan:anton", "part", "urn:thing:feather")
        conclusion = mint_simple(ws, HAS_PART_CLASS, "urn:swan:anton", "part", "urn:thing:white-feather")
        argument = compound.make_logical_argument_unit(
            ws.registry, universal.gupri, premise2.gupri, conclusion.gupri, "deduction"
        )
        assert argument.unit_class == vocab.DEDUCTION_UNIT
        assert len(argument.members) == 3
        premises = ws.store.match(
            subject=argument.gupri, predicate=vocab.HAS_PREMISE, graph=vocab.LAYER_GRAPH
        )
        assert {q.object for q in premises} == {universal.gupri, premise2.gupri}

    def test_conclusion_may_equal_premise(self, ws):
        p1 = mint_simple(ws, HAS_PART_CLASS, "urn:x:a", "part", "urn:x:b")
        p2 = mint_simple(ws, HAS_PART_CLASS, "urn:x:b", "part", "urn:x:c")
        argument = compound.make_logical_argument_unit(
            ws.registry, p1.gupri, p2.gupri, p1.gupri, "induction"
        )
        assert argument.members == [p1.gupri, p2.gupri, p1.gupri]

    def test_non_statement_member_is_type_error(self, ws):
        p1 = mint_simple(ws, HAS_PART_CLASS, "urn:y:a", "part", "urn:y:b")
        p2 = mint_simple(ws, HAS_PART_CLASS, "urn:y:b", "part", "urn:y:c")
        items = compound.build_item_units(ws.registry)
        with pytest.raises(UnitTypeError):
            compound.make_logical_argument_unit(
                ws.registry, p1.gupri, items[0].gupri, p2.gupri, "deduction"
            )

    def test_unknown_kind_rejected(self, ws):
        p1 = mint_simple(ws, HAS_PART_CLASS, "urn:z:a", "part", "urn:z:b")
        with pytest.raises(ValidationError):
            compound.make_logical_argument_unit(
                ws.registry, p1.gupri, p1.gupri, p1.gupri, "speculation"
            )


class TestDatasetUnits:
    def test_order_preserved(self, ws):
        s1 = mint_simple(ws, HAS_PART_CLASS, "urn:d:a", "part", "urn:d:b")
        s2 = mint_simple(ws, HAS_PART_CLASS, "urn:d:b", "part", "urn:d:c")
        dataset = compound.make_dataset_unit(ws.registry, [s2.gupri, s1.gupri])
        assert dataset.members == [s2.gupri, s1.gupri]

    def test_empty_rejected(self, ws):
        with pytest.raises(IntegrityError):
            compound.make_dataset_unit(ws.registry, [])

    def test_ten_unit_batch(self, ws):
        units = [
            mint_simple(ws, HAS_PART_CLASS, f"urn:w:{i}", "part", f"urn:w:{i}p")
            for i in range(10)
        ]
        dataset = compound.make_dataset_unit(ws.registry, [u.gupri for u in units])
        assert len(dataset.members) == 10


class TestBuilderLawsOnRandomRegistries:
    def test_compound_laws_hold(self):
        rng = random.Random(31337)
        for _ in range(25):
            ws = random_populated_workspace(rng, max_triples=60)
            items = compound.build_item_units(ws.registry)
            expected_items = items_by_subject(ws.registry)
            assert {u.subject: u.members for u in items} == expected_items

            groups = compound.build_item_group_units(ws.registry)
            expected_groups = {
                c for c in bfs_item_components(ws.registry) if len(c) >= 2
            }
            assert {frozenset(g.members) for g in groups} == expected_groups

            contexts = compound.build_context_units(ws.registry, ws.schemas)
            expected_contexts = union_find_contexts(ws.registry, set())
            assert {frozenset(c.members) for c in contexts} == set(expected_contexts)

            # idempotency across the board
            assert [u.gupri for u in compound.build_item_units(ws.registry)] == [
                u.gupri for u in items
            ]
            assert [g.gupri for g in compound.build_item_group_units(ws.registry)] == [
                g.gupri for g in groups
            ]
            assert [
                c.gupri for c in compound.build_context_units(ws.registry, ws.schemas)
            ] == [c.gupri for c in contexts]
