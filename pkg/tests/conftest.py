"""Shared fixtures: the orchard, anatomy, travel, and scholarly worlds."""

from __future__ import annotations

import json
import subprocess
from pathlib import Path

import pytest

from semunit import compound, interop, vocab
from semunit.partition import SlotBindings, mint_generic_unit, mint_statement_unit
from semunit.terms import Iri, Literal, Triple, XSD_DECIMAL, XSD_STRING, RDF_TYPE
from semunit.units import ResourceKind
from semunit.workspace import Workspace, builtin_schema_dir

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
ENGINE = Path(__file__).resolve().parent / "engine"

ORCHARD = "http://example.org/orchard#"
ANATOMY_PART = "http://purl.obolibrary.org/obo/BFO_0000051"
ADJACENT = "http://purl.obolibrary.org/obo/RO_0002220"
SCHOLARLY = "http://example.org/scholarly#"
UBERON_ANTENNA = "http://purl.obolibrary.org/obo/UBERON_0000972"
UBERON_HEAD = "http://purl.obolibrary.org/obo/UBERON_0000033"

WEIGHT_CLASS = Iri("https://w3id.org/semunit/class/weight-statement")
NAME_CLASS = Iri("https://w3id.org/semunit/class/name-statement")
TRAVEL_CLASS = Iri("https://w3id.org/semunit/class/travel-statement")
HAS_PART_CLASS = Iri("https://w3id.org/semunit/class/has-part-statement")
ADJACENCY_CLASS = Iri("https://w3id.org/semunit/class/adjacency-statement")
HAS_SHAPE_CLASS = Iri("https://w3id.org/semunit/class/has-shape-statement")
HAS_LENGTH_CLASS = Iri("https://w3id.org/semunit/class/has-length-statement")
HAS_WIDTH_CLASS = Iri("https://w3id.org/semunit/class/has-width-statement")
POSITIONAL_CLASS = Iri("https://w3id.org/semunit/class/positional-relationship-statement")
REPRO_CLASS = Iri("https://w3id.org/semunit/class/basic-reproduction-number-statement")
IS_ABOUT_CLASS = Iri("https://w3id.org/semunit/class/is-about-statement")
CERTAINTY_CLASS = Iri("https://w3id.org/semunit/class/certainty-statement")
ARTICLE_CLASS = Iri("https://w3id.org/semunit/class/scholarly-article-unit")


def fresh_workspace(seed: int = 11) -> Workspace:
    return Workspace.in_memory(schema_paths=[builtin_schema_dir()], seed=seed)


@pytest.fixture()
def ws() -> Workspace:
    return fresh_workspace()


@pytest.fixture()
def orchard() -> Workspace:
    workspace = fresh_workspace(seed=101)
    interop.ingest_rdf(
        FIXTURES / "orchard.ttl",
        workspace.store,
        workspace.registry,
        workspace.schemas,
    )
    return workspace


def mint_name(workspace: Workspace, subject: str, name: str):
    schema = workspace.schemas.get(NAME_CLASS)
    return mint_statement_unit(
        workspace.store,
        workspace.registry,
        schema,
        SlotBindings(subject=Iri(subject), values={"name": [Literal(name, Iri(XSD_STRING))]}),
    )


def mint_simple(workspace: Workspace, schema_class, subject: str, slot: str, value):
    schema = workspace.schemas.get(schema_class)
    term = value if not isinstance(value, str) else Iri(value)
    return mint_statement_unit(
        workspace.store,
        workspace.registry,
        schema,
        SlotBindings(subject=Iri(subject), values={slot: [term]}),
    )


@pytest.fixture()
def anatomy() -> Workspace:
    """Negated parthood on head x, a positive parthood chain, adjacency."""
    workspace = fresh_workspace(seed=202)
    reg = workspace.registry
    some_antenna = "http://example.org/anatomy#some_antenna"
    head_x = "http://example.org/anatomy#head_x"
    body_y = "http://example.org/anatomy#body_y"
    head_y = "http://example.org/anatomy#head_y"
    eye_y = "http://example.org/anatomy#eye_y"

    reg.declare_resource_kind(Iri(some_antenna), ResourceKind.SOME_INSTANCE)
    reg.declare_resource_kind(Iri(UBERON_ANTENNA), ResourceKind.ONTOLOGY_CLASS)
    reg.declare_resource_kind(Iri(UBERON_HEAD), ResourceKind.ONTOLOGY_CLASS)

    mint_name(workspace, head_x, "head x")
    mint_name(workspace, some_antenna, "antenna")
    mint_name(workspace, body_y, "body y")
    mint_name(workspace, head_y, "head y")
    mint_name(workspace, eye_y, "eye y")

    schema = workspace.schemas.get(HAS_PART_CLASS)
    negated = mint_statement_unit(
        workspace.store,
        reg,
        schema,
        SlotBindings(subject=Iri(head_x), values={"part": [Iri(some_antenna)]}),
        negated=True,
    )
    instantiation = mint_generic_unit(
        workspace.store,
        reg,
        Triple(Iri(some_antenna), Iri(RDF_TYPE), Iri(UBERON_ANTENNA)),
    )
    chain1 = mint_simple(workspace, HAS_PART_CLASS, body_y, "part", head_y)
    chain2 = mint_simple(workspace, HAS_PART_CLASS, head_y, "part", eye_y)
    adjacency = mint_simple(workspace, ADJACENCY_CLASS, head_y, "neighbor", eye_y)

    workspace.key_units = {
        "negated": negated,
        "instantiation": instantiation,
        "chain": [chain1, chain2],
        "adjacency": adjacency,
    }
    workspace.resources = {
        "head_x": Iri(head_x),
        "some_antenna": Iri(some_antenna),
        "body_y": Iri(body_y),
        "head_y": Iri(head_y),
        "eye_y": Iri(eye_y),
    }
    return workspace


def build_scholarly(workspace: Workspace) -> dict:
    """The article world: partonomy, measurements, aboutness, estimates."""
    reg = workspace.registry
    S = SCHOLARLY

    def r(name: str) -> Iri:
        return Iri(S + name)

    names = {
        "pub1": "Anatomy of specimen S1",
        "population1": "infectious agent population",
        "specimen1": "specimen S1",
        "head1": "head of S1",
        "antenna1": "antenna of S1",
        "eye1": "eye of S1",
        "oval": "oval",
        "millimeter": "mm",
        "anterior": "anterior to",
    }
    for local, label in names.items():
        mint_name(workspace, S + local, label)

    is_about = [
        mint_simple(workspace, IS_ABOUT_CLASS, S + "pub1", "about", S + "specimen1"),
        mint_simple(workspace, IS_ABOUT_CLASS, S + "pub1", "about", S + "population1"),
    ]
    parts = [
        mint_simple(workspace, HAS_PART_CLASS, S + "specimen1", "part", S + "head1"),
        mint_simple(workspace, HAS_PART_CLASS, S + "specimen1", "part", S + "eye1"),
        mint_simple(workspace, HAS_PART_CLASS, S + "head1", "part", S + "antenna1"),
    ]
    shape = mint_simple(workspace, HAS_SHAPE_CLASS, S + "head1", "shape", S + "oval")

    def measurement(schema_class, subject: str, value: str, kind: str):
        schema = workspace.schemas.get(schema_class)
        return mint_statement_unit(
            workspace.store,
            reg,
            schema,
            SlotBindings(
                subject=r(subject),
                values={
                    "value": [Literal(value, Iri(XSD_DECIMAL))],
                    "unit": [r("millimeter")],
                    "quantity_kind": [r(kind)],
                },
            ),
        )

    length = measurement(HAS_LENGTH_CLASS, "antenna1", "3.2", "LengthMeasurement")
    width = measurement(HAS_WIDTH_CLASS, "antenna1", "0.4", "WidthMeasurement")

    positional_schema = workspace.schemas.get(POSITIONAL_CLASS)
    positional = mint_statement_unit(
        workspace.store,
        reg,
        positional_schema,
        SlotBindings(
            subject=r("antenna1"),
            values={"position": [r("anterior")], "relatum": [r("eye1")]},
        ),
    )

    repro_schema = workspace.schemas.get(REPRO_CLASS)
    estimates = []
    for value in ("2.5", "3.1"):
        estimates.append(
            mint_statement_unit(
                workspace.store,
                reg,
                repro_schema,
                SlotBindings(
                    subject=r("population1"),
                    values={
                        "value": [Literal(value, Iri(XSD_DECIMAL))],
                        "estimate_kind": [r("ReproductionNumberEstimate")],
                    },
                ),
            )
        )

    items = compound.build_item_units(reg)
    groups = compound.build_item_group_units(reg)
    perspective = workspace.schemas.perspectives[HAS_PART_CLASS]
    trees = compound.build_granularity_tree_units(reg, perspective)
    assert len(trees.units) == 1, [d.reason for d in trees.diagnostics]
    granular = compound.build_granular_item_group(reg, trees.units[0].gupri)
    contexts = compound.build_context_units(reg, workspace.schemas)

    item_by_subject = {u.subject: u for u in reg.by_kind(compound.UnitKind.ITEM)}
    definition = workspace.schemas.standard_definitions[ARTICLE_CLASS]
    article = compound.make_standard_information_unit(
        reg,
        definition,
        members=[trees.units[0].gupri]
        + [
            item_by_subject[r(local)].gupri
            for local in ("pub1", "population1", "specimen1", "head1", "antenna1", "eye1")
        ],
    )

    return {
        "is_about": is_about,
        "parts": parts,
        "shape": shape,
        "length": length,
        "width": width,
        "positional": positional,
        "estimates": estimates,
        "items": items,
        "groups": groups,
        "tree": trees.units[0],
        "granular": granular.unit,
        "contexts": contexts,
        "article": article,
        "item_by_subject": item_by_subject,
        "r": r,
    }


@pytest.fixture()
def scholarly() -> tuple[Workspace, dict]:
    workspace = fresh_workspace(seed=303)
    world = build_scholarly(workspace)
    return workspace, world


# -- third-party engine -----------------------------------------------------


@pytest.fixture(scope="session")
def engine():
    """Runs data plus SPARQL through the oxigraph wasm engine via node."""
    if not (ENGINE / "node_modules" / "oxigraph").exists():
        try:
            subprocess.run(
                ["npm", "install", "--no-audit", "--no-fund"],
                cwd=ENGINE,
                check=True,
                capture_output=True,
                timeout=300,
            )
        except (subprocess.CalledProcessError, FileNotFoundError, subprocess.TimeoutExpired) as exc:
            pytest.skip(f"oxigraph engine unavailable: {exc}")

    def run(data: str, fmt: str, query: str | None = None, tmp_path: Path = Path("/tmp")) -> dict:
        data_file = tmp_path / "engine_data.bin"
        data_file.write_text(data, encoding="utf-8")
        cmd = ["node", str(ENGINE / "run_sparql.js"), str(data_file), fmt]
        if query is not None:
            query_file = tmp_path / "engine_query.rq"
            query_file.write_text(query, encoding="utf-8")
            cmd.append(str(query_file))
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=120)
        if proc.returncode != 0:
            raise AssertionError(f"engine failed: {proc.stderr}")
        return json.loads(proc.stdout)

    return run
