"""Reserved vocabulary: unit kind classes, category classes, predicates.

The same table ships as ``data/vocab.json`` so non-Python consumers can
resolve the IRIs this engine writes into the unit-description layer.
"""

from __future__ import annotations

import json
from importlib import resources

from .terms import Iri, RDF_TYPE

SU = "https://w3id.org/semunit/vocab#"
DCTERMS = "http://purl.org/dc/terms/"
PAV = "http://purl.org/pav/"
SCHEMA_ORG = "https://schema.org/"
SKOS = "http://www.w3.org/2004/02/skos/core#"
NP = "http://www.nanopub.org/nschema#"
PROV = "http://www.w3.org/ns/prov#"

# layer bookkeeping
LAYER_GRAPH = Iri("urn:x-semunit:layer")
STORE_IRI = Iri("urn:x-semunit:graph")
INSTANCE_OF = Iri(RDF_TYPE)

# unit kind classes
STATEMENT_UNIT = Iri(SU + "StatementUnit")
ITEM_UNIT = Iri(SU + "ItemUnit")
ITEM_GROUP_UNIT = Iri(SU + "ItemGroupUnit")
GRANULARITY_TREE_UNIT = Iri(SU + "GranularityTreeUnit")
GRANULAR_ITEM_GROUP_UNIT = Iri(SU + "GranularItemGroupUnit")
CONTEXT_UNIT = Iri(SU + "ContextUnit")
STANDARD_INFORMATION_UNIT = Iri(SU + "StandardInformationUnit")
LOGICAL_ARGUMENT_UNIT = Iri(SU + "LogicalArgumentUnit")
DATASET_UNIT = Iri(SU + "DatasetUnit")
QUESTION_UNIT = Iri(SU + "QuestionUnit")

# statement category classes
LEXICAL_STATEMENT = Iri(SU + "LexicalStatementUnit")
ASSERTIONAL_STATEMENT = Iri(SU + "AssertionalStatementUnit")
CONTINGENT_STATEMENT = Iri(SU + "ContingentStatementUnit")
PROTOTYPICAL_STATEMENT = Iri(SU + "PrototypicalStatementUnit")
UNIVERSAL_STATEMENT = Iri(SU + "UniversalStatementUnit")
NEGATION_UNIT = Iri(SU + "NegationUnit")

# argument kind classes
DEDUCTION_UNIT = Iri(SU + "DeductionUnit")
INDUCTION_UNIT = Iri(SU + "InductionUnit")
ABDUCTION_UNIT = Iri(SU + "AbductionUnit")

# layer predicates
HAS_MEMBER = Iri(SU + "hasMember")
HAS_SUBJECT = Iri(SU + "hasSubject")
HAS_SCHEMA = Iri(SU + "hasSchema")
REVISES = Iri(SU + "revises")
NEGATED = Iri(SU + "negated")
LOGIC_FRAMEWORK = Iri(SU + "logicFramework")
RESOURCE_KIND = Iri(SU + "resourceKind")
HAS_PREMISE = Iri(SU + "hasPremise")
HAS_CONCLUSION = Iri(SU + "hasConclusion")
HAS_SOURCE_CLASS = Iri(SU + "hasSourceClass")

# resource kind individuals
KIND_NAMED_INDIVIDUAL = Iri(SU + "NamedIndividual")
KIND_SOME_INSTANCE = Iri(SU + "SomeInstance")
KIND_MOST_INSTANCES = Iri(SU + "MostInstances")
KIND_EVERY_INSTANCE = Iri(SU + "EveryInstance")
KIND_ONTOLOGY_CLASS = Iri(SU + "OntologyClass")
KIND_SEMANTIC_UNIT = Iri(SU + "SemanticUnit")
KIND_RELATION = Iri(SU + "Relation")

# metadata predicates
CREATED_BY = Iri(PAV + "createdBy")
AUTHORED_BY = Iri(PAV + "authoredBy")
CREATED = Iri(DCTERMS + "created")
MODIFIED = Iri(DCTERMS + "modified")
CONTRIBUTOR = Iri(DCTERMS + "contributor")
LICENSE = Iri(DCTERMS + "license")

# display label annotation predicates, in precedence order
NAME_ANNOTATION = Iri(SCHEMA_ORG + "name")
PREF_LABEL = Iri(SKOS + "prefLabel")

# reference-frame delimiter property
IS_ABOUT = Iri("http://purl.obolibrary.org/obo/IAO_0000136")

# nanopublication structure
NP_NANOPUBLICATION = Iri(NP + "Nanopublication")
NP_HAS_ASSERTION = Iri(NP + "hasAssertion")
NP_HAS_PROVENANCE = Iri(NP + "hasProvenance")
NP_HAS_PUBINFO = Iri(NP + "hasPublicationInfo")
PROV_ATTRIBUTED_TO = Iri(PROV + "wasAttributedTo")
PROV_GENERATED_AT = Iri(PROV + "generatedAtTime")
HAS_LABEL = Iri(SU + "dynamicLabel")
HAS_CATEGORY = Iri(SU + "statementCategory")

TRIG_PREFIXES = {
    "su": SU,
    "np": NP,
    "prov": PROV,
    "dcterms": DCTERMS,
    "pav": PAV,
    "xsd": "http://www.w3.org/2001/XMLSchema#",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
}


def vocabulary_table() -> dict:
    """The reserved-vocabulary table, as shipped in data/vocab.json."""
    return {
        "namespaces": {
            "su": SU,
            "dcterms": DCTERMS,
            "pav": PAV,
            "np": NP,
            "prov": PROV,
        },
        "layer_graph": str(LAYER_GRAPH),
        "instance_of": str(INSTANCE_OF),
        "kind_classes": {
            "statement": str(STATEMENT_UNIT),
            "item": str(ITEM_UNIT),
            "item-group": str(ITEM_GROUP_UNIT),
            "granularity-tree": str(GRANULARITY_TREE_UNIT),
            "granular-item-group": str(GRANULAR_ITEM_GROUP_UNIT),
            "context": str(CONTEXT_UNIT),
            "standard-information": str(STANDARD_INFORMATION_UNIT),
            "logical-argument": str(LOGICAL_ARGUMENT_UNIT),
            "dataset": str(DATASET_UNIT),
            "question": str(QUESTION_UNIT),
        },
        "category_classes": {
            "lexical": str(LEXICAL_STATEMENT),
            "assertional": str(ASSERTIONAL_STATEMENT),
            "contingent": str(CONTINGENT_STATEMENT),
            "prototypical": str(PROTOTYPICAL_STATEMENT),
            "universal": str(UNIVERSAL_STATEMENT),
        },
        "negation_class": str(NEGATION_UNIT),
        "predicates": {
            "has_member": str(HAS_MEMBER),
            "has_subject": str(HAS_SUBJECT),
            "has_schema": str(HAS_SCHEMA),
            "revises": str(REVISES),
            "negated": str(NEGATED),
            "logic_framework": str(LOGIC_FRAMEWORK),
            "resource_kind": str(RESOURCE_KIND),
            "has_premise": str(HAS_PREMISE),
            "has_conclusion": str(HAS_CONCLUSION),
            "is_about": str(IS_ABOUT),
        },
        "resource_kinds": {
            "named-individual": str(KIND_NAMED_INDIVIDUAL),
            "some-instance": str(KIND_SOME_INSTANCE),
            "most-instances": str(KIND_MOST_INSTANCES),
            "every-instance": str(KIND_EVERY_INSTANCE),
            "ontology-class": str(KIND_ONTOLOGY_CLASS),
            "semantic-unit": str(KIND_SEMANTIC_UNIT),
            "relation": str(KIND_RELATION),
        },
        "metadata_predicates": {
            "creator": str(CREATED_BY),
            "author": str(AUTHORED_BY),
            "created": str(CREATED),
            "last_updated": str(MODIFIED),
            "contributor": str(CONTRIBUTOR),
            "license": str(LICENSE),
        },
        "label_annotations": [str(NAME_ANNOTATION), str(PREF_LABEL)],
    }


def load_shipped_vocabulary() -> dict:
    with resources.files("semunit.data").joinpath("vocab.json").open("rb") as fh:
        return json.load(fh)
