"""semunit: triples organized into GUPRI-identified semantic units."""

from .terms import Iri, Literal, Quad, Term, Triple
from .store import GraphStore
from .units import (
    IdMinter,
    ResourceKind,
    SemanticUnit,
    StatementCategory,
    UnitKind,
    UnitMetadata,
    UnitRegistry,
)
from .schemas import SchemaRegistry, StatementSchema, load_schema_file
from .workspace import Workspace

__version__ = "0.1.0"

__all__ = [
    "Iri",
    "Literal",
    "Quad",
    "Term",
    "Triple",
    "GraphStore",
    "IdMinter",
    "ResourceKind",
    "SemanticUnit",
    "StatementCategory",
    "UnitKind",
    "UnitMetadata",
    "UnitRegistry",
    "SchemaRegistry",
    "StatementSchema",
    "load_schema_file",
    "Workspace",
    "__version__",
]
