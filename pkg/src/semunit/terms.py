"""Core RDF terms: IRIs, literals, triples, and quads.

Literals compare by exact lexical form (no value-space canonicalization),
so "204.560" and "204.56" are distinct terms even with a decimal datatype.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Optional, Union

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

XSD_STRING = XSD + "string"
XSD_DECIMAL = XSD + "decimal"
XSD_INTEGER = XSD + "integer"
XSD_BOOLEAN = XSD + "boolean"
XSD_DOUBLE = XSD + "double"
XSD_FLOAT = XSD + "float"
XSD_DATETIME = XSD + "dateTime"
RDF_TYPE = RDF + "type"
RDF_LANGSTRING = RDF + "langString"

NUMERIC_DATATYPES = frozenset(
    XSD + name
    for name in (
        "decimal",
        "integer",
        "double",
        "float",
        "long",
        "int",
        "short",
        "byte",
        "nonNegativeInteger",
        "positiveInteger",
        "unsignedInt",
        "unsignedLong",
    )
)


class TermError(ValueError):
    """Raised when a term violates a structural invariant."""


class Iri(str):
    """An absolute IRI. Subclass of str: hashes, sorts, and compares as text."""

    __slots__ = ()

    def __new__(cls, value: str) -> "Iri":
        if not value:
            raise TermError("IRI must be non-empty")
        if ":" not in value:
            raise TermError(f"IRI has no scheme separator: {value!r}")
        if any(ch in value for ch in ("<", ">", '"', " ", "\n", "\t")):
            raise TermError(f"IRI contains forbidden character: {value!r}")
        return super().__new__(cls, value)

    @property
    def local_name(self) -> str:
        """Text after the last '#', '/', or ':' — the display fallback."""
        for sep in ("#", "/", ":"):
            if sep in self:
                return self.rsplit(sep, 1)[1] or self
        return str(self)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Iri({str(self)!r})"


@dataclass(frozen=True)
class Literal:
    """An RDF literal: lexical form, datatype IRI, optional language tag."""

    lexical: str
    datatype: Iri = field(default_factory=lambda: Iri(XSD_STRING))
    language: Optional[str] = None

    def __post_init__(self) -> None:
        if self.language is not None and str(self.datatype) != RDF_LANGSTRING:
            raise TermError("language tag allowed only on rdf:langString literals")
        if str(self.datatype) == RDF_LANGSTRING and not self.language:
            raise TermError("rdf:langString literal requires a language tag")
        if str(self.datatype) in NUMERIC_DATATYPES and self.decimal_value() is None:
            raise TermError(
                f"literal {self.lexical!r} does not parse as a number "
                f"for datatype {self.datatype}"
            )

    def decimal_value(self) -> Optional[Decimal]:
        """Lexical form parsed as an arbitrary-precision decimal, or None."""
        try:
            value = Decimal(self.lexical.strip())
        except (InvalidOperation, ValueError):
            return None
        if not value.is_finite():
            return None
        return value

    def sort_key(self) -> tuple:
        return (1, self.lexical, str(self.datatype), self.language or "")


Term = Union[Iri, Literal]


def term_sort_key(term: Term) -> tuple:
    """Total order over terms: IRIs before literals, lexicographic within."""
    if isinstance(term, Literal):
        return term.sort_key()
    return (0, str(term), "", "")


def is_resource(term: Term) -> bool:
    return isinstance(term, Iri)


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def sort_key(self) -> tuple:
        return (str(self.subject), str(self.predicate), term_sort_key(self.object))

    def resources(self) -> tuple[Iri, ...]:
        """All IRIs mentioned by this triple, in position order."""
        if isinstance(self.object, Iri):
            return (self.subject, self.predicate, self.object)
        return (self.subject, self.predicate)


@dataclass(frozen=True)
class Quad:
    triple: Triple
    graph: Iri

    @property
    def subject(self) -> Iri:
        return self.triple.subject

    @property
    def predicate(self) -> Iri:
        return self.triple.predicate

    @property
    def object(self) -> Term:
        return self.triple.object

    def sort_key(self) -> tuple:
        return (str(self.graph),) + self.triple.sort_key()


def typed(lexical: str, datatype: str) -> Literal:
    return Literal(lexical, Iri(datatype))


def plain(lexical: str) -> Literal:
    return Literal(lexical)


def decimal_literal(lexical: str) -> Literal:
    return Literal(lexical, Iri(XSD_DECIMAL))
