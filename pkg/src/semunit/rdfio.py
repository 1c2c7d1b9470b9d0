"""Line- and token-based RDF readers and writers.

Supported surface: N-Triples and N-Quads (one statement per line),
plus a Turtle subset (prefix directives, semicolon/comma abbreviation,
the ``a`` keyword, numeric and boolean shorthand) and TriG named-graph
blocks built on that subset. Blank nodes, collections, and property
lists are out of scope and rejected with a line-numbered error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .terms import (
    Iri,
    Literal,
    Quad,
    RDF_LANGSTRING,
    RDF_TYPE,
    Term,
    Triple,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# -- serialization ------------------------------------------------------------

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_string(value: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in value)


def unescape_string(value: str, line: int) -> str:
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(value):
            raise ParseError("dangling escape in string", line)
        nxt = value[i + 1]
        mapping = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t", "'": "'"}
        if nxt in mapping:
            out.append(mapping[nxt])
            i += 2
        elif nxt == "u":
            out.append(chr(int(value[i + 2 : i + 6], 16)))
            i += 6
        elif nxt == "U":
            out.append(chr(int(value[i + 2 : i + 10], 16)))
            i += 10
        else:
            raise ParseError(f"unknown escape \\{nxt}", line)
    return "".join(out)


def term_text(term: Term) -> str:
    """Canonical N-Triples spelling of a term."""
    if isinstance(term, Literal):
        body = f'"{escape_string(term.lexical)}"'
        if term.language:
            return f"{body}@{term.language}"
        if str(term.datatype) == XSD_STRING:
            return body
        return f"{body}^^<{term.datatype}>"
    return f"<{term}>"


def ntriples_line(triple: Triple) -> str:
    return (
        f"<{triple.subject}> <{triple.predicate}> {term_text(triple.object)} .\n"
    )


def nquads_line(quad: Quad) -> str:
    t = quad.triple
    return (
        f"<{t.subject}> <{t.predicate}> {term_text(t.object)} <{quad.graph}> .\n"
    )


def serialize_ntriples(triples) -> str:
    return "".join(ntriples_line(t) for t in sorted(triples, key=Triple.sort_key))


def serialize_nquads(quads) -> str:
    return "".join(nquads_line(q) for q in sorted(quads, key=Quad.sort_key))


def serialize_trig(
    graphs: list[tuple[Iri, list[Triple]]], prefixes: Optional[dict[str, str]] = None
) -> str:
    """TriG text with one block per named graph, in the order given.

    Triples within a block are sorted, prefixes applied longest-first,
    so identical inputs serialize to identical bytes.
    """
    prefixes = prefixes or {}
    by_len = sorted(prefixes.items(), key=lambda kv: -len(kv[1]))

    def shorten(iri: Iri) -> str:
        for name, base in by_len:
            if str(iri).startswith(base):
                local = str(iri)[len(base) :]
                if local and all(
                    c.isalnum() or c in "-_." for c in local
                ) and not local[0].isdigit() and not local.endswith("."):
                    return f"{name}:{local}"
        return f"<{iri}>"

    def term(t: Term) -> str:
        if isinstance(t, Literal):
            body = f'"{escape_string(t.lexical)}"'
            if t.language:
                return f"{body}@{t.language}"
            if str(t.datatype) == XSD_STRING:
                return body
            return f"{body}^^{shorten(t.datatype)}"
        return shorten(t)

    lines = []
    for name, base in sorted(prefixes.items()):
        lines.append(f"@prefix {name}: <{base}> .")
    if prefixes:
        lines.append("")
    for graph, triples in graphs:
        lines.append(f"{shorten(graph)} {{")
        for t in sorted(triples, key=Triple.sort_key):
            lines.append(f"    {shorten(t.subject)} {shorten(t.predicate)} {term(t.object)} .")
        lines.append("}")
        lines.append("")
    return "\n".join(lines)


# -- tokenizer ----------------------------------------------------------------


@dataclass
class Token:
    kind: str  # IRI PNAME STRING LANGTAG DTYPE DOT SEMI COMMA LBRACE RBRACE PREFIX A NUMBER BOOLEAN EOF
    value: str
    line: int


def _tokenize(text: str) -> Iterator[Token]:
    i, line, n = 0, 1, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "<":
            j = text.find(">", i)
            if j < 0:
                raise ParseError("unterminated IRI", line)
            yield Token("IRI", text[i + 1 : j], line)
            i = j + 1
            continue
        if ch == '"':
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == '"':
                    break
                if text[j] == "\n":
                    raise ParseError("newline inside string", line)
                j += 1
            if j >= n:
                raise ParseError("unterminated string", line)
            yield Token("STRING", unescape_string(text[i + 1 : j], line), line)
            i = j + 1
            continue
        if ch == "@":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "-"):
                j += 1
            word = text[i + 1 : j]
            if word == "prefix":
                yield Token("PREFIX", word, line)
            else:
                yield Token("LANGTAG", word, line)
            i = j
            continue
        if text.startswith("^^", i):
            yield Token("DTYPE", "^^", line)
            i += 2
            continue
        if ch == ".":
            yield Token("DOT", ".", line)
            i += 1
            continue
        if ch == ";":
            yield Token("SEMI", ";", line)
            i += 1
            continue
        if ch == ",":
            yield Token("COMMA", ",", line)
            i += 1
            continue
        if ch == "{":
            yield Token("LBRACE", "{", line)
            i += 1
            continue
        if ch == "}":
            yield Token("RBRACE", "}", line)
            i += 1
            continue
        if ch in "[]()":
            raise ParseError(f"unsupported syntax: {ch!r} (blank nodes/collections)", line)
        if ch == "_" and text.startswith("_:", i):
            raise ParseError("blank node labels are not supported", line)
        if ch.isdigit() or (ch in "+-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and (text[j].isdigit() or text[j] in ".eE+-"):
                j += 1
            # trailing '.' is the statement terminator, not part of the number
            num = text[i:j]
            while num.endswith("."):
                num = num[:-1]
                j -= 1
            yield Token("NUMBER", num, line)
            i = j
            continue
        # bare word: PNAME, 'a', PREFIX keyword, or boolean
        j = i
        while j < n and not text[j].isspace() and text[j] not in '<>"{};,':
            j += 1
        word = text[i:j]
        # strip statement-final dot glued to the word ("ex:o." at line end)
        while word.endswith(".") and not _looks_like_pname_dot(word):
            word = word[:-1]
            j -= 1
        if word == "a":
            yield Token("A", word, line)
        elif word in ("true", "false"):
            yield Token("BOOLEAN", word, line)
        elif word.upper() == "PREFIX":
            yield Token("PREFIX", word, line)
        elif word.upper() == "GRAPH":
            yield Token("GRAPHKW", word, line)
        elif ":" in word:
            yield Token("PNAME", word, line)
        elif word == "":
            raise ParseError(f"unexpected character {text[i]!r}", line)
        else:
            raise ParseError(f"unexpected token {word!r}", line)
        i = j
    yield Token("EOF", "", line)


def _looks_like_pname_dot(word: str) -> bool:
    # keep dots that are clearly inside a local name, e.g. ex:v1.2.3x
    return ":" in word and not word.endswith(".")


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0
        self.prefixes: dict[str, str] = {}

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.kind} {tok.value!r}", tok.line)
        return tok

    def resolve(self, tok: Token) -> Iri:
        if tok.kind == "IRI":
            try:
                return Iri(tok.value)
            except ValueError as exc:
                raise ParseError(str(exc), tok.line) from exc
        if tok.kind == "A":
            return Iri(RDF_TYPE)
        if tok.kind == "PNAME":
            prefix, _, local = tok.value.partition(":")
            if prefix not in self.prefixes:
                raise ParseError(f"undeclared prefix {prefix!r}", tok.line)
            return Iri(self.prefixes[prefix] + local)
        raise ParseError(f"expected IRI, found {tok.kind} {tok.value!r}", tok.line)

    def parse_directive(self) -> None:
        # '@prefix' | 'PREFIX' name: <iri> [.]
        name_tok = self.next()
        if name_tok.kind != "PNAME" or not name_tok.value.endswith(":"):
            raise ParseError("expected 'name:' after @prefix", name_tok.line)
        iri_tok = self.expect("IRI")
        self.prefixes[name_tok.value[:-1]] = iri_tok.value
        if self.peek().kind == "DOT":
            self.next()

    def parse_object(self) -> Term:
        tok = self.next()
        if tok.kind in ("IRI", "PNAME"):
            return self.resolve(tok)
        if tok.kind == "STRING":
            if self.peek().kind == "LANGTAG":
                lang = self.next().value
                return Literal(tok.value, Iri(RDF_LANGSTRING), lang)
            if self.peek().kind == "DTYPE":
                self.next()
                dt = self.resolve(self.next())
                try:
                    return Literal(tok.value, dt)
                except ValueError as exc:
                    raise ParseError(str(exc), tok.line) from exc
            return Literal(tok.value)
        if tok.kind == "NUMBER":
            dt = XSD_DECIMAL if any(c in tok.value for c in ".eE") else XSD_INTEGER
            return Literal(tok.value, Iri(dt))
        if tok.kind == "BOOLEAN":
            return Literal(tok.value, Iri(XSD_BOOLEAN))
        raise ParseError(f"expected object term, found {tok.kind} {tok.value!r}", tok.line)

    def parse_triple_block(self, sink: list[Triple]) -> None:
        """One subject with ;/, continuations, through the closing DOT."""
        subject = self.resolve(self.next())
        while True:
            predicate = self.resolve(self.next())
            while True:
                sink.append(Triple(subject, predicate, self.parse_object()))
                if self.peek().kind == "COMMA":
                    self.next()
                    continue
                break
            tok = self.next()
            if tok.kind == "SEMI":
                # tolerate trailing ';' before '.'
                if self.peek().kind == "DOT":
                    self.next()
                    return
                continue
            if tok.kind == "DOT":
                return
            if tok.kind == "RBRACE":
                # caller handles block end; triples inside blocks may omit final '.'
                self.pos -= 1
                return
            raise ParseError(f"expected '.', ';' or ',', found {tok.value!r}", tok.line)


def parse_turtle(text: str) -> list[Triple]:
    """Parse the Turtle subset (also plain N-Triples) into triples."""
    parser = _Parser(text)
    out: list[Triple] = []
    while True:
        tok = parser.peek()
        if tok.kind == "EOF":
            return out
        if tok.kind == "PREFIX":
            parser.next()
            parser.parse_directive()
            continue
        parser.parse_triple_block(out)


def parse_ntriples(text: str) -> list[Triple]:
    return parse_turtle(text)


def parse_nquads(text: str) -> list[Quad]:
    """Parse N-Quads lines; every statement must carry a graph IRI."""
    out: list[Quad] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parser = _Parser(raw)
        # adopt real line numbers for diagnostics
        for tok in parser.tokens:
            tok.line = lineno
        subject = parser.resolve(parser.next())
        predicate = parser.resolve(parser.next())
        obj = parser.parse_object()
        graph_tok = parser.next()
        if graph_tok.kind == "DOT":
            raise ParseError("statement is missing its graph IRI", lineno)
        graph = parser.resolve(graph_tok)
        parser.expect("DOT")
        if parser.peek().kind != "EOF":
            raise ParseError("trailing content after statement", lineno)
        out.append(Quad(Triple(subject, predicate, obj), graph))
    return out


def parse_trig(text: str) -> dict[Iri, list[Triple]]:
    """Parse TriG named-graph blocks; returns graph -> triples (insert order)."""
    parser = _Parser(text)
    graphs: dict[Iri, list[Triple]] = {}
    while True:
        tok = parser.peek()
        if tok.kind == "EOF":
            return graphs
        if tok.kind == "PREFIX":
            parser.next()
            parser.parse_directive()
            continue
        if tok.kind == "GRAPHKW":
            parser.next()
            tok = parser.peek()
        if tok.kind not in ("IRI", "PNAME"):
            raise ParseError(
                f"expected a named graph block, found {tok.kind} {tok.value!r}", tok.line
            )
        graph = parser.resolve(parser.next())
        parser.expect("LBRACE")
        sink = graphs.setdefault(graph, [])
        while parser.peek().kind != "RBRACE":
            if parser.peek().kind == "EOF":
                raise ParseError("unterminated graph block", parser.peek().line)
            parser.parse_triple_block(sink)
        parser.expect("RBRACE")
        if parser.peek().kind == "DOT":
            parser.next()
