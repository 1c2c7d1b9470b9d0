"""Quad-indexed triple storage grouped into named graphs.

Every triple lives in exactly one named graph: either one statement
unit's data graph or the store's distinguished unit-description layer
graph. The store keeps set semantics (duplicate inserts are no-ops),
secondary indexes for pattern matching, and an optional append-only
N-Quads log from which the in-memory state is rebuilt on open.

Concurrency contract: many concurrent readers or one writer. All
mutation goes through a single lock; ``match`` returns a materialized
snapshot list so iteration never observes a partial write.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Iterable, Optional

from .terms import Iri, Quad, Term, Triple, term_sort_key


class StoreError(ValueError):
    """Raised for writes that violate store invariants."""


class GraphStore:
    """In-memory quad store with per-position indexes and an optional log.

    Indexes: graph, subject, predicate, (subject, predicate), and
    (graph, subject). ``match`` picks the most selective index for the
    bound positions and post-filters the rest.
    """

    def __init__(self, log_path: Optional[Path] = None):
        self._quads: set[Quad] = set()
        self._graphs: set[Iri] = set()
        self._by_graph: dict[Iri, set[Quad]] = {}
        self._by_subject: dict[Iri, set[Quad]] = {}
        self._by_predicate: dict[Iri, set[Quad]] = {}
        self._by_subject_predicate: dict[tuple[Iri, Iri], set[Quad]] = {}
        self._by_graph_subject: dict[tuple[Iri, Iri], set[Quad]] = {}
        self._lock = threading.RLock()
        self._log_path = Path(log_path) if log_path else None
        self._log_handle = None
        if self._log_path is not None:
            self._replay_log()
            self._log_handle = open(self._log_path, "a", encoding="utf-8")

    # -- graph registration -------------------------------------------------

    def add_graph(self, graph: Iri) -> None:
        """Register a named graph so quads may be inserted into it."""
        with self._lock:
            if graph in self._graphs:
                return
            self._graphs.add(graph)
            self._by_graph.setdefault(graph, set())
            if self._log_handle is not None:
                self._log_handle.write(f"# @graph <{graph}>\n")
                self._log_handle.flush()

    def has_graph(self, graph: Iri) -> bool:
        return graph in self._graphs

    def graphs(self) -> list[Iri]:
        with self._lock:
            return sorted(self._graphs)

    # -- writes --------------------------------------------------------------

    def insert(self, quad: Quad) -> bool:
        """Insert a quad; returns False when it was already present."""
        with self._lock:
            if quad.graph not in self._graphs:
                raise StoreError(f"graph not registered in store: {quad.graph}")
            if quad in self._quads:
                return False
            self._quads.add(quad)
            self._by_graph[quad.graph].add(quad)
            self._by_subject.setdefault(quad.subject, set()).add(quad)
            self._by_predicate.setdefault(quad.predicate, set()).add(quad)
            self._by_subject_predicate.setdefault(
                (quad.subject, quad.predicate), set()
            ).add(quad)
            self._by_graph_subject.setdefault((quad.graph, quad.subject), set()).add(quad)
            if self._log_handle is not None:
                from .rdfio import nquads_line

                self._log_handle.write(nquads_line(quad))
                self._log_handle.flush()
            return True

    def insert_triples(self, graph: Iri, triples: Iterable[Triple]) -> int:
        added = 0
        for t in triples:
            if self.insert(Quad(t, graph)):
                added += 1
        return added

    def retract(self, quad: Quad) -> bool:
        """Remove a quad. The log stays append-only: removal is written
        as a ``# @retract`` event line and replayed in order on open.
        Only layer-graph bookkeeping uses this; data graphs are immutable."""
        with self._lock:
            if quad not in self._quads:
                return False
            self._forget(quad)
            if self._log_handle is not None:
                from .rdfio import nquads_line

                self._log_handle.write("# @retract " + nquads_line(quad))
                self._log_handle.flush()
            return True

    def _forget(self, quad: Quad) -> None:
        self._quads.discard(quad)
        self._by_graph[quad.graph].discard(quad)
        self._by_subject[quad.subject].discard(quad)
        self._by_predicate[quad.predicate].discard(quad)
        self._by_subject_predicate[(quad.subject, quad.predicate)].discard(quad)
        self._by_graph_subject[(quad.graph, quad.subject)].discard(quad)

    # -- reads ---------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._quads)

    def __contains__(self, quad: Quad) -> bool:
        return quad in self._quads

    def graph_triples(self, graph: Iri) -> set[Triple]:
        with self._lock:
            return {q.triple for q in self._by_graph.get(graph, ())}

    def match(
        self,
        subject: Optional[Iri] = None,
        predicate: Optional[Iri] = None,
        object: Optional[Term] = None,
        graph: Optional[Iri] = None,
    ) -> list[Quad]:
        """All quads agreeing with every bound position.

        Returned in (graph, subject, predicate, object) lexicographic
        order so downstream renders and tests are reproducible.
        """
        with self._lock:
            candidates: Iterable[Quad]
            if graph is not None and subject is not None:
                candidates = self._by_graph_subject.get((graph, subject), set())
            elif subject is not None and predicate is not None:
                candidates = self._by_subject_predicate.get((subject, predicate), set())
            elif subject is not None:
                candidates = self._by_subject.get(subject, set())
            elif graph is not None:
                candidates = self._by_graph.get(graph, set())
            elif predicate is not None:
                candidates = self._by_predicate.get(predicate, set())
            else:
                candidates = self._quads
            out = [
                q
                for q in candidates
                if (subject is None or q.subject == subject)
                and (predicate is None or q.predicate == predicate)
                and (object is None or q.object == object)
                and (graph is None or q.graph == graph)
            ]
        out.sort(key=Quad.sort_key)
        return out

    def subjects_of_type(self, cls: Iri, type_predicate: Iri) -> list[Iri]:
        """Distinct subjects carrying an instance-of triple for ``cls``."""
        return sorted({q.subject for q in self.match(predicate=type_predicate, object=cls)})

    def all_quads(self) -> list[Quad]:
        with self._lock:
            out = list(self._quads)
        out.sort(key=Quad.sort_key)
        return out

    # -- persistence ---------------------------------------------------------

    def snapshot_nquads(self) -> str:
        """Full dump in canonical N-Quads order, one statement per line."""
        from .rdfio import nquads_line

        lines = [f"# @graph <{g}>\n" for g in self.graphs() if not self._by_graph.get(g)]
        lines += [nquads_line(q) for q in self.all_quads()]
        return "".join(lines)

    def _replay_log(self) -> None:
        from .rdfio import parse_nquads

        if not self._log_path.exists():
            return
        for lineno, raw in enumerate(
            self._log_path.read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("# @graph <") and line.endswith(">"):
                graph = Iri(line[len("# @graph <") : -1])
                self._graphs.add(graph)
                self._by_graph.setdefault(graph, set())
                continue
            if line.startswith("# @retract "):
                for quad in parse_nquads(line[len("# @retract ") :]):
                    if quad in self._quads:
                        self._forget(quad)
                continue
            if line.startswith("#"):
                continue
            for quad in parse_nquads(line):
                self._graphs.add(quad.graph)
                self._by_graph.setdefault(quad.graph, set())
                if quad not in self._quads:
                    self._quads.add(quad)
                    self._by_graph[quad.graph].add(quad)
                    self._by_subject.setdefault(quad.subject, set()).add(quad)
                    self._by_predicate.setdefault(quad.predicate, set()).add(quad)
                    self._by_subject_predicate.setdefault(
                        (quad.subject, quad.predicate), set()
                    ).add(quad)
                    self._by_graph_subject.setdefault(
                        (quad.graph, quad.subject), set()
                    ).add(quad)

    def close(self) -> None:
        if self._log_handle is not None:
            self._log_handle.close()
            self._log_handle = None


def sorted_triples(triples: Iterable[Triple]) -> list[Triple]:
    return sorted(triples, key=Triple.sort_key)


def object_sort_key(term: Term) -> tuple:
    return term_sort_key(term)
