"""Graph equality up to consistent renaming of locally-minted IRIs.

Used as the round-trip oracle for export/import: two triple sets are
isomorphic when some bijection over local IRIs (minted identifiers)
maps one set onto the other, while globally-known IRIs (ontology and
schema terms) may only map to themselves.
"""

from __future__ import annotations

from typing import Callable, Iterable, Optional

from .terms import Iri, Literal, Term, Triple

LOCAL_PREFIXES = ("urn:uuid:", "urn:x-semunit:")


def is_local_iri(iri: Iri, prefixes: tuple[str, ...] = LOCAL_PREFIXES) -> bool:
    return any(str(iri).startswith(p) for p in prefixes)


def graph_isomorphic(
    a: Iterable[Triple],
    b: Iterable[Triple],
    local: Optional[Callable[[Iri], bool]] = None,
) -> bool:
    """True iff a bijection of local IRIs makes the two sets equal."""
    a, b = set(a), set(b)
    if len(a) != len(b):
        return False
    local = local or is_local_iri

    def local_nodes(triples: set[Triple]) -> set[Iri]:
        nodes = set()
        for t in triples:
            for r in t.resources():
                if local(r):
                    nodes.add(r)
            if isinstance(t.object, Iri) and local(t.object):
                nodes.add(t.object)
        return nodes

    nodes_a = sorted(local_nodes(a))
    nodes_b = sorted(local_nodes(b))
    if len(nodes_a) != len(nodes_b):
        return False
    if not nodes_a:
        return a == b

    # signature: how a node is used, invariant under renaming of locals
    def signature(node: Iri, triples: set[Triple]) -> tuple:
        out_preds, in_preds, lit_objs = [], [], []
        for t in triples:
            if t.subject == node:
                out_preds.append(str(t.predicate) if not local(t.predicate) else "*")
                if isinstance(t.object, Literal):
                    lit_objs.append((t.object.lexical, str(t.object.datatype)))
            if isinstance(t.object, Iri) and t.object == node:
                in_preds.append(str(t.predicate) if not local(t.predicate) else "*")
        return (tuple(sorted(out_preds)), tuple(sorted(in_preds)), tuple(sorted(lit_objs)))

    sig_a = {n: signature(n, a) for n in nodes_a}
    sig_b = {n: signature(n, b) for n in nodes_b}
    candidates = {
        n: [m for m in nodes_b if sig_b[m] == sig_a[n]] for n in nodes_a
    }
    if any(not c for c in candidates.values()):
        return False

    order = sorted(nodes_a, key=lambda n: len(candidates[n]))

    def rename(term: Term, mapping: dict[Iri, Iri]) -> Term:
        if isinstance(term, Iri) and term in mapping:
            return mapping[term]
        return term

    def apply(triple: Triple, mapping: dict[Iri, Iri]) -> Triple:
        return Triple(
            rename(triple.subject, mapping),  # type: ignore[arg-type]
            rename(triple.predicate, mapping),  # type: ignore[arg-type]
            rename(triple.object, mapping),
        )

    def backtrack(idx: int, mapping: dict[Iri, Iri], used: set[Iri]) -> bool:
        if idx == len(order):
            return {apply(t, mapping) for t in a} == b
        node = order[idx]
        for target in candidates[node]:
            if target in used:
                continue
            mapping[node] = target
            used.add(target)
            # prune: every fully-mapped triple must exist in b
            ok = True
            for t in a:
                mapped = apply(t, mapping)
                touched = {t.subject, t.predicate} | (
                    {t.object} if isinstance(t.object, Iri) else set()
                )
                if all(not local(r) or r in mapping for r in touched):
                    if mapped not in b:
                        ok = False
                        break
            if ok and backtrack(idx + 1, mapping, used):
                return True
            del mapping[node]
            used.discard(target)
        return False

    return backtrack(0, {}, set())
