"""Independent brute-force oracles the implementation is checked against.

Everything here deliberately avoids the production code paths: plain
scans, plain unions, plain permutation search.
"""

from __future__ import annotations

import itertools
import re
from decimal import Decimal, InvalidOperation

from semunit.terms import Iri, Literal, RDF_TYPE, Triple
from semunit.units import UnitKind


def scan_match(quads, subject=None, predicate=None, object=None, graph=None):
    """Linear filter over all quads, sorted the same way match() sorts."""
    out = [
        q
        for q in quads
        if (subject is None or q.subject == subject)
        and (predicate is None or q.predicate == predicate)
        and (object is None or q.object == object)
        and (graph is None or q.graph == graph)
    ]
    return sorted(out, key=lambda q: q.sort_key())


def merged_graph(reg, gupri) -> set[Triple]:
    unit = reg.get(gupri)
    triples = set()
    if unit.data_graph is not None:
        triples |= reg.store.graph_triples(unit.data_graph)
    for member in unit.members:
        triples |= merged_graph(reg, member)
    return triples


def mention_scan(reg, resource) -> dict:
    """Kind -> gupris of units whose merged graph mentions the resource."""
    out: dict = {}
    for unit in reg.all_units():
        mentioned = False
        for t in merged_graph(reg, unit.gupri):
            if t.subject == resource or t.predicate == resource or t.object == resource:
                mentioned = True
                break
        if mentioned:
            out.setdefault(unit.kind, []).append(unit.gupri)
    return {k: sorted(v) for k, v in out.items()}


def items_by_subject(reg) -> dict:
    """Group statement units by subject resource (non-unit subjects)."""
    groups: dict = {}
    for unit in reg.by_kind(UnitKind.STATEMENT):
        if unit.subject is None or unit.subject in reg:
            continue
        groups.setdefault(unit.subject, set()).add(unit.gupri)
    return {k: sorted(v) for k, v in groups.items()}


def bfs_item_components(reg) -> list[frozenset]:
    """Undirected components of the item linkage graph via plain BFS."""
    items = reg.by_kind(UnitKind.ITEM)
    adjacency: dict = {u.gupri: set() for u in items}
    subjects = {u.subject: u.gupri for u in items}
    for item in items:
        for member in item.members:
            statement = reg.get(member)
            for t in reg.store.graph_triples(statement.data_graph):
                if isinstance(t.object, Iri) and t.object in subjects:
                    other = subjects[t.object]
                    if other != item.gupri:
                        adjacency[item.gupri].add(other)
                        adjacency[other].add(item.gupri)
    seen = set()
    components = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        component = {start}
        queue = [start]
        while queue:
            current = queue.pop(0)
            for nxt in adjacency[current]:
                if nxt not in component:
                    component.add(nxt)
                    queue.append(nxt)
        seen |= component
        components.append(frozenset(component))
    return components


def union_find_contexts(reg, is_about_classes) -> list[frozenset]:
    """Expected context membership: union-find after dropping aboutness units."""
    sets: list[set] = []

    def locate(node):
        for s in sets:
            if node in s:
                return s
        return None

    unit_nodes = {}
    for unit in reg.by_kind(UnitKind.STATEMENT):
        if unit.unit_class in is_about_classes:
            continue
        triples = reg.store.graph_triples(unit.data_graph)
        type_objects = {
            t.object
            for t in triples
            if t.predicate == Iri(RDF_TYPE) and isinstance(t.object, Iri)
        }
        nodes = []
        for t in triples:
            candidates = [t.subject]
            if isinstance(t.object, Iri):
                candidates.append(t.object)
            for r in candidates:
                if r in type_objects:
                    continue
                if reg.resource_kind(r).value in (
                    "ontology-class",
                    "every-instance",
                    "most-instances",
                ):
                    continue
                nodes.append(r)
        unit_nodes[unit.gupri] = nodes
        merged = set(nodes)
        for node in nodes:
            found = locate(node)
            if found is not None:
                merged |= found
                sets.remove(found)
        if merged:
            sets.append(merged)

    components = []
    grouped: dict = {}
    singletons = []
    for gupri, nodes in unit_nodes.items():
        if not nodes:
            singletons.append(frozenset([gupri]))
            continue
        home = locate(nodes[0])
        grouped.setdefault(frozenset(home), set()).add(gupri)
    components = [frozenset(v) for v in grouped.values()] + singletons
    return components


def tree_check(edges: dict) -> bool:
    """edges: unit -> (parent_resource, child_resource); True iff a tree."""
    nodes = set()
    parents: dict = {}
    for (s, o) in edges.values():
        nodes.add(s)
        nodes.add(o)
        parents.setdefault(o, set()).add(s)
    if any(len(p) > 1 for p in parents.values()):
        return False
    roots = [n for n in nodes if n not in parents]
    if len(roots) != 1:
        return False
    # reachability from the root must cover every node without repeats
    children: dict = {}
    for (s, o) in edges.values():
        children.setdefault(s, set()).add(o)
    seen = set()
    stack = [roots[0]]
    while stack:
        current = stack.pop()
        if current in seen:
            return False
        seen.add(current)
        stack.extend(children.get(current, ()))
    return seen == nodes


def enumerate_question_matches(sources, schemas, store, reg):
    """All binding tuples over candidate unit combinations, checked naively."""

    def slot_values(schema, slot, subject, triples):
        frontier = [subject]
        for predicate in slot.path[:-1]:
            nxt = []
            for s in frontier:
                for t in triples:
                    if t.subject == s and t.predicate == predicate and isinstance(t.object, Iri):
                        nxt.append(t.object)
            frontier = nxt
        values = []
        for s in frontier:
            for t in triples:
                if t.subject == s and t.predicate == slot.path[-1]:
                    values.append(t.object)
        return values

    def has_type(value, cls):
        return bool(store.match(subject=value, predicate=Iri(RDF_TYPE), object=cls))

    multi = len(sources) > 1

    def auto(base_name: str, idx: int) -> str:
        return base_name if not multi else f"{base_name}_{idx}"

    per_source = []
    for idx, source in enumerate(sources):
        schema = schemas.get(source.schema_class)
        assignments = []
        for unit in reg.by_class(source.schema_class):
            if unit.kind != UnitKind.STATEMENT or unit.negated != source.negated:
                continue
            triples = store.graph_triples(unit.data_graph)
            subject_binding = source.subject
            if subject_binding.kind == "fixed" and unit.subject != subject_binding.term:
                continue
            base = {"@unit": unit.gupri}
            if subject_binding.kind == "var-resource":
                if subject_binding.class_constraint is not None and not has_type(
                    unit.subject, subject_binding.class_constraint
                ):
                    continue
                base[subject_binding.var or auto("subject", idx)] = unit.subject
            choices = []
            names = []
            dead = False
            for slot_name, binding in sorted(source.slots.items()):
                slot = schema.slot(slot_name)
                values = slot_values(schema, slot, unit.subject, triples)
                if binding.kind == "fixed":
                    if binding.term not in values:
                        dead = True
                        break
                    continue
                if binding.kind == "unbound":
                    continue
                kept = []
                for value in values:
                    if binding.kind == "var-resource":
                        if not isinstance(value, Iri):
                            continue
                        if binding.class_constraint is not None and not has_type(
                            value, binding.class_constraint
                        ):
                            continue
                    else:
                        if not isinstance(value, Literal):
                            continue
                        if binding.numeric_range is not None:
                            try:
                                number = Decimal(value.lexical)
                            except (InvalidOperation, ValueError):
                                continue
                            lo, hi = binding.numeric_range
                            if not (lo <= number <= hi):
                                continue
                        if binding.pattern is not None and not re.fullmatch(
                            binding.pattern, value.lexical
                        ):
                            continue
                    kept.append(value)
                if not kept:
                    dead = True
                    break
                names.append(binding.var or auto(slot_name, idx))
                choices.append(kept)
            if dead:
                continue
            for combo in itertools.product(*choices):
                assignment = dict(base)
                consistent = True
                for name, value in zip(names, combo):
                    if name in assignment and assignment[name] != value:
                        consistent = False
                        break
                    assignment[name] = value
                if consistent:
                    assignments.append(assignment)
        per_source.append(assignments)

    merged = [{}]
    for assignments in per_source:
        nxt = []
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
                    units = joined.get("@units", ())
                    joined["@units"] = units + (assignment["@unit"],)
                    nxt.append(joined)
        merged = nxt
    results = set()
    for assignment in merged:
        bindings = tuple(
            sorted(
                (k, _freeze(v))
                for k, v in assignment.items()
                if k not in ("@unit", "@units")
            )
        )
        results.add((bindings, tuple(assignment["@units"])))
    return results


def _freeze(term):
    if isinstance(term, Literal):
        return ("lit", term.lexical, str(term.datatype), term.language)
    return ("iri", str(term))


def permutation_isomorphic(a, b, local) -> bool:
    """Exhaustive bijection search for small graphs (test-side oracle)."""
    a, b = set(a), set(b)
    if len(a) != len(b):
        return False

    def locals_of(triples):
        out = set()
        for t in triples:
            for r in (t.subject, t.predicate):
                if local(r):
                    out.add(r)
            if isinstance(t.object, Iri) and local(t.object):
                out.add(t.object)
        return sorted(out)

    la, lb = locals_of(a), locals_of(b)
    if len(la) != len(lb):
        return False
    if not la:
        return a == b

    def rename(term, mapping):
        if isinstance(term, Iri) and term in mapping:
            return mapping[term]
        return term

    for perm in itertools.permutations(lb):
        mapping = dict(zip(la, perm))
        mapped = {
            Triple(rename(t.subject, mapping), rename(t.predicate, mapping), rename(t.object, mapping))
            for t in a
        }
        if mapped == b:
            return True
    return False
