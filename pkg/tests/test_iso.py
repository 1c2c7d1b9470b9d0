"""Graph isomorphism under local-IRI renaming, against a permutation oracle."""

from __future__ import annotations

import random

from semunit.iso import graph_isomorphic, is_local_iri
from semunit.terms import Iri, Literal, Triple

from .oracles import permutation_isomorphic

L = "urn:uuid:"


def t(s, p, o):
    obj = o if not isinstance(o, str) else Iri(o)
    return Triple(Iri(s), Iri(p), obj)


class TestBasics:
    def test_identical_sets(self):
        a = {t(L + "1", "urn:p", L + "2"), t(L + "2", "urn:q", "urn:global")}
        assert graph_isomorphic(a, set(a))

    def test_consistent_renaming(self):
        a = {t(L + "1", "urn:p", "urn:g"), t(L + "1", "urn:q", L + "2")}
        b = {t(L + "9", "urn:p", "urn:g"), t(L + "9", "urn:q", L + "8")}
        assert graph_isomorphic(a, b)

    def test_extra_triple_breaks_it(self):
        a = {t(L + "1", "urn:p", "urn:g")}
        b = {t(L + "1", "urn:p", "urn:g"), t(L + "1", "urn:q", "urn:g")}
        assert not graph_isomorphic(a, b)

    def test_global_iris_map_only_to_themselves(self):
        a = {t("urn:known:a", "urn:p", "urn:known:b")}
        b = {t("urn:known:b", "urn:p", "urn:known:a")}
        assert not graph_isomorphic(a, b)

    def test_literal_mismatch(self):
        a = {Triple(Iri(L + "1"), Iri("urn:p"), Literal("204.56"))}
        b = {Triple(Iri(L + "9"), Iri("urn:p"), Literal("204.560"))}
        assert not graph_isomorphic(a, b)

    def test_inconsistent_renaming_rejected(self):
        # same local node must map to one target
        a = {t(L + "1", "urn:p", "urn:x"), t(L + "1", "urn:q", "urn:y")}
        b = {t(L + "2", "urn:p", "urn:x"), t(L + "3", "urn:q", "urn:y")}
        assert not graph_isomorphic(a, b)


class TestAgainstPermutationOracle:
    def test_random_small_graphs(self):
        rng = random.Random(99)
        globals_ = [f"urn:known:{i}" for i in range(4)]
        preds = [f"urn:p{i}" for i in range(3)]
        for trial in range(120):
            locals_ = [Iri(f"{L}{i}") for i in range(rng.randint(0, 5))]
            nodes = locals_ + [Iri(g) for g in globals_]
            size = rng.randint(0, 8)
            a = {
                Triple(rng.choice(nodes), Iri(rng.choice(preds)), rng.choice(nodes))
                for _ in range(size)
            }
            if rng.random() < 0.5:
                # rename consistently, sometimes also perturb
                mapping = {
                    old: Iri(f"{L}renamed{idx}") for idx, old in enumerate(locals_)
                }
                b = {
                    Triple(
                        mapping.get(x.subject, x.subject),
                        mapping.get(x.predicate, x.predicate),
                        mapping.get(x.object, x.object)
                        if isinstance(x.object, Iri)
                        else x.object,
                    )
                    for x in a
                }
                if rng.random() < 0.4 and b:
                    b.pop()
            else:
                b = {
                    Triple(rng.choice(nodes), Iri(rng.choice(preds)), rng.choice(nodes))
                    for _ in range(size)
                }
            expected = permutation_isomorphic(a, b, is_local_iri)
            assert graph_isomorphic(a, b) == expected, (sorted(a), sorted(b))
