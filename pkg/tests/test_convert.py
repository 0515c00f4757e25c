import random

import pytest

from gen import random_rst_tree
from discodep import default_mapping, default_markers
from discodep.convert import (
    ConversionError,
    MappingError,
    apply_corrections,
    apply_edu_splits,
    complement_subtree,
    map_relations,
    match_marker,
    pdtb_to_dep,
    rst_to_dep,
)
from discodep.core import DepDocument, Edu, InvalidTreeError, is_projective, validate_tree
from discodep.corpus import Correction, EduSplitRecord, Internal, Leaf, MarkerRule, PdtbRelationRecord
from discodep.corpus.rst import parse_tree


def arcs(doc):
    return {(e.head, e.dependent, e.rel_original) for e in doc.edges}


class TestRstToDep:
    def test_two_nodes(self):
        doc = rst_to_dep(parse_tree("(causality N [1|a] S [2|b])"))
        assert arcs(doc) == {(0, 1, "root"), (1, 2, "causality")}

    def test_satellite_first(self):
        doc = rst_to_dep(parse_tree("(causality S [1|a] N [2|b])"))
        assert arcs(doc) == {(0, 2, "root"), (2, 1, "causality")}

    def test_multinuclear_leftmost(self):
        doc = rst_to_dep(parse_tree("(joint N [1|a] N [2|b] N [3|c])"))
        assert arcs(doc) == {(0, 1, "root"), (1, 2, "joint"), (1, 3, "joint")}

    def test_nested(self):
        doc = rst_to_dep(parse_tree("(explanation N (joint N [1|a] N [2|b]) S [3|c])"))
        assert arcs(doc) == {(0, 1, "root"), (1, 2, "joint"), (1, 3, "explanation")}

    def test_provenance(self):
        doc = rst_to_dep(parse_tree("(joint N [1|a] N [2|b])"), "d")
        assert doc.doc_id == "d"
        assert {e.provenance for e in doc.edges} == {"converted"}

    @pytest.mark.parametrize("n", range(1, 9))
    def test_left_branching_all_nucleus_is_star(self, n):
        tree = Leaf(1, "x")
        for k in range(2, n + 1):
            tree = Internal("joint", (("N", tree), ("N", Leaf(k, "x"))))
        doc = rst_to_dep(tree)
        assert doc.heads == [0] + [1] * (n - 1)

    def test_random_trees_valid_projective(self):
        rng = random.Random(4)
        for _ in range(300):
            doc = rst_to_dep(random_rst_tree(rng, 1, rng.randint(1, 12), texts=False))
            assert not validate_tree(doc)
            assert is_projective(doc)

    def test_rejects_bad_tree(self):
        with pytest.raises(ValueError):
            rst_to_dep(Internal("x", (("S", Leaf(1, "a")), ("S", Leaf(2, "b")))))


class TestEduSplits:
    chain = DepDocument.from_heads("d", ["a", "bc"], [0, 1], ["root", "joint"])

    def test_split_second_edu(self):
        split = EduSplitRecord("d", 2, ("b", "c"), ((1, 2, "continuation"),))
        doc = apply_edu_splits(self.chain, [split])
        assert doc.texts() == ["a", "b", "c"]
        assert arcs(doc) == {(0, 1, "root"), (1, 2, "joint"), (2, 3, "continuation")}

    def test_split_head_edu_renumbers_dependents(self):
        doc = DepDocument.from_heads("d", ["ab", "c"], [0, 1], ["root", "joint"])
        split = EduSplitRecord("d", 1, ("a", "b"), ((2, 1, "expression"),))
        out = apply_edu_splits(doc, [split])
        assert arcs(out) == {(0, 2, "root"), (2, 1, "expression"), (2, 3, "joint")}

    def test_empty_is_identity(self):
        assert apply_edu_splits(self.chain, []) == self.chain

    def test_other_documents_ignored(self):
        split = EduSplitRecord("other", 2, ("b", "c"), ((1, 2, "continuation"),))
        assert apply_edu_splits(self.chain, [split]) == self.chain

    def test_cyclic_intra_edges(self):
        split = EduSplitRecord("d", 2, ("b", "c"), ((1, 2, "x"), (2, 1, "x")))
        with pytest.raises(ValueError):
            apply_edu_splits(self.chain, [split])

    def test_index_collision(self):
        split = EduSplitRecord("d", 2, ("b", "c"), ((1, 2, "x"),))
        with pytest.raises(ValueError):
            apply_edu_splits(self.chain, [split, split])


RULES = [MarkerRule("temporal", "后", "left"), MarkerRule("causality", "因为", "right"),
         MarkerRule("condition", "如果", "right")]


class TestComplement:
    def test_single_edu(self):
        assert complement_subtree([Edu(1, "a")], RULES) == ([], [])

    def test_marker(self):
        edges, review = complement_subtree([Edu(1, "他来了"), Edu(2, "然后走了后")], RULES)
        assert [(e.head, e.dependent, e.rel_original) for e in edges] == [(1, 2, "temporal")]
        assert review == []

    def test_fallback(self):
        edges, review = complement_subtree([Edu(1, "a"), Edu(2, "b")], RULES, "d")
        assert [(e.head, e.dependent, e.rel_original) for e in edges] == [(1, 2, "joint")]
        assert [r.reason for r in review] == ["no_marker_match"]
        assert edges[0].confidence == "review" and edges[0].provenance == "complemented"

    def test_right_attach(self):
        edges, _ = complement_subtree([Edu(1, "因为下雨"), Edu(2, "所以")], RULES)
        assert [(e.head, e.dependent) for e in edges] == [(2, 1)]

    def test_right_attach_blocked(self):
        edus = [Edu(1, "x"), Edu(2, "因为"), Edu(3, "y")]
        edges, review = complement_subtree(edus, RULES)
        assert [(e.head, e.dependent) for e in edges] == [(2, 1), (3, 2)]
        assert review == []
        edus = [Edu(1, "x"), Edu(2, "后"), Edu(3, "如果y")]
        edges, review = complement_subtree(edus, RULES)
        assert [(e.head, e.dependent) for e in edges] == [(1, 2), (2, 3)]
        assert [r.reason for r in review] == ["head_direction_default"]

    def test_longest_marker_and_ambiguity(self):
        rules = [MarkerRule("a", "后", "left"), MarkerRule("b", "以后", "left"),
                 MarkerRule("c", "以后", "right")]
        rule, ambiguous = match_marker(Edu(1, "以后"), Edu(2, "z"), rules)
        assert rule.label == "b" and ambiguous
        edges, review = complement_subtree([Edu(1, "以后"), Edu(2, "z")], rules)
        assert [r.reason for r in review] == ["ambiguous_marker"]

    def test_default_markers(self):
        labels = {r.marker: r.label for r in default_markers()}
        assert labels["时"] == labels["前"] == labels["后"] == "temporal"


class TestPdtb:
    def edus(self, *texts):
        return [Edu(i + 1, t) for i, t in enumerate(texts)]

    def test_gap_complemented(self):
        rec = PdtbRelationRecord("d", "implicit", "因此", "causality", {1}, {3})
        doc, review = pdtb_to_dep("d", self.edus("a", "b", "c"), [rec], RULES)
        assert arcs(doc) == {(0, 1, "root"), (1, 3, "causality"), (1, 2, "joint")}
        assert doc.edge_of(3).provenance == "annotated"
        assert doc.edge_of(2).provenance == "complemented"
        assert len(review) == 1 and review[0].edge.dependent == 2

    def test_single_record(self):
        rec = PdtbRelationRecord("d", "explicit", "并且", "joint", {1}, {2})
        doc, review = pdtb_to_dep("d", self.edus("a", "b"), [rec], RULES)
        assert arcs(doc) == {(0, 1, "root"), (1, 2, "joint")}
        assert review == []

    def test_nested_arguments(self):
        recs = [PdtbRelationRecord("d", "explicit", "x", "causality", {1, 2}, {3}),
                PdtbRelationRecord("d", "explicit", "x", "expression", {1}, {2})]
        doc, review = pdtb_to_dep("d", self.edus("a", "b", "c"), recs, RULES)
        assert arcs(doc) == {(0, 1, "root"), (1, 2, "expression"), (1, 3, "causality")}
        assert review == []

    def test_conflicting_heads(self):
        recs = [PdtbRelationRecord("d", "explicit", "x", "joint", {1}, {2}),
                PdtbRelationRecord("d", "explicit", "x", "joint", {3}, {2})]
        with pytest.raises(ConversionError, match="conflicting heads for EDU 2"):
            pdtb_to_dep("d", self.edus("a", "b", "c"), recs, RULES)

    def test_cycle(self):
        recs = [PdtbRelationRecord("d", "explicit", "x", "joint", {1}, {2}),
                PdtbRelationRecord("d", "explicit", "x", "joint", {2}, {3}),
                PdtbRelationRecord("d", "explicit", "x", "joint", {3}, {1})]
        with pytest.raises(ConversionError, match="cycle"):
            pdtb_to_dep("d", self.edus("a", "b", "c"), recs, RULES)

    def test_head_override(self):
        rec = PdtbRelationRecord("d", "explicit", "因为", "causality", {1}, {2})
        doc, review = pdtb_to_dep("d", self.edus("a", "b"), [rec], RULES, {"causality": "arg2"})
        assert arcs(doc) == {(0, 2, "root"), (2, 1, "causality")}
        assert [r.reason for r in review] == ["head_direction_default"]

    def test_no_records(self):
        doc, review = pdtb_to_dep("d", self.edus("a", "b", "c"), [], RULES)
        assert doc.heads == [0, 1, 2]
        assert len(review) == 2

    def test_records_of_other_docs_ignored(self):
        rec = PdtbRelationRecord("e", "explicit", "x", "causality", {1}, {2})
        doc, _ = pdtb_to_dep("d", self.edus("a", "b"), [rec], RULES)
        assert doc.edge_of(2).provenance == "complemented"

    def test_out_of_range(self):
        rec = PdtbRelationRecord("d", "explicit", "x", "joint", {1}, {5})
        with pytest.raises(ConversionError):
            pdtb_to_dep("d", self.edus("a", "b"), [rec], RULES)


class TestMapping:
    def doc(self, *labels):
        heads = [0] + [1] * (len(labels) - 1)
        return DepDocument.from_heads("d", ["x"] * len(labels), heads, list(labels))

    def test_example_illustration(self):
        (out,), misses = map_relations([self.doc("root", "example illustration")], default_mapping(), "SU")
        assert out.labels("unified") == ["root", "explanation"] and misses == 0

    def test_root_unchanged(self):
        (out,), _ = map_relations([self.doc("root")], default_mapping(), "HIT")
        assert out.edges[0].rel_unified == "root"

    def test_unknown_counted(self):
        (out,), misses = map_relations([self.doc("root", "mystery")], default_mapping(), "SU")
        assert misses == 1 and out.labels("unified")[1] is None

    def test_strict(self):
        with pytest.raises(MappingError):
            map_relations([self.doc("root", "mystery")], default_mapping(), "SU", strict=True)

    def test_temporal_subtypes(self):
        (out,), _ = map_relations([self.doc("root", "temporal.synchronous", "temporal.asynchronous")],
                                  default_mapping(), "HIT")
        assert out.labels("unified")[1:] == ["temporal", "temporal"]


class TestCorrections:
    doc = DepDocument.from_heads("d", ["a", "b", "c"], [0, 1, 1], ["root", "joint", "joint"])

    def test_applied(self):
        out = apply_corrections(self.doc, [Correction(2, 3, "causality")])
        assert out.edge_of(2).head == 3 and out.edge_of(2).rel_original == "causality"
        assert not validate_tree(out)

    def test_cycle_rejected(self):
        with pytest.raises(InvalidTreeError, match="corrections rejected"):
            apply_corrections(self.doc, [Correction(2, 3, "joint"), Correction(3, 2, "joint")])
        assert self.doc.heads == [0, 1, 1]

    def test_empty_identity(self):
        assert apply_corrections(self.doc, []) is self.doc
