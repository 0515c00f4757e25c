from __future__ import annotations

from typing import Sequence

from ..core import ROOT, ROOT_LABEL, DepDocument, DepEdge, Edu, InvalidTreeError, validate_tree
from ..corpus.formats import EduSplitRecord
from ..corpus.rst import Internal, Leaf, RstTree, check_tree, leaves


def rst_to_dep(tree: RstTree, doc_id: str = "") -> DepDocument:
    """Flatten a nuclearity-marked tree into EDU dependencies.

    The head EDU of a node is the head EDU of its leftmost nucleus. Every
    other child's head EDU depends on the node's head EDU, labeled with the
    node's relation; the top head attaches to the artificial root.
    """
    check_tree(tree)
    edges: list[DepEdge] = []

    def head_of(node: RstTree) -> int:
        if isinstance(node, Leaf):
            return node.edu_index
        child_heads = [head_of(child) for _, child in node.children]
        nucleus = next(k for k, (nuc, _) in enumerate(node.children) if nuc == "N")
        h = child_heads[nucleus]
        for k, d in enumerate(child_heads):
            if k != nucleus:
                edges.append(DepEdge(h, d, node.label, provenance="converted"))
        return h

    top = head_of(tree)
    edges.append(DepEdge(ROOT, top, ROOT_LABEL, provenance="converted"))
    edus = tuple(Edu(leaf.edu_index, leaf.text) for leaf in leaves(tree))
    return DepDocument(doc_id, edus, tuple(sorted(edges, key=lambda e: e.dependent)))


def _intra_root(split: EduSplitRecord) -> int:
    k = len(split.parts)
    heads: dict[int, int] = {}
    for h, d, _ in split.intra_edges:
        if not (1 <= h <= k and 1 <= d <= k) or h == d:
            raise ValueError(f"EDU {split.original_index}: intra edge {h}->{d} out of range")
        if d in heads:
            raise ValueError(f"EDU {split.original_index}: part {d} has two heads")
        heads[d] = h
    roots = [p for p in range(1, k + 1) if p not in heads]
    if len(roots) != 1:
        raise ValueError(f"EDU {split.original_index}: intra edges do not form a tree")
    for p in heads:
        seen = set()
        while p in heads:
            if p in seen:
                raise ValueError(f"EDU {split.original_index}: intra edges contain a cycle")
            seen.add(p)
            p = heads[p]
    return roots[0]


def apply_edu_splits(doc: DepDocument, splits: Sequence[EduSplitRecord]) -> DepDocument:
    """Subdivide EDUs and renumber the document.

    The intra-tree root of each split inherits the original EDU's head and
    label (and its dependents); the other parts hang off per the split's
    intra edges.
    """
    mine = [s for s in splits if s.doc_id == doc.doc_id]
    if not mine:
        return doc
    by_index: dict[int, EduSplitRecord] = {}
    for s in mine:
        if not 1 <= s.original_index <= doc.n:
            raise ValueError(f"split of EDU {s.original_index} which does not exist in {doc.doc_id}")
        if s.original_index in by_index:
            raise ValueError(f"index collision: EDU {s.original_index} split twice in {doc.doc_id}")
        if not s.parts or any(not p for p in s.parts):
            raise ValueError(f"EDU {s.original_index}: empty part")
        by_index[s.original_index] = s

    # old index -> new index of the unit that represents it (the intra root)
    first_new: dict[int, int] = {}
    rep: dict[int, int] = {ROOT: ROOT}
    roots: dict[int, int] = {}
    nxt = 1
    for edu in doc.edus:
        first_new[edu.index] = nxt
        s = by_index.get(edu.index)
        if s is None:
            rep[edu.index] = nxt
            nxt += 1
        else:
            roots[edu.index] = _intra_root(s)
            rep[edu.index] = nxt + roots[edu.index] - 1
            nxt += len(s.parts)

    new_edus: list[Edu] = []
    new_edges: list[DepEdge] = []
    for edu in doc.edus:
        e = doc.edge_of(edu.index)
        s = by_index.get(edu.index)
        base = first_new[edu.index]
        if s is None:
            new_edus.append(Edu(base, edu.text))
            new_edges.append(DepEdge(rep[e.head], base, e.rel_original, e.rel_unified,
                                     e.provenance, e.confidence))
            continue
        for k, text in enumerate(s.parts):
            new_edus.append(Edu(base + k, text))
        new_edges.append(DepEdge(rep[e.head], rep[edu.index], e.rel_original, e.rel_unified,
                                 e.provenance, e.confidence))
        for h, d, label in s.intra_edges:
            new_edges.append(DepEdge(base + h - 1, base + d - 1, label, provenance="annotated"))

    out = DepDocument(doc.doc_id, tuple(new_edus), tuple(sorted(new_edges, key=lambda e: e.dependent)))
    report = validate_tree(out, single_root_child=False)
    if report:
        raise InvalidTreeError("split produced an invalid tree: " + "; ".join(map(str, report)))
    return out
