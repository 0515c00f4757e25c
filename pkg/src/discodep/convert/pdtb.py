"""PDTB-style relation records to dependency trees.

Argument spans are first completed into subtrees with discourse-marker
rules, each record then links the roots of its two arguments, and any
fragments left over are joined the same way before the root is attached.
"""
from __future__ import annotations

from typing import Mapping, Sequence

from ..core import ROOT, ROOT_LABEL, DepDocument, DepEdge, Edu, InvalidTreeError, validate_tree
from ..corpus.formats import MarkerRule, PdtbRelationRecord, ReviewItem

FALLBACK_LABEL = "joint"


class ConversionError(ValueError):
    pass


def match_marker(left: Edu, right: Edu, rules: Sequence[MarkerRule]) -> tuple[MarkerRule | None, bool]:
    """Pick the rule for an adjacent pair: longest matching marker, file order on ties.

    Returns ``(rule, ambiguous)``; ``ambiguous`` is set when another rule with
    an equally long marker disagrees on label or direction.
    """
    hits = [r for r in rules if r.marker in left.text or r.marker in right.text]
    if not hits:
        return None, False
    longest = max(len(r.marker) for r in hits)
    top = [r for r in hits if len(r.marker) == longest]
    chosen = top[0]
    ambiguous = any((r.label, r.attach) != (chosen.label, chosen.attach) for r in top[1:])
    return chosen, ambiguous


def complement_subtree(
    edus: Sequence[Edu], rules: Sequence[MarkerRule], doc_id: str = ""
) -> tuple[list[DepEdge], list[ReviewItem]]:
    """Link consecutive units of ``edus`` into one subtree.

    Each adjacent pair gets one edge. A right-headed rule cannot apply when
    the left unit already took a head from its own left neighbour; that pair
    falls back to a left head and is queued for review.
    """
    edges: list[DepEdge] = []
    review: list[ReviewItem] = []
    has_head: set[int] = set()
    for a, b in zip(edus, edus[1:]):
        rule, ambiguous = match_marker(a, b, rules)
        reason = None
        if rule is None:
            label, head, dep = FALLBACK_LABEL, a, b
            reason = "no_marker_match"
        else:
            label = rule.label
            if rule.attach == "right" and a.index not in has_head:
                head, dep = b, a
            else:
                head, dep = a, b
                if rule.attach == "right":
                    reason = "head_direction_default"
            if ambiguous and reason is None:
                reason = "ambiguous_marker"
        edge = DepEdge(head.index, dep.index, label, provenance="complemented",
                       confidence="review" if reason else "high")
        has_head.add(dep.index)
        edges.append(edge)
        if reason:
            review.append(ReviewItem(doc_id, edge, reason, label))
    return edges, review


class _Forest:
    def __init__(self, doc_id: str, edus: Sequence[Edu], rules: Sequence[MarkerRule]):
        self.doc_id = doc_id
        self.edus = {e.index: e for e in edus}
        self.rules = rules
        self.edges: dict[int, DepEdge] = {}
        self.review: list[ReviewItem] = []

    def head(self, d: int) -> int | None:
        e = self.edges.get(d)
        return None if e is None else e.head

    def add(self, edge: DepEdge) -> None:
        self.edges[edge.dependent] = edge

    def join(self, units: list[int]) -> None:
        edges, review = complement_subtree([self.edus[u] for u in units], self.rules, self.doc_id)
        for e in edges:
            self.add(e)
        self.review.extend(review)

    def complete(self, span: frozenset[int]) -> int:
        """Make ``span`` a single subtree and return its root."""
        open_ = [u for u in sorted(span) if self.head(u) not in span]
        if len(open_) == 1:
            return open_[0]
        if any(self.head(u) is not None for u in open_):
            raise ConversionError(
                f"argument span {sorted(span)} in {self.doc_id} is not a subtree of earlier relations")
        self.join(open_)
        return next(u for u in open_ if self.head(u) is None)

    def ancestors(self, node: int) -> list[int]:
        chain = [node]
        while (h := self.head(chain[-1])) is not None and h != ROOT:
            chain.append(h)
        return chain


def pdtb_to_dep(
    doc_id: str,
    edus: Sequence[Edu],
    records: Sequence[PdtbRelationRecord],
    rules: Sequence[MarkerRule],
    head_overrides: Mapping[str, str] | None = None,
) -> tuple[DepDocument, list[ReviewItem]]:
    """Convert one document's relation records into a dependency tree.

    ``head_overrides`` maps a relation label to ``"arg1"`` or ``"arg2"``,
    naming the argument whose root becomes the head; without an entry the
    ARG1 root heads the relation.
    """
    n = len(edus)
    if [e.index for e in edus] != list(range(1, n + 1)):
        raise ConversionError(f"{doc_id}: EDU indices must be 1..{n}")
    head_overrides = head_overrides or {}
    mine = [r for r in records if r.doc_id == doc_id]
    for r in mine:
        bad = sorted(i for i in r.arg1 | r.arg2 if not 1 <= i <= n)
        if bad:
            raise ConversionError(f"{doc_id}: record references EDU {bad[0]} outside 1..{n}")
        if not r.arg1 or not r.arg2 or r.arg1 & r.arg2:
            raise ConversionError(f"{doc_id}: record arguments must be non-empty and disjoint")

    forest = _Forest(doc_id, edus, rules)
    # narrow relations first, so wider arguments see their inner structure
    order = sorted(range(len(mine)), key=lambda k: (len(mine[k].arg1 | mine[k].arg2),
                                                   min(mine[k].arg1 | mine[k].arg2), k))
    for k in order:
        rec = mine[k]
        r1 = forest.complete(rec.arg1)
        r2 = forest.complete(rec.arg2)
        side = head_overrides.get(rec.label)
        head, dep = (r2, r1) if side == "arg2" else (r1, r2)
        existing = forest.head(dep)
        if existing is not None:
            if existing == head:
                continue  # duplicate record
            raise ConversionError(f"conflicting heads for EDU {dep} in {doc_id}")
        chain = forest.ancestors(head)
        if dep in chain:
            cycle = chain[:chain.index(dep) + 1][::-1] + [dep]
            raise ConversionError(f"records induce a cycle in {doc_id}: " + " -> ".join(map(str, cycle)))
        edge = DepEdge(head, dep, rec.label, provenance="annotated")
        forest.add(edge)
        if side is not None:
            forest.review.append(ReviewItem(doc_id, edge, "head_direction_default", rec.label))

    fragments = [i for i in range(1, n + 1) if forest.head(i) is None]
    if len(fragments) > 1:
        forest.join(fragments)
    top = [i for i in range(1, n + 1) if forest.head(i) is None]
    if n:
        forest.add(DepEdge(ROOT, top[0], ROOT_LABEL, provenance="complemented"))

    doc = DepDocument(doc_id, tuple(edus), tuple(forest.edges[i] for i in range(1, n + 1)))
    report = validate_tree(doc)
    if report:
        raise InvalidTreeError(f"{doc_id}: conversion produced an invalid tree: "
                               + "; ".join(map(str, report)))
    return doc, forest.review
