from __future__ import annotations

from dataclasses import replace

from ..core import ROOT, DepDocument, _require_valid


def _dominated(heads: list[int], head: int, node: int) -> bool:
    while node != ROOT:
        if node == head:
            return True
        node = heads[node - 1]
    return head == ROOT


def nonprojective_arcs(heads: list[int]) -> list[tuple[int, int]]:
    """Arcs (head, dependent) spanning a node their head does not dominate."""
    out = []
    for d, h in enumerate(heads, start=1):
        lo, hi = min(h, d), max(h, d)
        if any(not _dominated(heads, h, k) for k in range(lo + 1, hi)):
            out.append((h, d))
    return out


def projectivize(doc: DepDocument) -> DepDocument:
    """Lift non-projective arcs until the tree is projective.

    Each round reattaches the dependent of the shortest offending arc
    (leftmost dependent on ties) to its grandparent, keeping its label.
    """
    _require_valid(doc)
    heads = doc.heads
    lifted = False
    while True:
        bad = nonprojective_arcs(heads)
        if not bad:
            break
        h, d = min(bad, key=lambda a: (abs(a[0] - a[1]), a[1]))
        heads[d - 1] = heads[h - 1]
        lifted = True
    if not lifted:
        return doc
    edges = [replace(e, head=heads[e.dependent - 1]) for e in doc.edges]
    return doc.with_edges(edges)
