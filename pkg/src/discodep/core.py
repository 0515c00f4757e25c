"""Dependency discourse structure: EDUs, labeled edges, documents and their checks."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

ROOT = 0
ROOT_LABEL = "root"
UNLABELED = "_"

PROVENANCES = ("annotated", "complemented", "converted")
CONFIDENCES = ("high", "review")

SCHEMES = ("HIT", "SU", "SCI", "UNIFIED")
# Inventory sizes of the three source corpora and the unified target set.
EXPECTED_CARDINALITY = {"HIT": 22, "SU": 18, "SCI": 26, "UNIFIED": 17}


class InvalidTreeError(ValueError):
    pass


class NotASubtreeError(ValueError):
    pass


@dataclass(frozen=True)
class Edu:
    index: int
    text: str

    @property
    def char_len(self) -> int:
        return len(self.text)


@dataclass(frozen=True)
class DepEdge:
    head: int
    dependent: int
    rel_original: str
    rel_unified: str | None = None
    provenance: str = "annotated"
    confidence: str = "high"

    @property
    def is_root(self) -> bool:
        return self.head == ROOT

    def label(self, view: str = "original") -> str | None:
        if view == "original":
            return self.rel_original
        if view == "unified":
            return self.rel_unified
        raise ValueError(f"unknown label view {view!r}")


@dataclass(frozen=True)
class DepDocument:
    """A document: EDUs plus one head edge per EDU.

    ``edges`` is kept in dependent order by the constructors in this
    package, but nothing here assumes it; use :meth:`edge_of` for lookup.
    """

    doc_id: str
    edus: tuple[Edu, ...]
    edges: tuple[DepEdge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edus", tuple(self.edus))
        object.__setattr__(self, "edges", tuple(self.edges))

    @classmethod
    def from_heads(
        cls,
        doc_id: str,
        texts: Sequence[str],
        heads: Sequence[int],
        labels: Sequence[str] | None = None,
        provenance: str = "annotated",
    ) -> "DepDocument":
        """Build a document from a head sequence (``heads[i]`` heads EDU ``i+1``)."""
        if len(texts) != len(heads):
            raise ValueError("texts and heads differ in length")
        edus = tuple(Edu(i + 1, t) for i, t in enumerate(texts))
        edges = []
        for i, h in enumerate(heads):
            if labels is not None:
                lab = labels[i]
            else:
                lab = ROOT_LABEL if h == ROOT else UNLABELED
            edges.append(DepEdge(h, i + 1, lab, provenance=provenance))
        return cls(doc_id, edus, tuple(edges))

    def __len__(self) -> int:
        return len(self.edus)

    @property
    def n(self) -> int:
        return len(self.edus)

    def edge_of(self, dependent: int) -> DepEdge:
        for e in self.edges:
            if e.dependent == dependent:
                return e
        raise KeyError(dependent)

    @property
    def heads(self) -> list[int]:
        """Head of each EDU in document order; only meaningful for well-formed trees."""
        out = [-1] * self.n
        for e in self.edges:
            if 1 <= e.dependent <= self.n:
                out[e.dependent - 1] = e.head
        return out

    def labels(self, view: str = "original") -> list[str | None]:
        out: list[str | None] = [None] * self.n
        for e in self.edges:
            if 1 <= e.dependent <= self.n:
                out[e.dependent - 1] = e.label(view)
        return out

    def children(self) -> dict[int, list[int]]:
        kids: dict[int, list[int]] = {i: [] for i in range(self.n + 1)}
        for e in sorted(self.edges, key=lambda e: e.dependent):
            kids.setdefault(e.head, []).append(e.dependent)
        return kids

    def with_edges(self, edges: Iterable[DepEdge]) -> "DepDocument":
        return replace(self, edges=tuple(sorted(edges, key=lambda e: e.dependent)))

    def texts(self) -> list[str]:
        return [e.text for e in self.edus]


@dataclass(frozen=True)
class RelationScheme:
    scheme_id: str
    labels: tuple[str, ...]

    @property
    def cardinality(self) -> int:
        return len(self.labels)

    @property
    def cardinality_gap(self) -> int:
        """Labels still missing relative to the documented inventory size."""
        return EXPECTED_CARDINALITY[self.scheme_id] - self.cardinality


@dataclass(frozen=True)
class Violation:
    kind: str
    edu: int | None
    message: str

    def __str__(self) -> str:
        return self.message


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    @property
    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def add(self, kind: str, edu: int | None, message: str) -> None:
        self.violations.append(Violation(kind, edu, message))


def validate_tree(doc: DepDocument, single_root_child: bool = True) -> ValidationReport:
    """Report every violated tree invariant of ``doc``.

    Never raises on malformed input. With ``single_root_child`` off,
    several EDUs may attach to the artificial root.
    """
    report = ValidationReport()
    n = len(doc.edus)

    for pos, edu in enumerate(doc.edus, start=1):
        if edu.index != pos:
            report.add("edu index", edu.index, f"EDU at position {pos} has index {edu.index}")
        if not edu.text:
            report.add("empty text", edu.index, f"EDU {edu.index} has empty text")

    if len(doc.edges) != n:
        report.add("edge count", None, f"{len(doc.edges)} edges for {n} EDUs")

    heads: dict[int, int] = {}
    for e in doc.edges:
        d = e.dependent
        if d < 1 or d > n:
            report.add("dependent out of range", d, f"dependent {d} out of range 1..{n}")
            continue
        if e.head < 0 or e.head > n:
            report.add("head out of range", d, f"head {e.head} of EDU {d} out of range 0..{n}")
            continue
        if e.head == d:
            report.add("self loop", d, f"EDU {d} heads itself")
            continue
        if d in heads:
            report.add("multiple heads", d, f"EDU {d} has more than one head")
            continue
        heads[d] = e.head

    for d in range(1, n + 1):
        if d not in heads and not any(e.dependent == d for e in doc.edges):
            report.add("missing head", d, f"EDU {d} has no head")

    root_children = sorted(d for d, h in heads.items() if h == ROOT)
    if n and not root_children:
        report.add("no root edge", None, "no EDU attaches to the root")
    elif single_root_child and len(root_children) > 1:
        for d in root_children[1:]:
            report.add("multiple root children", d, f"EDU {d} is an extra child of the root")

    # Cycles: follow head pointers; each node is coloured once.
    state = dict.fromkeys(heads, 0)  # 0 unseen, 1 on path, 2 done
    on_cycle: set[int] = set()
    for start in sorted(heads):
        if state[start]:
            continue
        path = []
        node = start
        while node in heads and state[node] == 0:
            state[node] = 1
            path.append(node)
            node = heads[node]
        if node in heads and state[node] == 1:
            cycle = path[path.index(node):]
            on_cycle.update(cycle)
            report.add("cycle", min(cycle), "cycle through EDUs " + " -> ".join(map(str, cycle)))
        for p in path:
            state[p] = 2

    kids: dict[int, list[int]] = {}
    for d, h in heads.items():
        kids.setdefault(h, []).append(d)
    seen = {ROOT}
    queue = deque([ROOT])
    while queue:
        for k in kids.get(queue.popleft(), ()):
            if k not in seen:
                seen.add(k)
                queue.append(k)
    for d in sorted(heads):
        if d not in seen and d not in on_cycle:
            report.add("unreachable", d, f"EDU {d} is not reachable from the root")
    return report


def _require_valid(doc: DepDocument, single_root_child: bool = True) -> None:
    report = validate_tree(doc, single_root_child)
    if report:
        raise InvalidTreeError("invalid tree: " + "; ".join(map(str, report)))


def is_projective(doc: DepDocument, single_root_child: bool = True) -> bool:
    """True iff no two arcs cross with EDUs in document order and the root at 0."""
    _require_valid(doc, single_root_child)
    spans = sorted((min(e.head, e.dependent), max(e.head, e.dependent)) for e in doc.edges)
    for i, (a, b) in enumerate(spans):
        for c, d in spans[i + 1:]:
            if c >= b:
                break
            if a < c < b < d:
                return False
    return True


def subtree_root(doc: DepDocument, edu_set: Iterable[int]) -> int:
    members = set(edu_set)
    if not members:
        raise NotASubtreeError("not a subtree: empty EDU set")
    heads = doc.heads
    roots = [m for m in sorted(members) if heads[m - 1] not in members]
    if len(roots) != 1:
        raise NotASubtreeError(f"not a subtree: {len(roots)} members with external heads")
    return roots[0]


@dataclass(frozen=True)
class TreeFeatures:
    depth: int
    sibling_count: int
    child_count: int
    head_distance: int


def depths(heads: Sequence[int]) -> list[int]:
    """Edge count from the root for each EDU of a valid head sequence."""
    out = [0] * len(heads)
    for i in range(len(heads)):
        if out[i]:
            continue
        chain = []
        node = i + 1
        while node != ROOT and out[node - 1] == 0:
            chain.append(node)
            node = heads[node - 1]
        base = 0 if node == ROOT else out[node - 1]
        for k, c in enumerate(reversed(chain), start=1):
            out[c - 1] = base + k
    return out


def tree_features(doc: DepDocument, dependent: int) -> TreeFeatures:
    heads = doc.heads
    h = heads[dependent - 1]
    siblings = sum(1 for x in heads if x == h) - 1
    children = sum(1 for x in heads if x == dependent)
    return TreeFeatures(
        depth=depths(heads)[dependent - 1],
        sibling_count=siblings,
        child_count=children,
        head_distance=dependent - h,
    )
