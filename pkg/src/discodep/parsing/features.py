"""Feature templates for arc scoring, transition classification and relation labeling.

Every template set yields a fixed number of binary features per event: a
bias, the atomic features and all pairwise conjunctions of the atoms.
"""
from __future__ import annotations

from itertools import combinations

from ..core import ROOT, DepDocument, TreeFeatures

NONE = "NONE"


def len_bucket(n: int) -> str:
    if n <= 5:
        return "1-5"
    if n <= 10:
        return "6-10"
    if n <= 20:
        return "11-20"
    if n <= 40:
        return "21-40"
    return "41+"


def dist_bucket(k: int) -> str:
    k = abs(k)
    if k <= 4:
        return str(k)
    return "5-9" if k < 10 else "10+"


def pos_bucket(i: int, n: int) -> str:
    if i == 1:
        return "first"
    if i == n:
        return "last"
    third = (i - 1) * 3 // n
    return ("early", "mid", "late")[third]


def count_bucket(c: int) -> str:
    return str(c) if c < 3 else "3+"


def signed_bucket(k: int) -> str:
    return ("-" if k < 0 else "+") + dist_bucket(k)


class EduAtoms:
    """Per-EDU atoms of a document, computed once."""

    __slots__ = ("first", "last", "length", "pos", "n")

    def __init__(self, doc: DepDocument):
        n = doc.n
        self.n = n
        self.first = ["ROOT"] + [e.text[0] if e.text else NONE for e in doc.edus]
        self.last = ["ROOT"] + [e.text[-1] if e.text else NONE for e in doc.edus]
        self.length = ["ROOT"] + [len_bucket(e.char_len) for e in doc.edus]
        self.pos = ["ROOT"] + [pos_bucket(e.index, n) for e in doc.edus]


def _with_conjunctions(atoms: list[str]) -> list[str]:
    out = ["bias"]
    out.extend(atoms)
    out.extend(f"{a}&{b}" for a, b in combinations(atoms, 2))
    return out


def arc_atoms(at: EduAtoms, head: int, dep: int) -> list[str]:
    return [
        "h.first=" + at.first[head],
        "h.last=" + at.last[head],
        "d.first=" + at.first[dep],
        "d.last=" + at.last[dep],
        "h.len=" + at.length[head],
        "d.len=" + at.length[dep],
        "h.pos=" + at.pos[head],
        "d.pos=" + at.pos[dep],
        "dist=" + dist_bucket(dep - head),
        "dir=" + ("right" if dep > head else "left"),
        "head=ROOT" if head == ROOT else "head=EDU",
    ]


def arc_feature_names(at: EduAtoms, head: int, dep: int) -> list[str]:
    return _with_conjunctions(arc_atoms(at, head, dep))


def extract_arc_features(doc: DepDocument, head: int, dependent: int) -> dict[str, float]:
    """Sparse arc feature vector; every value is a positive count."""
    vec: dict[str, float] = {}
    for name in arc_feature_names(EduAtoms(doc), head, dependent):
        vec[name] = vec.get(name, 0.0) + 1.0
    return vec


def config_feature_names(at: EduAtoms, stack, buffer, n_left, n_right) -> list[str]:
    """Features of a transition configuration.

    ``n_left``/``n_right`` count dependents attached so far on each side of
    every node, indexed by node.
    """
    s0 = stack[-1] if stack else None
    s1 = stack[-2] if len(stack) > 1 else None
    b0 = buffer[0] if buffer else None

    def node(prefix, i):
        if i is None:
            return [f"{prefix}.first={NONE}", f"{prefix}.last={NONE}", f"{prefix}.len={NONE}"]
        return [f"{prefix}.first={at.first[i]}", f"{prefix}.last={at.last[i]}",
                f"{prefix}.len={at.length[i]}"]

    atoms = node("s0", s0) + node("s1", s1) + node("b0", b0)
    if s0 is not None and s1 is not None:
        atoms.append("dist=" + dist_bucket(s0 - s1))
    else:
        atoms.append("dist=" + NONE)
    for prefix, i in (("s0", s0), ("s1", s1)):
        if i is None:
            atoms += [f"{prefix}.lc={NONE}", f"{prefix}.rc={NONE}"]
        else:
            atoms += [f"{prefix}.lc={count_bucket(n_left[i])}", f"{prefix}.rc={count_bucket(n_right[i])}"]
    return _with_conjunctions(atoms)


def tree_atoms(tf: TreeFeatures) -> list[str]:
    return [
        "tree.depth=" + (str(tf.depth) if tf.depth < 6 else "6+"),
        "tree.sib=" + count_bucket(tf.sibling_count),
        "tree.child=" + count_bucket(tf.child_count),
        "tree.hdist=" + signed_bucket(tf.head_distance),
    ]


def label_feature_names(at: EduAtoms, head: int, dep: int, tf: TreeFeatures | None) -> list[str]:
    """Relation-labeling features: arc templates, plus tree-structure ones when given."""
    names = arc_feature_names(at, head, dep)
    if tf is None:
        return names
    tree = tree_atoms(tf)
    direction = "dir=" + ("right" if dep > head else "left")
    names += tree
    names += [f"{a}&{b}" for a, b in combinations(tree, 2)]
    names += [f"{a}&{direction}" for a in tree]
    return names
