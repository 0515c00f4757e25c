"""Arc score matrices and the two tree decoders."""
from __future__ import annotations

import numpy as np

from ..core import DepDocument
from ..kernels import eisner_kernel
from .features import EduAtoms, arc_feature_names
from .linear import ArcScorer, WeightTable


def arc_feature_ids(doc: DepDocument, table: WeightTable, grow: bool = False) -> np.ndarray:
    """Feature ids of every arc, shape (n+1, n+1, F); impossible arcs map to row 0."""
    at = EduAtoms(doc)
    n = doc.n
    names = arc_feature_names(at, 0, 1) if n else []
    out = np.zeros((n + 1, n + 1, len(names)), dtype=np.intp)
    for h in range(n + 1):
        for d in range(1, n + 1):
            if h != d:
                out[h, d] = table.ids(arc_feature_names(at, h, d), grow=grow)
    return out


def scores_from_ids(ids: np.ndarray, weights: np.ndarray) -> np.ndarray:
    s = weights[ids].sum(axis=-1)
    np.fill_diagonal(s, -np.inf)
    s[:, 0] = -np.inf
    return s


def score_matrix(model: ArcScorer, doc: DepDocument, use_averaged: bool = True) -> np.ndarray:
    """``s[h, d]`` for heads 0..n and dependents 1..n.

    Entries that are not arcs (``h == d`` or ``d == 0``) are ``-inf``.
    """
    return scores_from_ids(arc_feature_ids(doc, model.table), model.vector(use_averaged))


def tree_score(s: np.ndarray, heads) -> float:
    return float(sum(s[h, d] for d, h in enumerate(heads, start=1)))


def eisner_decode(s, single_root: bool = True, backend: str | None = None) -> list[int]:
    """Highest-scoring projective tree; ``heads[i]`` is the head of EDU ``i+1``."""
    s = np.asarray(s, dtype=np.float64)
    heads, _ = eisner_kernel(backend)(s, single_root)
    return list(heads)


def _chu_liu_edmonds(s: np.ndarray) -> list[int]:
    """Maximum arborescence rooted at node 0 of a dense score matrix.

    Returns a head for every node (entry 0 is a placeholder).
    """
    N = s.shape[0]
    heads = [0] + [int(np.argmax(s[:, d])) for d in range(1, N)]

    # look for a cycle among the greedy choices
    cycle: list[int] = []
    color = [0] * N
    for start in range(1, N):
        if color[start]:
            continue
        path = []
        v = start
        while v != 0 and color[v] == 0:
            color[v] = 1
            path.append(v)
            v = heads[v]
        if v != 0 and color[v] == 1:
            cycle = path[path.index(v):]
        for p in path:
            color[p] = 2
        if cycle:
            break
    if not cycle:
        return heads

    in_cycle = set(cycle)
    rest = [v for v in range(N) if v not in in_cycle]
    c = len(rest)  # id of the contracted node
    new_id = {v: i for i, v in enumerate(rest)}
    M = np.full((c + 1, c + 1), -np.inf)
    sub = s[np.ix_(rest, rest)]
    M[:c, :c] = sub

    cyc = np.array(cycle)
    gain = s[np.ix_(rest, cyc)] - s[[heads[v] for v in cycle], cyc][None, :]
    enter_k = np.argmax(gain, axis=1)
    M[:c, c] = gain[np.arange(c), enter_k]
    out = s[np.ix_(cyc, rest)]
    leave_k = np.argmax(out, axis=0)
    M[c, :c] = out[leave_k, np.arange(c)]
    M[:, 0] = -np.inf
    np.fill_diagonal(M, -np.inf)

    sub_heads = _chu_liu_edmonds(M)
    result = heads[:]
    for v in rest[1:]:
        h = sub_heads[new_id[v]]
        result[v] = cycle[leave_k[new_id[v]]] if h == c else rest[h]
    h = sub_heads[c]
    u = rest[h]
    result[cycle[enter_k[h]]] = u
    return result


def mst_decode(s, single_root: bool = True) -> list[int]:
    """Highest-scoring arborescence rooted at 0 (may be non-projective).

    With ``single_root`` the root takes exactly one dependent: each root
    child is tried in turn and the best tree kept.
    """
    s = np.array(s, dtype=np.float64)
    n = s.shape[0] - 1
    if n < 1:
        return []
    np.fill_diagonal(s, -np.inf)
    s[:, 0] = -np.inf
    if not single_root:
        return _chu_liu_edmonds(s)[1:]
    best, best_heads = -np.inf, None
    for r in range(1, n + 1):
        t = s.copy()
        keep = t[0, r]
        t[0, :] = -np.inf
        t[0, r] = keep
        heads = _chu_liu_edmonds(t)[1:]
        total = tree_score(s, heads)
        if best_heads is None or total > best:
            best, best_heads = total, heads
    return best_heads
