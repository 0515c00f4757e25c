"""Attachment scores and inter-annotator agreement."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .core import ROOT, DepDocument


class AlignmentError(ValueError):
    pass


@dataclass
class EvalResult:
    uas: float
    las_original: float
    las_unified: float
    n_edus_scored: int
    per_label_confusion: dict[tuple[str, str], int] = field(default_factory=dict)
    label_view: str = "original"

    @property
    def las(self) -> float:
        return self.las_unified if self.label_view == "unified" else self.las_original

    def to_tsv(self) -> str:
        rows = [
            ("UAS", f"{self.uas:.4f}"),
            ("LAS_O", f"{self.las_original:.4f}"),
            ("LAS_U", f"{self.las_unified:.4f}"),
            ("n_edus", str(self.n_edus_scored)),
        ]
        out = ["metric\tvalue"] + [f"{k}\t{v}" for k, v in rows]
        for (g, p), c in sorted(self.per_label_confusion.items()):
            out.append(f"confusion\t{g}\t{p}\t{c}")
        return "\n".join(out) + "\n"

    def summary(self) -> str:
        key = "LAS_U" if self.label_view == "unified" else "LAS_O"
        return f"UAS\t{self.uas:.4f}\n{key}\t{self.las:.4f}\nEDUs\t{self.n_edus_scored}\n"


def _align(gold: Sequence[DepDocument], pred: Sequence[DepDocument]) -> list[tuple[DepDocument, DepDocument]]:
    by_id = {}
    for d in pred:
        if d.doc_id in by_id:
            raise AlignmentError(f"duplicate document {d.doc_id!r} in prediction")
        by_id[d.doc_id] = d
    if len(by_id) != len(gold):
        extra = sorted(set(by_id) - {g.doc_id for g in gold})
        if extra:
            raise AlignmentError(f"document {extra[0]!r} is not in the gold corpus")
    pairs = []
    for g in gold:
        p = by_id.get(g.doc_id)
        if p is None:
            raise AlignmentError(f"document {g.doc_id!r} missing from prediction")
        if p.n != g.n:
            raise AlignmentError(f"document {g.doc_id!r}: {g.n} gold EDUs vs {p.n} predicted")
        pairs.append((g, p))
    return pairs


def _norm(label):
    return "_" if label is None else label


def score(
    gold: Sequence[DepDocument],
    pred: Sequence[DepDocument],
    label_view: str = "original",
    exclude_root: bool = False,
    macro: bool = False,
) -> EvalResult:
    """Attachment scores of ``pred`` against ``gold``, matched by doc id.

    Root attachments count as ordinary heads unless ``exclude_root``.
    Scores are micro-averaged over EDUs; ``macro`` averages per document.
    """
    if label_view not in ("original", "unified"):
        raise ValueError(f"unknown label view {label_view!r}")
    confusion: Counter[tuple[str, str]] = Counter()
    per_doc = []
    tot = [0, 0, 0, 0]  # scored, head ok, head+orig ok, head+unified ok
    for g, p in _align(gold, pred):
        gh, ph = g.heads, p.heads
        go, po = g.labels("original"), p.labels("original")
        gu, pu = g.labels("unified"), p.labels("unified")
        gl = go if label_view == "original" else gu
        pl = po if label_view == "original" else pu
        doc = [0, 0, 0, 0]
        for i in range(g.n):
            if gh[i] != ROOT:
                confusion[(_norm(gl[i]), _norm(pl[i]))] += 1
            elif exclude_root:
                continue
            doc[0] += 1
            if gh[i] == ph[i]:
                doc[1] += 1
                doc[2] += _norm(go[i]) == _norm(po[i])
                doc[3] += _norm(gu[i]) == _norm(pu[i])
        per_doc.append(doc)
        tot = [a + b for a, b in zip(tot, doc)]

    if macro:
        rated = [d for d in per_doc if d[0]]
        k = len(rated)
        vals = [sum(d[j] / d[0] for d in rated) / k if k else 0.0 for j in (1, 2, 3)]
    else:
        vals = [tot[j] / tot[0] if tot[0] else 0.0 for j in (1, 2, 3)]
    return EvalResult(vals[0], vals[1], vals[2], tot[0], dict(confusion), label_view)


@dataclass(frozen=True)
class Agreement:
    uas: float
    las: float


def agreement(a: Sequence[DepDocument], b: Sequence[DepDocument], label_view: str = "original") -> Agreement:
    """Agreement between two annotations of the same documents.

    Both sides carry one head per EDU, so the result is symmetric.
    """
    r = score(a, b, label_view)
    return Agreement(r.uas, r.las)
